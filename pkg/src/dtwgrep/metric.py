"""Distances between letters."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

DISCRETE = "discrete"
INT_TABLE = "int-table"
REAL_TABLE = "real-table"
TREE = "tree"


@dataclass(frozen=True)
class LetterMetric:
    """A letter distance ``d`` with ``d(a, a) = 0``.

    Integer kinds additionally guarantee ``d(a, b) >= 1`` for ``a != b``,
    which the thresholded algorithms rely on.
    """

    kind: str
    lookup: Callable[[Hashable, Hashable], float]
    letters: tuple | None = None

    @property
    def is_integer(self) -> bool:
        return self.kind in (DISCRETE, INT_TABLE)

    def __call__(self, a, b):
        return self.lookup(a, b)

    @classmethod
    def discrete(cls) -> "LetterMetric":
        return cls(DISCRETE, _discrete)

    @classmethod
    def from_table(cls, table: Mapping[tuple, float], symmetric: bool = True) -> "LetterMetric":
        """Build from ``{(a, b): value}``; missing mirrored pairs are filled in when symmetric."""
        full = dict(table)
        letters = sorted({a for pair in full for a in pair}, key=repr)
        for a in letters:
            full.setdefault((a, a), 0)
        if symmetric:
            for (a, b), v in list(full.items()):
                other = full.setdefault((b, a), v)
                if other != v:
                    raise ValueError(f"asymmetric table: d({a},{b})={v} but d({b},{a})={other}")
        for a in letters:
            if full[(a, a)] != 0:
                raise ValueError(f"d({a},{a}) must be 0")
        for (a, b), v in full.items():
            if a != b and not v > 0:
                raise ValueError(f"d({a},{b}) must be positive, got {v}")
            if not math.isfinite(v):
                raise ValueError(f"d({a},{b}) is not finite")
        integer = all(float(v).is_integer() for v in full.values())
        if integer:
            full = {k: int(v) for k, v in full.items()}

        def lookup(a, b, _t=full):
            if a == b:
                return 0
            try:
                return _t[(a, b)]
            except KeyError:
                raise KeyError(f"no distance for letters {a!r}, {b!r}") from None

        return cls(INT_TABLE if integer else REAL_TABLE, lookup, tuple(letters))

    @classmethod
    def from_matrix(cls, letters: Sequence, matrix) -> "LetterMetric":
        matrix = np.asarray(matrix)
        if matrix.shape != (len(letters), len(letters)):
            raise ValueError("matrix shape does not match the letter list")
        table = {(a, b): matrix[i, j].item() for i, a in enumerate(letters) for j, b in enumerate(letters)}
        return cls.from_table(table)

    def cost_matrix(self, letters: Sequence) -> np.ndarray:
        """Dense matrix over interned letters; int64 for integer kinds, float64 otherwise."""
        n = len(letters)
        dtype = np.int64 if self.is_integer else np.float64
        out = np.zeros((n, n), dtype=dtype)
        for i, a in enumerate(letters):
            for j, b in enumerate(letters):
                if i != j:
                    out[i, j] = self.lookup(a, b)
        return out


def _discrete(a, b) -> int:
    return 0 if a == b else 1


def parse_metric_table(text: str) -> LetterMetric:
    """Square matrix with a header row of letters and one row per letter::

        # comment
          A C G T
        A 0 1 2 1
        C 1 0 1 2
        ...
    """
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError("empty metric table")
    header = rows[0]
    table = {}
    for r in rows[1:]:
        if len(r) != len(header) + 1:
            raise ValueError(f"row {r[0]!r} has {len(r) - 1} values, expected {len(header)}")
        a = r[0]
        for b, v in zip(header, r[1:]):
            table[(a, b)] = float(v)
    missing = set(header) - {r[0] for r in rows[1:]}
    if missing:
        raise ValueError(f"metric table lacks rows for {sorted(missing)}")
    return LetterMetric.from_table(table)


def read_metric_table(path: str | Path) -> LetterMetric:
    return parse_metric_table(Path(path).read_text())
