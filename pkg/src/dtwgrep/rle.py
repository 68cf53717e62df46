"""Run-length encoded strings and the text formats they are read from."""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np

Letter = Hashable


@dataclass(frozen=True)
class Run:
    letter: Letter
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"run length must be positive, got {self.length}")


@dataclass(frozen=True)
class RleString:
    """A string stored as maximal runs ``(letter, length)``.

    Positions are 1-based throughout, matching the DP table coordinates:
    run ``i`` (1-based) covers ``starts[i-1] .. ends[i-1]`` inclusive.
    """

    runs: tuple[Run, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "runs", tuple(self.runs))
        for prev, cur in zip(self.runs, self.runs[1:]):
            if prev.letter == cur.letter:
                raise ValueError(f"adjacent runs share letter {cur.letter!r}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Letter, int]]) -> "RleString":
        """Build from (letter, count) pairs, merging equal neighbours."""
        merged: list[list] = []
        for letter, count in pairs:
            if count < 1:
                raise ValueError(f"run length must be positive, got {count}")
            if merged and merged[-1][0] == letter:
                merged[-1][1] += count
            else:
                merged.append([letter, count])
        return cls(tuple(Run(a, c) for a, c in merged))

    def __len__(self) -> int:
        return self.total_length

    @property
    def num_runs(self) -> int:
        return len(self.runs)

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.fromiter((r.length for r in self.runs), dtype=np.int64, count=len(self.runs))

    @cached_property
    def ends(self) -> np.ndarray:
        return np.cumsum(self.lengths)

    @cached_property
    def starts(self) -> np.ndarray:
        return self.ends - self.lengths + 1

    @property
    def run_starts(self) -> list[int]:
        return self.starts.tolist()

    @cached_property
    def total_length(self) -> int:
        return int(self.lengths.sum()) if self.runs else 0

    @property
    def heads(self) -> tuple[Letter, ...]:
        return tuple(r.letter for r in self.runs)

    def __str__(self) -> str:
        return "".join(f"({r.letter},{r.length})" for r in self.runs)


def rle_encode(s: Sequence[Letter]) -> RleString:
    """``"aabbbc"`` -> ``(a,2)(b,3)(c,1)``."""
    runs = []
    i = 0
    n = len(s)
    while i < n:
        j = i + 1
        while j < n and s[j] == s[i]:
            j += 1
        runs.append(Run(s[i], j - i))
        i = j
    return RleString(tuple(runs))


def _join(letters: list) -> str | list:
    if all(isinstance(a, str) and len(a) == 1 for a in letters):
        return "".join(letters)
    return letters


def rle_decode(x: RleString) -> str | list:
    """Expand runs back to a plain sequence (a ``str`` when letters are characters)."""
    out = []
    for r in x.runs:
        out.extend([r.letter] * r.length)
    return _join(out)


def run_heads(x: RleString) -> str | list:
    """The letter of every run, e.g. ``(a,2)(b,3)(c,1)`` -> ``"abc"``."""
    return _join(list(x.heads))


def position_to_run(x: RleString, j: int) -> tuple[int, int]:
    """Map 1-based position ``j`` to ``(run index, offset in run)``, both 1-based."""
    if not 1 <= j <= x.total_length:
        raise IndexError(f"position {j} outside 1..{x.total_length}")
    idx = bisect.bisect_right(x.run_starts, j)
    return idx, j - int(x.starts[idx - 1]) + 1


def as_rle(s: RleString | Sequence[Letter]) -> RleString:
    return s if isinstance(s, RleString) else rle_encode(s)


def as_plain(s: RleString | Sequence[Letter]) -> Sequence[Letter]:
    return rle_decode(s) if isinstance(s, RleString) else s


@dataclass
class Alphabet:
    """Interns letters to dense integer codes ``0..size-1``."""

    codes: dict = field(default_factory=dict)
    letters: list = field(default_factory=list)

    def add(self, letter: Letter) -> int:
        code = self.codes.get(letter)
        if code is None:
            code = len(self.letters)
            self.codes[letter] = code
            self.letters.append(letter)
        return code

    def encode(self, seq: Iterable[Letter]) -> np.ndarray:
        return np.array([self.add(a) for a in seq], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.letters)


# ---------------------------------------------------------------- file formats

_RLE_LINE = re.compile(r"^\s*(\S+)\s+(\d+)\s*$")


def parse_rle_text(text: str) -> RleString:
    """Parse ``<letter> <count>`` lines; ``#`` starts a comment."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RLE_LINE.match(line)
        if m is None:
            raise ValueError(f"line {lineno}: expected '<letter> <count>', got {raw!r}")
        pairs.append((m.group(1), int(m.group(2))))
    return RleString.from_pairs(pairs)


def format_rle_text(x: RleString) -> str:
    return "".join(f"{r.letter} {r.length}\n" for r in x.runs)


def parse_fasta(text: str) -> dict[str, str]:
    """Records keyed by id (first word of the header); sequence lines are concatenated and uppercased."""
    records: dict[str, list[str]] = {}
    current = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            current = line[1:].split()[0] if len(line) > 1 else ""
            records.setdefault(current, [])
        else:
            if current is None:
                raise ValueError("sequence data before the first FASTA header")
            records[current].append(line.upper())
    return {k: "".join(v) for k, v in records.items()}


def looks_like_rle(text: str) -> bool:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    return bool(lines) and all(_RLE_LINE.match(ln) for ln in lines)


def read_sequence(path: str | Path, fmt: str = "auto") -> RleString:
    """Load a string from a plain, FASTA or RLE text file.

    FASTA input keeps the first record only. Plain files have whitespace
    stripped.
    """
    text = Path(path).read_text()
    if fmt == "auto":
        if text.lstrip().startswith(">"):
            fmt = "fasta"
        elif looks_like_rle(text):
            fmt = "rle"
        else:
            fmt = "plain"
    if fmt == "rle":
        return parse_rle_text(text)
    if fmt == "fasta":
        records = parse_fasta(text)
        if not records:
            raise ValueError(f"{path}: no FASTA records")
        return rle_encode(next(iter(records.values())))
    if fmt == "plain":
        return rle_encode("".join(text.split()))
    raise ValueError(f"unknown sequence format {fmt!r}")
