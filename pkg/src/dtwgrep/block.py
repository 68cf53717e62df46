"""Thresholded DTW pattern matching over run-length encoded strings.

The table is swept block by block (one block per pair of runs). Of every
block only the *interesting* border cells, those with value at most ``k``,
are kept, as threshold positions: ``q_top[l]`` is the last column of the
block's top row holding a value ``<= l`` (``i_t - 1`` when there is none),
and likewise ``q_bot`` for the bottom row and ``q_left``/``q_right`` (rows,
sentinel ``i_p - 1``) for the first and last column. Each block costs
``O(k)``, so the whole sweep is ``O(k m n)`` for ``m`` and ``n`` runs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numba import njit

from .metric import LetterMetric
from .rle import Alphabet, RleString, as_rle


class _AboveThreshold:
    __slots__ = ()

    def __repr__(self) -> str:
        return ">k"

    def __reduce__(self):
        return "GT_K"


GT_K = _AboveThreshold()
"""Returned by retrieval for positions whose value exceeds ``k``."""


@dataclass(frozen=True)
class Block:
    i_p: int
    j_p: int
    i_t: int
    j_t: int
    d: int

    @property
    def h(self) -> int:
        return self.j_p - self.i_p

    @property
    def w(self) -> int:
        return self.j_t - self.i_t

    @property
    def homogeneous(self) -> bool:
        return self.d == 0


@dataclass
class BorderProfile:
    k: int
    q_top: np.ndarray
    q_bot: np.ndarray
    q_left: np.ndarray
    q_right: np.ndarray


# ------------------------------------------------------------------ kernels


@njit(cache=True, nogil=True)
def _value_at(q, pos, k):
    # smallest l with q[l] >= pos; k + 1 when none
    lo = 0
    hi = k + 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if q[mid] >= pos:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True, nogil=True)
def _left_top(ip, jp, it, jt, d, k, left_right, top_bot, corner, q_left, q_top):
    ops = 0
    for l in range(k + 1):
        if l < corner:
            q_left[l] = ip - 1
            q_top[l] = it - 1
        elif d == 0:
            q_left[l] = jp
            q_top[l] = jt
        else:
            # corner <= l implies l - d >= 0
            r = left_right[l - d]
            if q_left[l - d] > r:
                r = q_left[l - d]
            q_left[l] = r + 1 if r + 1 < jp else jp
            c = top_bot[l - d]
            if q_top[l - d] > c:
                c = q_top[l - d]
            q_top[l] = c + 1 if c + 1 < jt else jt
        ops += 2
    return ops


@njit(cache=True, nogil=True)
def _bottom_right(ip, jp, it, jt, d, k, q_left, q_top, q_bot, q_right):
    h = jp - ip
    w = jt - it
    if d == 0:
        # constant block: the corner cell decides every border cell
        for l in range(k + 1):
            q_bot[l] = jt if q_left[l] >= ip else it - 1
            q_right[l] = jp if q_left[l] >= ip else ip - 1
        return 2 * (k + 1)
    hd = h * d
    wd = w * d
    tmax = h if h < w else w
    t = -1
    s = -1
    ops = 0
    for l in range(k + 1):
        # bottom row: past column i_t + h it copies the top row shifted by h,
        # before that it climbs the first column diagonally
        if w > h and l >= hd and q_top[l - hd] >= it + 1:
            y = q_top[l - hd] + h
            q_bot[l] = y if y < jt else jt
        else:
            while t < tmax:
                u = t + 1
                r = l - u * d
                if r >= 0 and q_left[r] >= jp - u:
                    t = u
                    ops += 1
                else:
                    break
            q_bot[l] = it + t
        # last column, transposed
        if h > w and l >= wd and q_left[l - wd] >= ip + 1:
            x = q_left[l - wd] + w
            q_right[l] = x if x < jp else jp
        else:
            while s < tmax:
                u = s + 1
                r = l - u * d
                if r >= 0 and q_top[r] >= jt - u:
                    s = u
                    ops += 1
                else:
                    break
            q_right[l] = ip + s
        ops += 2
    return ops


@njit(cache=True, nogil=True)
def _kdtw_kernel(p_let, p_start, p_end, t_let, t_start, t_end, cost, k):
    m = p_let.shape[0]
    n = t_let.shape[0]
    width = k + 1
    above = k + 1
    prev_bot = np.empty((n, width), dtype=np.int64)
    cur_bot = np.empty((n, width), dtype=np.int64)
    # row 0 of the table is all zeros
    for b in range(n):
        for l in range(width):
            prev_bot[b, l] = t_end[b]
    left_right = np.empty(width, dtype=np.int64)
    q_left = np.empty(width, dtype=np.int64)
    q_top = np.empty(width, dtype=np.int64)
    q_right = np.empty(width, dtype=np.int64)
    ops = 0
    for a in range(m):
        ip = p_start[a]
        jp = p_end[a]
        # column 0 of the table is infinite
        for l in range(width):
            left_right[l] = ip - 1
        for b in range(n):
            it = t_start[b]
            jt = t_end[b]
            d = cost[p_let[a], t_let[b]]
            if a == 0:
                top = 0
                diag = 0
            else:
                top = _value_at(prev_bot[b], it, k)
                diag = above if b == 0 else _value_at(prev_bot[b - 1], t_end[b - 1], k)
            left = above if b == 0 else _value_at(left_right, ip, k)
            ops += 3
            corner = min(diag, top, left) + d
            if corner > above:
                corner = above
            if corner > k:
                # the corner is the block minimum, so nothing here is interesting
                for l in range(width):
                    cur_bot[b, l] = it - 1
                    left_right[l] = ip - 1
                ops += 4 * width
                continue
            ops += _left_top(ip, jp, it, jt, d, k, left_right, prev_bot[b], corner, q_left, q_top)
            ops += _bottom_right(ip, jp, it, jt, d, k, q_left, q_top, cur_bot[b], q_right)
            for l in range(width):
                left_right[l] = q_right[l]
        prev_bot, cur_bot = cur_bot, prev_bot
    return prev_bot, ops


# --------------------------------------------------------- per-block wrappers


def border_right(block: Block, x: int, top_row: Callable[[int], int], left_col: Callable[[int], int]) -> int:
    """``D[x, j_t]`` from the block's top row ``D[i_p, .]`` and first column ``D[., i_t]``."""
    if not block.i_p < x <= block.j_p:
        raise ValueError(f"row {x} not in ({block.i_p}, {block.j_p}]")
    off = x - block.i_p
    if off <= block.w:
        return top_row(block.j_t - off) + off * block.d
    return left_col(x - block.w) + block.w * block.d


def border_bottom(block: Block, y: int, top_row: Callable[[int], int], left_col: Callable[[int], int]) -> int:
    """``D[j_p, y]``, the transposed counterpart of :func:`border_right`."""
    if not block.i_t < y <= block.j_t:
        raise ValueError(f"column {y} not in ({block.i_t}, {block.j_t}]")
    off = y - block.i_t
    if off <= block.h:
        return left_col(block.j_p - off) + off * block.d
    return top_row(y - block.h) + block.h * block.d


def _as_profile(values: Sequence[int] | None, fill: int, k: int) -> np.ndarray:
    if values is None:
        return np.full(k + 1, fill, dtype=np.int64)
    arr = np.asarray(values, dtype=np.int64)
    if arr.shape != (k + 1,):
        raise ValueError(f"profile must have k + 1 = {k + 1} entries")
    return arr


def corner_value(block: Block, left_right, top_bot, diag_value, k: int) -> int:
    """``D[i_p, i_t]`` capped at ``k + 1``; ``None`` neighbours are the table's
    zero row (top) and infinite column (left)."""
    top = 0 if top_bot is None else _value_at(_as_profile(top_bot, 0, k), block.i_t, k)
    left = k + 1 if left_right is None else _value_at(_as_profile(left_right, 0, k), block.i_p, k)
    diag = k + 1 if diag_value is None or diag_value > k else int(diag_value)
    return min(k + 1, min(top, left, diag) + block.d)


def propagate_left_top(block: Block, left_right, top_bot, diag_value, k: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Threshold profiles of the block's first column and top row.

    ``left_right`` is the left neighbour's ``q_right``, ``top_bot`` the top
    neighbour's ``q_bot`` (``None`` for the table boundary) and
    ``diag_value`` is ``D[i_p - 1, i_t - 1]`` (anything above ``k`` works for
    "not interesting"). Returns ``(q_left, q_top, corner)``.
    """
    corner = corner_value(block, left_right, top_bot, diag_value, k)
    lr = _as_profile(left_right, block.i_p - 1, k)
    tb = _as_profile(top_bot, block.j_t, k)
    q_left = np.empty(k + 1, dtype=np.int64)
    q_top = np.empty(k + 1, dtype=np.int64)
    _left_top(block.i_p, block.j_p, block.i_t, block.j_t, block.d, k, lr, tb, corner, q_left, q_top)
    return q_left, q_top, corner


def propagate_bottom_right(block: Block, q_left, q_top, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Threshold profiles of the bottom row and last column, ``(q_bot, q_right)``."""
    q_bot = np.empty(k + 1, dtype=np.int64)
    q_right = np.empty(k + 1, dtype=np.int64)
    _bottom_right(block.i_p, block.j_p, block.i_t, block.j_t, block.d, k,
                  _as_profile(q_left, 0, k), _as_profile(q_top, 0, k), q_bot, q_right)
    return q_bot, q_right


# ------------------------------------------------------------------- output


@dataclass
class CompressedMatchRow:
    """Last row of the table thresholded at ``k``, one ``q_bot`` profile per text run."""

    k: int
    starts: np.ndarray
    ends: np.ndarray
    q_bot: np.ndarray  # shape (n, k + 1)
    work: int = field(default=0, compare=False)
    _position_map: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def length(self) -> int:
        return int(self.ends[-1]) if len(self.ends) else 0

    def build_position_map(self) -> "CompressedMatchRow":
        """Opt in to O(1) retrieval at the price of an O(N) run index."""
        pm = np.empty(self.length + 1, dtype=np.int64)
        for b, (s, e) in enumerate(zip(self.starts, self.ends)):
            pm[s:e + 1] = b
        self._position_map = pm
        return self

    def _run_of(self, r: int) -> int:
        if not 1 <= r <= self.length:
            raise IndexError(f"position {r} outside 1..{self.length}")
        if self._position_map is not None:
            return int(self._position_map[r])
        return int(np.searchsorted(self.starts, r, side="right")) - 1

    def retrieve(self, r: int):
        b = self._run_of(r)
        v = int(_value_at(self.q_bot[b], r, self.k))
        return GT_K if v > self.k else v

    def expand(self) -> list:
        """Value or ``GT_K`` for every text position ``1..N``."""
        out = []
        for b in range(len(self.starts)):
            q = self.q_bot[b]
            s, e = int(self.starts[b]), int(self.ends[b])
            v = 0
            for r in range(s, e + 1):
                while v <= self.k and q[v] < r:
                    v += 1
                out.append(GT_K if v > self.k else v)
        return out

    def minimum(self):
        """Smallest value over the whole row, or ``GT_K`` if every position exceeds ``k``."""
        if len(self.starts) == 0:
            return GT_K
        # a block's minimum sits at its first position
        hit = self.q_bot >= self.starts[:, None]
        found = hit.any(axis=1)
        if not found.any():
            return GT_K
        return int(hit[found].argmax(axis=1).min())

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "blocks": [
                {"start": int(s), "end": int(e), "q_bot": [int(x) for x in q]}
                for s, e, q in zip(self.starts, self.ends, self.q_bot)
            ],
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, obj: dict | str) -> "CompressedMatchRow":
        if isinstance(obj, str):
            obj = json.loads(obj)
        k = int(obj["k"])
        blocks = obj["blocks"]
        q = np.array([b["q_bot"] for b in blocks], dtype=np.int64).reshape(len(blocks), k + 1)
        return cls(
            k,
            np.array([b["start"] for b in blocks], dtype=np.int64),
            np.array([b["end"] for b in blocks], dtype=np.int64),
            q,
        )


def retrieve(row: CompressedMatchRow, r: int):
    return row.retrieve(r)


# ------------------------------------------------------------------- solver


@dataclass(frozen=True)
class EncodedRuns:
    p_let: np.ndarray
    p_start: np.ndarray
    p_end: np.ndarray
    t_let: np.ndarray
    t_start: np.ndarray
    t_end: np.ndarray
    cost: np.ndarray
    alphabet: Alphabet


def encode_runs(P: RleString, T: RleString, d: LetterMetric) -> EncodedRuns:
    alphabet = Alphabet()
    p_let = alphabet.encode(P.heads)
    t_let = alphabet.encode(T.heads)
    return EncodedRuns(p_let, P.starts, P.ends, t_let, T.starts, T.ends,
                       d.cost_matrix(alphabet.letters), alphabet)


def _check_args(P: RleString, d: LetterMetric, k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k <= 0:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if not d.is_integer:
        raise ValueError("thresholded matching needs an integer-valued metric")
    if P.total_length == 0:
        raise ValueError("pattern must be non-empty")


def solve_kdtw(P, T, d: LetterMetric, k: int) -> CompressedMatchRow:
    """For every text position, the last-row value if it is at most ``k``."""
    P, T = as_rle(P), as_rle(T)
    _check_args(P, d, k)
    enc = encode_runs(P, T, d)
    return solve_kdtw_encoded(enc, int(k))


def solve_kdtw_encoded(enc: EncodedRuns, k: int) -> CompressedMatchRow:
    if enc.t_let.shape[0] == 0:
        return CompressedMatchRow(k, enc.t_start, enc.t_end, np.empty((0, k + 1), dtype=np.int64))
    q_bot, ops = _kdtw_kernel(enc.p_let, enc.p_start, enc.p_end,
                              enc.t_let, enc.t_start, enc.t_end, enc.cost, k)
    return CompressedMatchRow(k, enc.t_start, enc.t_end, q_bot, work=int(ops))
