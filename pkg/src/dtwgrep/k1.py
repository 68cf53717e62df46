"""Matching at threshold 1 in O(m + n) queries.

Work happens on the run-head strings ``P'`` and ``T'`` (one letter per run).
Blocks are addressed by 1-based run indices ``(a, b)``; row ``a = 0`` is the
table's zero row and column ``b = 0`` its infinite column.

Facts used, all for integer metrics with ``d(x, y) >= 1`` when ``x != y``:

* A block is a 0-block iff it is homogeneous and its diagonal chain of
  homogeneous blocks reaches block-row 1, i.e. ``P'[1..a]`` is a suffix of
  ``T'[1..b]``: one ``lcs`` query.
* A cell outside homogeneous blocks equals 1 iff its letter distance is 1 and
  one of its three predecessors lies in a 0-block.
* A homogeneous block's value is the minimum over the top and left
  predecessors of every block in its diagonal chain, plus the diagonal
  predecessor of the chain's first block. Past the first block the top
  predecessor can only be 1 when the pattern run above is a single letter at
  distance 1 and ``P'[1..a-2]`` ends at the same text run, which turns into
  one forward ``lce`` query plus a prefix count over ``P'``; the left
  predecessor is the transposed case over ``T'``.
"""
from __future__ import annotations

from itertools import accumulate

import numpy as np

from .block import CompressedMatchRow, encode_runs
from .lcs_index import LcsIndex
from .metric import LetterMetric
from .rle import as_rle


class _Runs:
    def __init__(self, P, T, d: LetterMetric, method: str):
        enc = encode_runs(P, T, d)
        self.m = len(enc.p_let)
        self.n = len(enc.t_let)
        # 1-based views; index 0 is padding
        self.pl = [-1] + enc.p_let.tolist()
        self.tl = [-1] + enc.t_let.tolist()
        self.p_len = [0] + P.lengths.tolist()
        self.t_len = [0] + T.lengths.tolist()
        self.t_start = [0] + enc.t_start.tolist()
        self.t_end = [0] + enc.t_end.tolist()
        self.cost = enc.cost
        self.index = LcsIndex(enc.p_let.tolist(), enc.t_let.tolist(), method)

    def dist(self, a: int, b: int) -> int:
        return int(self.cost[self.pl[a], self.tl[b]])

    def zero_block(self, a: int, b: int) -> bool:
        if a == 0:
            return True
        if b == 0:
            return False
        return self.pl[a] == self.tl[b] and self.index.lcs(a, b) >= a

    def cell_one(self, a: int, b: int, first_row: bool, first_col: bool) -> bool:
        """Is this cell of the non-homogeneous block ``(a, b)`` equal to 1?"""
        if a == 0:
            return False
        if b == 0 or self.dist(a, b) != 1:
            return False
        up = a - 1 if first_row else a
        lf = b - 1 if first_col else b
        return self.zero_block(up, lf) or self.zero_block(up, b) or self.zero_block(a, lf)


def _prefix_counts(flags: list[bool]) -> list[int]:
    """``out[i]`` counts the true entries of ``flags[0..i]``."""
    return list(accumulate(int(f) for f in flags))


def solve_1dtw(P, T, d: LetterMetric, method: str = "sa") -> CompressedMatchRow:
    """Positions whose last-row value is 0 or 1, as a ``k = 1`` row."""
    P, T = as_rle(P), as_rle(T)
    if not d.is_integer:
        raise ValueError("threshold-1 matching needs an integer-valued metric")
    if P.total_length == 0:
        raise ValueError("pattern must be non-empty")
    R = _Runs(P, T, d, method)
    m, n = R.m, R.n
    q_bot = np.empty((n, 2), dtype=np.int64)

    # top_ok[a]: pattern run a - 1 is one letter long and at distance 1 from run a
    top_ok = [False, False] + [
        R.p_len[a - 1] == 1 and int(R.cost[R.pl[a - 1], R.pl[a]]) == 1 for a in range(2, m + 1)
    ]
    left_ok = [False, False] + [
        R.t_len[b - 1] == 1 and int(R.cost[R.tl[b - 1], R.tl[b]]) == 1 for b in range(2, n + 1)
    ]
    top_cnt = _prefix_counts(top_ok)
    left_cnt = _prefix_counts(left_ok)
    single_row = R.p_len[m] == 1

    for b in range(1, n + 1):
        it, jt = R.t_start[b], R.t_end[b]
        none, ones_first, ones_all, zeros = (it - 1, it - 1), (it - 1, it), (it - 1, jt), (jt, jt)
        if R.pl[m] == R.tl[b]:
            chain = R.index.lcs(m, b)
            if chain >= m:
                q_bot[b - 1] = zeros
                continue
            a0, b0 = m - chain + 1, b - chain + 1
            one = (
                R.cell_one(a0 - 1, b0 - 1, R.p_len[a0 - 1] == 1, R.t_len[b0 - 1] == 1)
                or R.cell_one(a0 - 1, b0, R.p_len[a0 - 1] == 1, True)
                or R.cell_one(a0, b0 - 1, True, R.t_len[b0 - 1] == 1)
            )
            if not one and chain > 1:
                shift = b - m
                s = shift + 3
                if 1 <= s <= n:
                    lo, hi = a0 + 1, min(m, R.index.lce(1, s) + 2)
                    one = lo <= hi and top_cnt[hi] > top_cnt[lo - 1]
                s = shift - 1
                if not one and 1 <= s <= n:
                    lo, hi = a0 + 1, min(m, R.index.lce(1, s))
                    one = lo <= hi and left_cnt[hi + shift] > left_cnt[lo + shift - 1]
            q_bot[b - 1] = ones_all if one else none
        elif R.dist(m, b) != 1:
            q_bot[b - 1] = none
        elif single_row and R.zero_block(m - 1, b):
            q_bot[b - 1] = ones_all
        elif R.zero_block(m, b - 1) or (single_row and R.zero_block(m - 1, b - 1)):
            q_bot[b - 1] = ones_first
        else:
            q_bot[b - 1] = none
    row = CompressedMatchRow(1, T.starts, T.ends, q_bot)
    row.work = R.index.queries
    return row
