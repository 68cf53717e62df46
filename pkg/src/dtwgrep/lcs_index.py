"""Longest common suffix / prefix queries between two strings.

The default index is a generalized suffix array with an LCP sparse table, so
every query is a constant-time range minimum. ``method="hash"`` swaps in
rolling hashes with a binary search per query, which is easier to audit.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np


def suffix_array(s: np.ndarray) -> np.ndarray:
    """Prefix doubling over integer symbols, O(n log^2 n)."""
    n = len(s)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.unique(s, return_inverse=True)[1].astype(np.int64)
    sa = np.arange(n, dtype=np.int64)
    step = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if step < n:
            second[: n - step] = rank[step:]
        sa = np.lexsort((second, rank))
        key_r, key_s = rank[sa], second[sa]
        diff = np.empty(n, dtype=np.int64)
        diff[0] = 0
        diff[1:] = (key_r[1:] != key_r[:-1]) | (key_s[1:] != key_s[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = np.cumsum(diff)
        rank = new_rank
        if rank.max() == n - 1:
            return sa
        step *= 2


def lcp_array(s: np.ndarray, sa: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Kasai: ``lcp[r]`` is the common prefix of suffixes ``sa[r-1]`` and ``sa[r]``."""
    n = len(s)
    rank = np.empty(n, dtype=np.int64)
    rank[sa] = np.arange(n)
    lcp = np.zeros(n, dtype=np.int64)
    sl = s.tolist()
    sal = sa.tolist()
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sal[r - 1]
            while i + h < n and j + h < n and sl[i + h] == sl[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        else:
            h = 0
    return lcp, rank


class _SparseMin:
    def __init__(self, data: np.ndarray):
        self.levels = [np.asarray(data, dtype=np.int64)]
        span = 1
        while 2 * span <= len(data):
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2
        self._lists = [lv.tolist() for lv in self.levels]

    def query(self, lo: int, hi: int) -> int:
        """Minimum over the inclusive range ``lo..hi``."""
        depth = (hi - lo + 1).bit_length() - 1
        row = self._lists[depth]
        return min(row[lo], row[hi - (1 << depth) + 1])


class _SuffixArrayLce:
    """Longest common prefix of ``a[i:]`` and ``b[j:]`` (0-based)."""

    def __init__(self, a: Sequence[int], b: Sequence[int]):
        base = max(list(a) + list(b) + [0]) + 1
        s = np.array(list(a) + [base] + list(b) + [base + 1], dtype=np.int64)
        sa = suffix_array(s)
        lcp, rank = lcp_array(s, sa)
        self.rank = rank.tolist()
        self.offset = len(a) + 1
        self.rmq = _SparseMin(lcp)

    def __call__(self, i: int, j: int) -> int:
        ri = self.rank[i]
        rj = self.rank[self.offset + j]
        if ri > rj:
            ri, rj = rj, ri
        return self.rmq.query(ri + 1, rj)


class _HashLce:
    MOD = (1 << 61) - 1
    BASE = 1_000_003

    def __init__(self, a: Sequence[int], b: Sequence[int]):
        self.a_hash = self._prefix(a)
        self.b_hash = self._prefix(b)
        self.na, self.nb = len(a), len(b)
        n = max(self.na, self.nb) + 1
        self.pow = [1] * n
        for i in range(1, n):
            self.pow[i] = self.pow[i - 1] * self.BASE % self.MOD

    def _prefix(self, s):
        out = [0]
        for c in s:
            out.append((out[-1] * self.BASE + int(c) + 1) % self.MOD)
        return out

    def _sub(self, h, i, length):
        return (h[i + length] - h[i] * self.pow[length]) % self.MOD

    def __call__(self, i: int, j: int) -> int:
        lo, hi = 0, min(self.na - i, self.nb - j)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._sub(self.a_hash, i, mid) == self._sub(self.b_hash, j, mid):
                lo = mid
            else:
                hi = mid - 1
        return lo


class LcsIndex:
    """Common suffix (``lcs``) and prefix (``lce``) lengths between ``p`` and ``t``.

    Positions are 1-based. ``lcs(i, j)`` counts the letters of the longest
    common suffix of ``p[1..i]`` and ``t[1..j]`` (0 when ``p[i] != t[j]``);
    ``lce(i, j)`` counts those of the longest common prefix of ``p[i..]`` and
    ``t[j..]``. ``queries`` tallies calls to either.
    """

    def __init__(self, p: Sequence[int], t: Sequence[int], method: str = "sa"):
        self.p = list(p)
        self.t = list(t)
        impl = {"sa": _SuffixArrayLce, "hash": _HashLce}.get(method)
        if impl is None:
            raise ValueError(f"unknown index method {method!r}")
        self.method = method
        self._fwd = impl(self.p, self.t)
        self._bwd = impl(self.p[::-1], self.t[::-1])
        self.queries = 0

    def lcs(self, i: int, j: int) -> int:
        self.queries += 1
        if i < 1 or j < 1 or i > len(self.p) or j > len(self.t):
            return 0
        if self.p[i - 1] != self.t[j - 1]:
            return 0
        return self._bwd(len(self.p) - i, len(self.t) - j)

    def lce(self, i: int, j: int) -> int:
        self.queries += 1
        if i < 1 or j < 1 or i > len(self.p) or j > len(self.t):
            return 0
        if self.p[i - 1] != self.t[j - 1]:
            return 0
        return self._fwd(i - 1, j - 1)


def build_lcs_index(p: Sequence[int], t: Sequence[int], method: str = "sa") -> LcsIndex:
    return LcsIndex(p, t, method)
