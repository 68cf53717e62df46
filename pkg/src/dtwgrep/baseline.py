"""Quadratic dynamic programs: the full DTW table, its last row, whole-string
DTW and the substring edit distance row.

Integer metrics are evaluated in int64 with the saturating sentinel ``INF``;
real metrics use float64 and ``numpy.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .metric import LetterMetric
from .rle import Alphabet, RleString, as_plain

INF = 2**62


def is_inf(value) -> bool:
    return value >= INF or value == math.inf


def to_python(values) -> list:
    """Plain list with both sentinels mapped to ``math.inf``."""
    return [math.inf if is_inf(v) else v.item() if hasattr(v, "item") else v for v in values]


@dataclass(frozen=True)
class EncodedPair:
    p: np.ndarray
    t: np.ndarray
    cost: np.ndarray
    alphabet: Alphabet

    @property
    def inf(self):
        return INF if self.cost.dtype == np.int64 else np.inf


def encode_pair(P, T, d: LetterMetric) -> EncodedPair:
    alphabet = Alphabet()
    p = alphabet.encode(as_plain(P))
    t = alphabet.encode(as_plain(T))
    return EncodedPair(p, t, d.cost_matrix(alphabet.letters), alphabet)


@njit(cache=True, nogil=True)
def _last_row_kernel(p, t, cost, inf):
    n = t.shape[0]
    prev = np.zeros(n + 1, dtype=cost.dtype)
    cur = np.empty(n + 1, dtype=cost.dtype)
    for i in range(p.shape[0]):
        row = cost[p[i]]
        cur[0] = inf
        for j in range(1, n + 1):
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            v = best + row[t[j - 1]]
            cur[j] = v if v < inf else inf
        prev, cur = cur, prev
    return prev


@njit(cache=True, nogil=True)
def _table_kernel(p, t, cost, inf):
    m = p.shape[0]
    n = t.shape[0]
    D = np.zeros((m + 1, n + 1), dtype=cost.dtype)
    for i in range(1, m + 1):
        D[i, 0] = inf
        row = cost[p[i - 1]]
        for j in range(1, n + 1):
            best = min(D[i - 1, j - 1], D[i - 1, j], D[i, j - 1])
            v = best + row[t[j - 1]]
            D[i, j] = v if v < inf else inf
    return D


@njit(cache=True, nogil=True)
def _pair_kernel(x, y, cost, inf):
    m = x.shape[0]
    n = y.shape[0]
    prev = np.full(n + 1, inf, dtype=cost.dtype)
    prev[0] = 0
    cur = np.empty(n + 1, dtype=cost.dtype)
    for i in range(m):
        row = cost[x[i]]
        cur[0] = inf
        for j in range(1, n + 1):
            best = min(prev[j - 1], prev[j], cur[j - 1])
            v = best + row[y[j - 1]]
            cur[j] = v if v < inf else inf
        prev, cur = cur, prev
    return prev[n]


@njit(cache=True, nogil=True)
def _edit_row_kernel(p, t):
    n = t.shape[0]
    prev = np.zeros(n + 1, dtype=np.int64)
    cur = np.empty(n + 1, dtype=np.int64)
    for i in range(p.shape[0]):
        cur[0] = i + 1
        pi = p[i]
        for j in range(1, n + 1):
            v = prev[j - 1] + (0 if pi == t[j - 1] else 1)
            if prev[j] + 1 < v:
                v = prev[j] + 1
            if cur[j - 1] + 1 < v:
                v = cur[j - 1] + 1
            cur[j] = v
        prev, cur = cur, prev
    return prev


def _check_pattern(enc: EncodedPair) -> None:
    if enc.p.shape[0] == 0:
        raise ValueError("pattern must be non-empty")


def dtw_table(P: RleString | Sequence, T: RleString | Sequence, d: LetterMetric) -> np.ndarray:
    """The full ``(M+1) x (N+1)`` table: row 0 zeros, column 0 infinite."""
    enc = encode_pair(P, T, d)
    _check_pattern(enc)
    return _table_kernel(enc.p, enc.t, enc.cost, enc.inf)


def match_last_row(P: RleString | Sequence, T: RleString | Sequence, d: LetterMetric) -> np.ndarray:
    """Row ``M`` of the table, computed with two rolling rows."""
    enc = encode_pair(P, T, d)
    _check_pattern(enc)
    return _last_row_kernel(enc.p, enc.t, enc.cost, enc.inf)


def match_last_row_encoded(enc: EncodedPair) -> np.ndarray:
    _check_pattern(enc)
    return _last_row_kernel(enc.p, enc.t, enc.cost, enc.inf)


def dtw_pair(X: RleString | Sequence, Y: RleString | Sequence, d: LetterMetric):
    """DTW distance between two whole strings (``math.inf`` if exactly one is empty)."""
    enc = encode_pair(X, Y, d)
    m, n = enc.p.shape[0], enc.t.shape[0]
    if m == 0 and n == 0:
        return 0
    if m == 0 or n == 0:
        return math.inf
    v = _pair_kernel(enc.p, enc.t, enc.cost, enc.inf)
    return math.inf if is_inf(v) else getattr(v, "item", lambda: v)()


def edit_distance_last_row(P: RleString | Sequence, T: RleString | Sequence) -> np.ndarray:
    """Substring edit distance: ``E[0, j] = 0`` and ``E[i, 0] = i``."""
    alphabet = Alphabet()
    p = alphabet.encode(as_plain(P))
    t = alphabet.encode(as_plain(T))
    return _edit_row_kernel(p, t)
