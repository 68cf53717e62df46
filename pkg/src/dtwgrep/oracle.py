"""Brute-force references for tests.

Nothing here shares code with the production dynamic programs: distances are
taken straight from warping paths, either enumerated one by one or minimized
over explicit predecessor paths with memoization.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Sequence

from .metric import LetterMetric
from .rle import as_plain

BUDGET = 144  # |X| * |Y| cells, i.e. 12 x 12
_STEPS = ((1, 0), (0, 1), (1, 1))


def _plain(X) -> list:
    return list(as_plain(X))


def _check_budget(m: int, n: int, budget: int) -> None:
    if m * n > budget:
        raise ValueError(f"{m}x{n} grid exceeds the oracle budget of {budget} cells")


def warping_paths(m: int, n: int) -> Iterator[list[tuple[int, int]]]:
    """Every monotone path from (1, 1) to (m, n), as lists of 1-based cells."""
    path = [(1, 1)]

    def walk(i: int, j: int):
        if (i, j) == (m, n):
            yield list(path)
            return
        for di, dj in _STEPS:
            a, b = i + di, j + dj
            if a <= m and b <= n:
                path.append((a, b))
                yield from walk(a, b)
                path.pop()

    yield from walk(1, 1)


def brute_dtw_paths(X: Sequence, Y: Sequence, d: LetterMetric, exhaustive: bool = False,
                    budget: int = BUDGET):
    """Minimum warping-path cost between ``X`` and ``Y``.

    ``exhaustive=True`` lists every path; otherwise the minimum is taken over
    explicit predecessor paths with a per-cell memo.
    """
    x, y = _plain(X), _plain(Y)
    m, n = len(x), len(y)
    if m == 0 and n == 0:
        return 0
    if m == 0 or n == 0:
        return math.inf
    _check_budget(m, n, budget)
    if exhaustive:
        return min(sum(d(x[i - 1], y[j - 1]) for i, j in p) for p in warping_paths(m, n))

    @lru_cache(maxsize=None)
    def best(i: int, j: int):
        here = d(x[i - 1], y[j - 1])
        if (i, j) == (1, 1):
            return here
        options = [best(i - di, j - dj) for di, dj in _STEPS if i - di >= 1 and j - dj >= 1]
        return min(options) + here

    return best(m, n)


def brute_dtw_pm(P: Sequence, T: Sequence, d: LetterMetric, exhaustive: bool = False,
                 budget: int = BUDGET) -> list:
    """``[inf, v_1, ..., v_N]`` with ``v_j`` the best distance from ``P`` to a
    substring of ``T`` ending at ``j``, by trying every start."""
    p, t = _plain(P), _plain(T)
    if not p:
        raise ValueError("pattern must be non-empty")
    _check_budget(len(p), len(t), budget)
    out = [math.inf]
    for j in range(1, len(t) + 1):
        out.append(min(brute_dtw_paths(p, t[s - 1:j], d, exhaustive, budget) for s in range(1, j + 1)))
    return out
