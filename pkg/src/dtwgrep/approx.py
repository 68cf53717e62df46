"""Approximate minimum DTW distance under tree metrics and general metrics.

All routines measure ``delta``, the smallest DTW distance between the pattern
and any substring of the text, and ``L = max(|P|, |T|)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .baseline import match_last_row
from .block import GT_K, solve_kdtw
from .metric import LetterMetric
from .rle import RleString, as_rle
from .tree import WellSeparatedTree, hst_embed


@dataclass(frozen=True)
class Approx:
    """``value`` lies in ``[delta, 2 * delta]``."""

    value: float


@dataclass(frozen=True)
class Large:
    """Certifies ``delta > bound``."""

    bound: float


@dataclass(frozen=True)
class ApproxResult:
    value: float
    branch: str  # "two-approx", "gap-base", "binary-search", "linear-scan", "empty-text"
    i_star: int | None = None
    gap_calls: int = 0


def _check_epsilon(epsilon: float) -> None:
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")


def _span(P: RleString, T: RleString) -> int:
    return max(P.total_length, T.total_length)


def integerized(dist: Callable, letters, gamma: float) -> LetterMetric:
    """``ceil(dist / gamma)`` on the given letters, computed in exact rationals."""
    g = Fraction(gamma)
    table = {}
    for i, a in enumerate(letters):
        for b in letters[i + 1:]:
            table[(a, b)] = math.ceil(Fraction(dist(a, b)) / g)
    if not table:
        return LetterMetric.discrete()
    return LetterMetric.from_table(table)


def _two_approx(P: RleString, T: RleString, dist: Callable, gamma: float, budget: float):
    """2-approximation of ``delta`` or a certificate that it exceeds ``gamma * ceil(budget)``."""
    k = max(1, math.ceil(budget))
    letters = list(dict.fromkeys(list(P.heads) + list(T.heads)))
    row = solve_kdtw(P, T, integerized(dist, letters, gamma), 2 * k)
    low = row.minimum()
    if low is GT_K:
        return Large(gamma * k)
    return Approx(gamma * low)


def two_approx_or_large(P, T, tree: WellSeparatedTree, gamma: float, epsilon: float) -> Approx | Large:
    """Either ``Approx(v)`` with ``delta <= v <= 2 delta`` or ``Large`` with
    ``delta > gamma * L**(1 - epsilon)``. Distinct letters must be at least
    ``gamma`` apart."""
    _check_epsilon(epsilon)
    P, T = as_rle(P), as_rle(T)
    return _two_approx(P, T, tree.distance, gamma, _span(P, T) ** (1 - epsilon))


def r_simplify(X, tree: WellSeparatedTree, r: float) -> RleString:
    """Replace each letter by its highest ancestor reachable through edges of weight ``<= r/4``."""
    X = as_rle(X)
    limit = r / 4
    return RleString.from_pairs([(tree.ancestor_within(run.letter, limit), run.length) for run in X.runs])


def exact_min_dtw(P, T, dist: LetterMetric) -> float:
    """``delta`` by the quadratic dynamic program."""
    row = match_last_row(P, T, dist)[1:]
    return float(row.min()) if len(row) else math.inf


def gap_dtw(P, T, tree: WellSeparatedTree, r: float, epsilon: float, factor: float | None = None) -> int:
    """Gap decision with ratio ``factor`` (default ``L**epsilon``).

    Writing ``K = L / factor``: returns 0 whenever ``delta <= K * r / 4`` and 1
    whenever ``delta >= L * r``; either answer may come back in between.
    """
    _check_epsilon(epsilon)
    if r < 1:
        raise ValueError("r must be at least 1")
    P, T = as_rle(P), as_rle(T)
    L = _span(P, T)
    if factor is None:
        factor = L ** epsilon
    K = L / factor
    if K > L / 2:
        return int(exact_min_dtw(P, T, tree.metric()) > K * r / 4)
    sp, st = r_simplify(P, tree, r), r_simplify(T, tree, r)
    res = _two_approx(sp, st, tree.node_distance, r / 4, K)
    if isinstance(res, Large):
        return 1
    return 0 if res.value <= K * r else 1


def approx_min_dtw_tree(P, T, tree: WellSeparatedTree, epsilon: float, mode: str = "binary") -> ApproxResult:
    """``v`` with ``v <= 2 delta`` and ``delta <= 8 L**epsilon v``.

    ``mode="linear"`` scans gap levels upward instead of bisecting them.
    """
    _check_epsilon(epsilon)
    if mode not in ("binary", "linear"):
        raise ValueError(f"unknown mode {mode!r}")
    P, T = as_rle(P), as_rle(T)
    if P.total_length == 0:
        raise ValueError("pattern must be non-empty")
    if T.total_length == 0:
        return ApproxResult(math.inf, "empty-text")
    unit, d_max = tree.distance_range()
    if unit == 0:
        unit = d_max = 1.0
    norm = tree.scaled(1 / unit)
    d_max /= unit
    L = _span(P, T)
    base = L ** (1 - epsilon)

    first = _two_approx(P, T, norm.distance, 1, base)
    if isinstance(first, Approx):
        return ApproxResult(first.value * unit, "two-approx")

    factor = L ** epsilon / 2
    calls = 0

    def gap(i: int) -> int:
        nonlocal calls
        calls += 1
        return gap_dtw(P, T, norm, 2.0 ** i, epsilon, factor)

    if gap(0) == 0:
        return ApproxResult(base * unit, "gap-base", 0, calls)
    top = max(1, math.ceil(math.log2(d_max * L)))
    if mode == "binary":
        lo, hi = 0, top  # gap(lo) == 1, gap(hi) taken as 0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if gap(mid):
                lo = mid
            else:
                hi = mid
        i_star = hi
    else:
        i_star = next((i for i in range(1, top) if gap(i) == 0), top)
    value = 2.0 ** (i_star - 1) * base / 4
    return ApproxResult(value * unit, "binary-search" if mode == "binary" else "linear-scan", i_star, calls)


def embedding_seeds(seed: int | np.random.SeedSequence, count: int) -> list[np.random.SeedSequence]:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return ss.spawn(count)


def approx_min_dtw_general(P, T, metric: LetterMetric, epsilon: float, seed: int | np.random.SeedSequence = 0,
                           repeats: int | None = None) -> ApproxResult:
    """Minimum of the tree pipeline over ``ceil(log2 L)`` random tree embeddings."""
    _check_epsilon(epsilon)
    P, T = as_rle(P), as_rle(T)
    if P.total_length == 0:
        raise ValueError("pattern must be non-empty")
    if T.total_length == 0:
        return ApproxResult(math.inf, "empty-text")
    letters = sorted(set(P.heads) | set(T.heads), key=repr)
    if repeats is None:
        repeats = max(1, math.ceil(math.log2(_span(P, T))))
    best = None
    for ss in embedding_seeds(seed, repeats):
        tree = hst_embed(metric, np.random.Generator(np.random.PCG64(ss)), letters)
        res = approx_min_dtw_tree(P, T, tree, epsilon)
        if best is None or res.value < best.value:
            best = res
    return best
