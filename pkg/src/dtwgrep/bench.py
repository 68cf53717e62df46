"""Timing and operation counts: quadratic baseline versus the block algorithm."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .baseline import encode_pair, match_last_row_encoded
from .block import encode_runs, solve_kdtw_encoded
from .metric import LetterMetric
from .rle import RleString, Run


def random_rle(runs: int, runlen_max: int, rng: np.random.Generator, alphabet: str = "ACGT") -> RleString:
    """``runs`` runs with uniform lengths in ``1..runlen_max`` and no two equal neighbours."""
    out = []
    prev = None
    for _ in range(runs):
        choices = [a for a in alphabet if a != prev]
        prev = choices[rng.integers(len(choices))]
        out.append(Run(prev, int(rng.integers(1, runlen_max + 1))))
    return RleString(tuple(out))


@dataclass(frozen=True)
class BenchRow:
    trial: int
    M: int
    N: int
    m: int
    n: int
    k: int
    baseline_seconds: float
    block_seconds: float
    baseline_cells: int
    block_ops: int

    @property
    def ops_per_kmn(self) -> float:
        return self.block_ops / (self.k * self.m * self.n)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["ops_per_kmn"] = self.ops_per_kmn
        return d


_warm = False


def _warm_up() -> None:
    global _warm
    if not _warm:
        rng = np.random.default_rng(0)
        P, T = random_rle(3, 3, rng), random_rle(5, 3, rng)
        d = LetterMetric.discrete()
        match_last_row_encoded(encode_pair(P, T, d))
        solve_kdtw_encoded(encode_runs(P, T, d), 1)
        _warm = True


def run_bench(m: int, n: int, runlen_max: int, k: int, trials: int = 1, seed: int = 0,
              time_baseline: bool = True) -> list[BenchRow]:
    """One row per trial; strings use the discrete metric over ACGT."""
    _warm_up()
    d = LetterMetric.discrete()
    rows = []
    for trial, ss in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        rng = np.random.Generator(np.random.PCG64(ss))
        P, T = random_rle(m, runlen_max, rng), random_rle(n, runlen_max, rng)
        M, N = P.total_length, T.total_length
        base_s = float("nan")
        if time_baseline:
            enc = encode_pair(P, T, d)
            t0 = time.perf_counter()
            match_last_row_encoded(enc)
            base_s = time.perf_counter() - t0
        runs = encode_runs(P, T, d)
        t0 = time.perf_counter()
        row = solve_kdtw_encoded(runs, k)
        block_s = time.perf_counter() - t0
        rows.append(BenchRow(trial, M, N, m, n, k, base_s, block_s, (M + 1) * (N + 1), row.work))
    return rows
