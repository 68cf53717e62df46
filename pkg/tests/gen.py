"""Random instance generators shared by the test modules."""
from __future__ import annotations

import random

from dtwgrep.block import GT_K
from dtwgrep.metric import LetterMetric
from dtwgrep.rle import RleString, Run
from dtwgrep.tree import WellSeparatedTree

LETTERS = "ABCD"

GOLDEN_P = "AATTAT"
GOLDEN_T = "GGTTTTCTTATTTTGGTGATA"
GOLDEN_ROWS = """\
1 1 1 1 1 1 1 1 1 0 1 1 1 1 1 1 1 1 0 1 0
2 2 2 2 2 2 2 2 2 0 1 2 2 2 2 2 2 2 0 1 0
3 3 2 2 2 2 3 2 2 1 0 0 0 0 1 2 2 3 1 0 1
4 4 2 2 2 2 3 2 2 2 0 0 0 0 1 2 2 3 2 0 1
5 5 3 3 3 3 3 3 3 2 1 1 1 1 1 2 3 3 2 1 0
6 6 3 3 3 3 4 3 3 3 1 1 1 1 2 2 2 3 3 1 1"""
GOLDEN_MATRIX = [[int(x) for x in line.split()] for line in GOLDEN_ROWS.splitlines()]


def rand_rle(rng: random.Random, runs: int, sigma: int, max_len: int) -> RleString:
    out = []
    prev = None
    for _ in range(runs):
        prev = rng.choice([c for c in LETTERS[:sigma] if c != prev])
        out.append(Run(prev, rng.randint(1, max_len)))
    return RleString(tuple(out))


def rand_plain(rng: random.Random, length: int, sigma: int) -> str:
    return "".join(rng.choice(LETTERS[:sigma]) for _ in range(length))


def rand_int_metric(rng: random.Random, sigma: int, lo: int = 1, hi: int = 3) -> LetterMetric:
    letters = LETTERS[:sigma]
    table = {(a, b): rng.randint(lo, hi) for i, a in enumerate(letters) for b in letters[i + 1:]}
    return LetterMetric.from_table(table) if table else LetterMetric.discrete()


def thresholded(row, k: int) -> list:
    """Baseline last row (without column 0) with values above ``k`` replaced by ``GT_K``."""
    return [int(v) if v <= k else GT_K for v in row[1:]]


def rand_tree(rng: random.Random, letters: str) -> WellSeparatedTree:
    """Random rooted tree with weights that never grow downward; letters on the leaves."""
    parent = {"n0": None}
    weight: dict = {}
    internal = ["n0"]
    counter = 1

    def attach(p):
        nonlocal counter
        v = f"n{counter}"
        counter += 1
        parent[v] = p
        top = weight.get(p)
        weight[v] = rng.choice([0.5, 1, 2, 3, 4, 8, 16]) if top is None else top * rng.choice([1, 0.75, 0.5, 0.25])
        return v

    for _ in range(rng.randint(0, len(letters))):
        internal.append(attach(rng.choice(internal)))
    leaf_of = {a: attach(rng.choice(internal)) for a in letters}
    used = set(leaf_of.values())
    while True:
        has_child = {p for p in parent.values() if p is not None}
        dead = [v for v in parent if v not in has_child and v not in used]
        if not dead:
            break
        for v in dead:
            del parent[v]
            weight.pop(v, None)
    return WellSeparatedTree(parent, weight, leaf_of)
