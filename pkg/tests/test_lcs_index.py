import random

import numpy as np
import pytest

from dtwgrep.lcs_index import build_lcs_index, lcp_array, suffix_array


def naive_lcs(p, t, i, j):
    if i > len(p) or j > len(t):
        return 0
    n = 0
    while i - n >= 1 and j - n >= 1 and p[i - n - 1] == t[j - n - 1]:
        n += 1
    return n


def naive_lce(p, t, i, j):
    if i < 1 or j < 1:
        return 0
    n = 0
    while i + n <= len(p) and j + n <= len(t) and p[i + n - 1] == t[j + n - 1]:
        n += 1
    return n


def test_suffix_array_sorts_suffixes():
    rng = random.Random(1)
    for _ in range(100):
        s = [rng.randint(0, 2) for _ in range(rng.randint(1, 40))]
        sa = suffix_array(np.array(s, dtype=np.int64))
        assert sa.tolist() == sorted(range(len(s)), key=lambda i: s[i:])
        lcp, rank = lcp_array(np.array(s, dtype=np.int64), sa)
        assert [rank[i] for i in sa] == list(range(len(s)))
        for r in range(1, len(s)):
            a, b = s[sa[r - 1]:], s[sa[r]:]
            assert lcp[r] == naive_lce(a, b, 1, 1)


@pytest.mark.parametrize("method", ["sa", "hash"])
def test_queries_match_naive(method):
    rng = random.Random(2)
    for _ in range(80):
        sigma = rng.randint(1, 3)
        p = [rng.randrange(sigma) for _ in range(rng.randint(1, 25))]
        t = [rng.randrange(sigma) for _ in range(rng.randint(1, 25))]
        idx = build_lcs_index(p, t, method)
        for i in range(0, len(p) + 2):
            for j in range(0, len(t) + 2):
                assert idx.lcs(i, j) == naive_lcs(p, t, i, j)
                assert idx.lce(i, j) == naive_lce(p, t, i, j)


def test_lcs_on_run_heads():
    # heads of AATTAT and GGTTTTCTTATTTTGGTGATA as letters
    p = [ord(c) for c in "ATAT"]
    t = [ord(c) for c in "GTCTATGTGATA"]
    idx = build_lcs_index(p, t)
    assert idx.lcs(4, 12) == 0
    assert idx.lcs(3, 12) == 3
    assert idx.lcs(4, 6) == 3
    assert idx.lce(1, 5) == 2


def test_query_counter_and_bad_method():
    idx = build_lcs_index([1, 2], [1, 2])
    idx.lcs(1, 1)
    idx.lce(1, 1)
    assert idx.queries == 2
    with pytest.raises(ValueError):
        build_lcs_index([1], [1], "tree")
