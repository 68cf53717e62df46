import math
import random

import numpy as np
import pytest
from gen import LETTERS, rand_tree

from dtwgrep.metric import LetterMetric
from dtwgrep.tree import (WellSeparatedTree, format_tree, hst_embed, parse_tree, star_tree,
                          tree_distance)

SAMPLE = """\
# root with two subtrees
r -
x r 4
y r 4
a x 2
b x 2
c y 1
leaf A a
leaf B b
leaf C c
"""


def test_distance_basics():
    t = parse_tree(SAMPLE)
    assert tree_distance(t, "A", "A") == 0
    assert tree_distance(t, "A", "B") == 2
    assert tree_distance(t, "A", "C") == 4
    assert t.height == 2
    assert sorted(t.letters) == ["A", "B", "C"]


def test_unknown_letter():
    with pytest.raises(KeyError):
        tree_distance(parse_tree(SAMPLE), "A", "Z")


def test_star_tree_is_discrete():
    t = star_tree("ACGT")
    assert all(t.distance(a, b) == (a != b) for a in "ACGT" for b in "ACGT")


def test_round_trip_through_text():
    t = parse_tree(SAMPLE)
    back = parse_tree(format_tree(t))
    assert all(back.distance(a, b) == t.distance(a, b) for a in "ABC" for b in "ABC")


@pytest.mark.parametrize("text", [
    "r -\ns -\nleaf A r\n",  # two roots
    "r -\na r 1\nb a 2\nleaf B b\n",  # heavier edge below
    "r -\na r 0\nleaf A a\n",  # zero weight
    "r -\na r 1\nb r 1\nleaf A a\n",  # unlabelled leaf
    "r -\na r 1\nleaf A a\nleaf B a\n",  # shared leaf
    "r -\na q 1\nleaf A a\n",  # unknown parent
    "r -\na r\nleaf A a\n",  # missing weight
    "r -\na r 1\nleaf A z\n",  # unknown node
    "r -\na b 1\nb a 1\nleaf A a\n",  # cycle
])
def test_invalid_trees_rejected(text):
    with pytest.raises(ValueError):
        parse_tree(text)


def test_random_trees_are_ultrametric():
    rng = random.Random(21)
    for _ in range(100):
        t = rand_tree(rng, LETTERS)
        for a in LETTERS:
            for b in LETTERS:
                for c in LETTERS:
                    assert t.distance(a, c) <= max(t.distance(a, b), t.distance(b, c))


def test_hst_single_letter():
    t = hst_embed(LetterMetric.discrete(), np.random.default_rng(0), ["A"])
    assert t.letters == ["A"] and t.distance("A", "A") == 0


def test_hst_two_letters_at_distance_one():
    for seed in range(10):
        t = hst_embed(LetterMetric.discrete(), np.random.default_rng(seed), ["A", "B"])
        assert t.distance("A", "B") == 1


def _random_metric(rng: random.Random, sigma: int) -> tuple[list, LetterMetric]:
    letters = [f"x{i}" for i in range(sigma)]
    pts = [(rng.uniform(0, 10), rng.uniform(0, 10)) for _ in letters]
    table = {(letters[i], letters[j]): max(0.05, math.dist(pts[i], pts[j]))
             for i in range(sigma) for j in range(i + 1, sigma)}
    return letters, LetterMetric.from_table(table)


def test_hst_dominance_every_seed():
    rng = random.Random(22)
    for _ in range(40):
        letters, m = _random_metric(rng, rng.randint(2, 16))
        for seed in range(8):
            t = hst_embed(m, np.random.default_rng(seed), letters)
            assert isinstance(t, WellSeparatedTree)
            for i, a in enumerate(letters):
                for b in letters[i + 1:]:
                    assert m(a, b) <= t.distance(a, b)


DISTORTION_C = 4.0  # measured worst case about 2.4 on this family


def test_hst_mean_distortion():
    rng = random.Random(23)
    for _ in range(10):
        sigma = rng.randint(2, 16)
        letters, m = _random_metric(rng, sigma)
        trees = [hst_embed(m, np.random.default_rng(s), letters) for s in range(32)]
        for i, a in enumerate(letters):
            for b in letters[i + 1:]:
                mean = sum(t.distance(a, b) for t in trees) / len(trees) / m(a, b)
                assert mean <= DISTORTION_C * max(1.0, math.log2(sigma))


def test_hst_rejects_bad_metrics():
    with pytest.raises(ValueError):
        hst_embed(LetterMetric.discrete(), np.random.default_rng(0), [])
    bad = LetterMetric("real-table", lambda a, b: 1.0 if a < b else 2.0 if a > b else 0.0, ("A", "B"))
    with pytest.raises(ValueError):
        hst_embed(bad, np.random.default_rng(0), ["A", "B"])


def test_hst_is_seeded():
    _, m = _random_metric(random.Random(24), 9)
    a = format_tree(hst_embed(m, np.random.default_rng(5)))
    b = format_tree(hst_embed(m, np.random.default_rng(5)))
    assert a == b
