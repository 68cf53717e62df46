"""Well-separated tree metrics and a randomized embedding into them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Mapping, Sequence

import numpy as np

from .metric import TREE, LetterMetric


@dataclass(frozen=True)
class WellSeparatedTree:
    """Rooted tree whose leaves are letters.

    ``parent`` maps every node to its parent (``None`` for the root) and
    ``weight`` gives the weight of the edge to the parent. Weights never grow
    on the way down, and the distance between two nodes is the heaviest edge
    on the path joining them.
    """

    parent: Mapping[Hashable, Hashable | None]
    weight: Mapping[Hashable, float]
    leaf_of: Mapping[Hashable, Hashable]
    _depth: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        roots = [v for v, p in self.parent.items() if p is None]
        if len(roots) != 1:
            raise ValueError(f"tree needs exactly one root, found {len(roots)}")
        children: dict = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is None:
                continue
            if p not in self.parent:
                raise ValueError(f"node {v!r} has unknown parent {p!r}")
            w = self.weight.get(v)
            if w is None or not w > 0 or not math.isfinite(w):
                raise ValueError(f"edge above {v!r} needs a positive finite weight")
            children[p].append(v)
        depth = {roots[0]: 0}
        stack = [roots[0]]
        while stack:
            v = stack.pop()
            for c in children[v]:
                if self.parent[v] is not None and self.weight[c] > self.weight[v]:
                    raise ValueError(
                        f"edge above {c!r} ({self.weight[c]}) is heavier than the edge above {v!r} ({self.weight[v]})"
                    )
                depth[c] = depth[v] + 1
                stack.append(c)
        if len(depth) != len(self.parent):
            raise ValueError("tree is not connected (cycle or unreachable nodes)")
        leaves = {v for v, cs in children.items() if not cs}
        labelled = list(self.leaf_of.values())
        if len(set(labelled)) != len(labelled):
            raise ValueError("two letters share a leaf")
        if set(labelled) != leaves:
            bad = sorted(map(repr, set(labelled) ^ leaves))
            raise ValueError(f"letters must label the leaves one-to-one; mismatched nodes: {', '.join(bad)}")
        object.__setattr__(self, "_depth", depth)

    @property
    def root(self):
        return next(v for v, p in self.parent.items() if p is None)

    @property
    def letters(self) -> list:
        return list(self.leaf_of)

    @property
    def height(self) -> int:
        return max(self._depth.values())

    def node_distance(self, u, v) -> float:
        """Heaviest edge on the path between two nodes, O(height)."""
        if u not in self._depth or v not in self._depth:
            raise KeyError(f"unknown node {u if u not in self._depth else v!r}")
        best = 0
        du, dv = self._depth[u], self._depth[v]
        while du > dv:
            best = max(best, self.weight[u])
            u, du = self.parent[u], du - 1
        while dv > du:
            best = max(best, self.weight[v])
            v, dv = self.parent[v], dv - 1
        while u != v:
            best = max(best, self.weight[u], self.weight[v])
            u, v = self.parent[u], self.parent[v]
        return best

    def distance(self, a, b) -> float:
        try:
            return self.node_distance(self.leaf_of[a], self.leaf_of[b])
        except KeyError:
            raise KeyError(f"unknown letter {a if a not in self.leaf_of else b!r}") from None

    def metric(self) -> LetterMetric:
        return LetterMetric(TREE, self.distance, tuple(self.leaf_of))

    def node_metric(self) -> LetterMetric:
        """The same distance on internal nodes, used after simplification."""
        return LetterMetric(TREE, self.node_distance, tuple(self.parent))

    def ancestor_within(self, letter, limit: float):
        """Highest ancestor of ``letter`` reachable through edges of weight at most ``limit``."""
        v = self.leaf_of[letter]
        while self.parent[v] is not None and self.weight[v] <= limit:
            v = self.parent[v]
        return v

    def scaled(self, factor: float) -> "WellSeparatedTree":
        return WellSeparatedTree(
            dict(self.parent), {v: w * factor for v, w in self.weight.items()}, dict(self.leaf_of)
        )

    def distance_range(self) -> tuple[float, float]:
        """Smallest and largest distance between distinct letters (0, 0 for one letter)."""
        letters = self.letters
        ds = [self.distance(a, b) for i, a in enumerate(letters) for b in letters[i + 1:]]
        return (min(ds), max(ds)) if ds else (0, 0)


def tree_distance(tree: WellSeparatedTree, a, b) -> float:
    return tree.distance(a, b)


def parse_tree(text: str) -> WellSeparatedTree:
    """Read ``node parent weight`` lines (parent ``-`` for the root) and
    ``leaf <letter> <node>`` lines; ``#`` starts a comment."""
    parent: dict = {}
    weight: dict = {}
    leaf_of: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if parts[0] == "leaf":
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'leaf <letter> <node>'")
            if parts[1] in leaf_of:
                raise ValueError(f"line {lineno}: letter {parts[1]!r} labelled twice")
            leaf_of[parts[1]] = parts[2]
            continue
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'node parent weight'")
        node, par = parts[0], parts[1]
        if node in parent:
            raise ValueError(f"line {lineno}: node {node!r} defined twice")
        if par == "-":
            parent[node] = None
            continue
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: edge above {node!r} has no weight")
        parent[node] = par
        weight[node] = float(parts[2])
    for letter, node in leaf_of.items():
        if node not in parent:
            raise ValueError(f"letter {letter!r} points at unknown node {node!r}")
    return WellSeparatedTree(parent, weight, leaf_of)


def read_tree(path: str | Path) -> WellSeparatedTree:
    return parse_tree(Path(path).read_text())


def format_tree(tree: WellSeparatedTree) -> str:
    lines = []
    for v, p in tree.parent.items():
        lines.append(f"{v} -" if p is None else f"{v} {p} {tree.weight[v]!r}")
    lines.extend(f"leaf {a} {v}" for a, v in tree.leaf_of.items())
    return "\n".join(lines) + "\n"


def star_tree(letters: Sequence, weight: float = 1.0) -> WellSeparatedTree:
    """Every letter hangs off the root with the same weight."""
    parent = {"root": None}
    w = {}
    leaf_of = {}
    for i, a in enumerate(letters):
        node = f"leaf{i}"
        parent[node] = "root"
        w[node] = weight
        leaf_of[a] = node
    return WellSeparatedTree(parent, w, leaf_of)


def hst_embed(metric: LetterMetric, rng: np.random.Generator, letters: Sequence | None = None) -> WellSeparatedTree:
    """Random hierarchical partition of the letters into a dominating tree.

    Distances are first scaled so the closest pair sits at 1. A random order
    and a random radius factor ``beta`` in [1, 2) carve each level: at level
    ``i`` every letter joins the first centre (in that order) within
    ``beta * 2**(i-1)``, inside its parent cluster. The edges below a cluster
    weigh the smallest power of two at least its diameter, which is below
    ``2**(i+2)`` for a level-``i+1`` cluster, so weights never grow downward
    and no distance shrinks. Unary chains are contracted.
    """
    letters = list(metric.letters if letters is None else letters)
    if not letters:
        raise ValueError("cannot embed an empty alphabet")
    sigma = len(letters)
    if sigma == 1:
        return WellSeparatedTree({"root": None, "n0": "root"}, {"n0": 1.0}, {letters[0]: "n0"})
    dist = np.array([[float(metric(a, b)) if a != b else 0.0 for b in letters] for a in letters])
    if not np.all(np.isfinite(dist)) or not np.allclose(dist, dist.T) or np.any(np.diag(dist) != 0):
        raise ValueError("metric must be finite, symmetric and zero on the diagonal")
    off = dist[~np.eye(sigma, dtype=bool)]
    if np.any(off <= 0):
        raise ValueError("distinct letters need a positive distance")
    unit = off.min()
    dist = dist / unit
    top = max(1, math.ceil(math.log2(dist.max())) + 1)
    order = rng.permutation(sigma)
    beta = 1.0 + rng.random()

    parent: dict = {}
    weight: dict = {}
    root = "c0"
    parent[root] = None
    clusters = [(root, list(range(sigma)))]
    counter = 1
    for level in range(top - 1, -1, -1):
        radius = beta * 2.0 ** (level - 1)
        refined = []
        for node, members in clusters:
            groups: dict[int, list[int]] = {}
            for x in members:
                centre = next(int(c) for c in order if dist[c, x] <= radius)
                groups.setdefault(centre, []).append(x)
            diam = dist[np.ix_(members, members)].max()
            w = 2.0 ** math.ceil(math.log2(diam) - 1e-9) if diam > 0 else 1.0
            for group in groups.values():
                child = f"c{counter}"
                counter += 1
                parent[child] = node
                weight[child] = w
                refined.append((child, group))
        clusters = refined
    leaf_of = {}
    for node, members in clusters:
        assert len(members) == 1, "level-0 radius is below the closest pair"
        leaf_of[letters[members[0]]] = node
    parent, weight = _contract_unary(parent, weight)
    return WellSeparatedTree(parent, {v: float(w * unit) for v, w in weight.items()}, leaf_of)


def _contract_unary(parent: dict, weight: dict) -> tuple[dict, dict]:
    """Splice out internal nodes with one child; the kept edge takes the upper weight."""
    children: dict = {v: [] for v in parent}
    for v, p in parent.items():
        if p is not None:
            children[p].append(v)
    parent, weight = dict(parent), dict(weight)
    for v in list(parent):
        if parent[v] is None or len(children[v]) != 1:
            continue
        (c,) = children[v]
        p = parent[v]
        parent[c] = p
        weight[c] = weight[v]
        children[p] = [c if x == v else x for x in children[p]]
        del parent[v], weight[v], children[v]
    return parent, weight
