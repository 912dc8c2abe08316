"""Weighted graphs on d vertices and the enumeration machinery around them.

Vertices are ``0..d-1`` internally and ``1..d`` in text.  A graph stores one
non-negative weight per unordered pair; weight 0 means "no edge".  Pairs are
kept in colex order ``(0,1), (0,2), (1,2), (0,3), ...`` so that the weights
among the first k vertices form a prefix, which is what lets the canonical
labelling search prune level by level.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, ResourceLimitError

MAX_DEGREE = 8


@lru_cache(maxsize=None)
def pairs(d: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for j in range(d) for i in range(j))


@lru_cache(maxsize=None)
def _pair_index(d: int) -> dict[tuple[int, int], int]:
    return {pr: k for k, pr in enumerate(pairs(d))}


def pair_index(d: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return _pair_index(d)[(i, j)]


def check_degree(d: int, max_degree: int = MAX_DEGREE) -> None:
    if d > max_degree:
        raise ResourceLimitError(f"degree {d} exceeds the configured maximum {max_degree}")


@dataclass(frozen=True, order=True)
class WeightedGraph:
    d: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) != self.d * (self.d - 1) // 2:
            raise ValueError("weight tuple does not match the vertex count")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")

    @classmethod
    def empty(cls, d: int) -> "WeightedGraph":
        return cls(d, (0,) * (d * (d - 1) // 2))

    @classmethod
    def complete(cls, d: int, weight: int = 1) -> "WeightedGraph":
        return cls(d, (weight,) * (d * (d - 1) // 2))

    @classmethod
    def from_edges(cls, d: int, edges: dict) -> "WeightedGraph":
        """Build from ``{(i, j): w}`` with 0-based vertices."""
        ws = [0] * (d * (d - 1) // 2)
        for (i, j), w in edges.items():
            if i == j:
                raise ValueError("loops are not allowed")
            ws[pair_index(d, i, j)] = w
        return cls(d, tuple(ws))

    def w(self, i: int, j: int) -> int:
        return self.weights[pair_index(self.d, i, j)]

    def edges(self) -> dict[tuple[int, int], int]:
        return {pr: w for pr, w in zip(pairs(self.d), self.weights) if w > 0}

    @property
    def edge_count(self) -> int:
        return sum(1 for w in self.weights if w > 0)

    @property
    def max_weight(self) -> int:
        return max(self.weights, default=0)

    def is_complete(self) -> bool:
        return all(w > 0 for w in self.weights)

    def relabel(self, perm) -> "WeightedGraph":
        """Graph whose edge perm[i]-perm[j] carries this graph's weight on i-j."""
        ws = [0] * len(self.weights)
        idx = _pair_index(self.d)
        for (i, j), w in zip(pairs(self.d), self.weights):
            a, b = perm[i], perm[j]
            ws[idx[(a, b) if a < b else (b, a)]] = w
        return WeightedGraph(self.d, tuple(ws))

    def components(self) -> list[frozenset[int]]:
        """Connected components of the positive-weight edge set."""
        parent = list(range(self.d))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (i, j), w in zip(pairs(self.d), self.weights):
            if w > 0:
                parent[find(i)] = find(j)
        groups: dict[int, set[int]] = {}
        for v in range(self.d):
            groups.setdefault(find(v), set()).add(v)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def is_cluster_union(self) -> bool:
        """True iff the positive-weight edges form a disjoint union of complete graphs."""
        for block in self.components():
            for i, j in itertools.combinations(sorted(block), 2):
                if self.w(i, j) == 0:
                    return False
        return True

    def to_text(self) -> str:
        body = ", ".join(f"{i + 1}-{j + 1}:{w}" for (i, j), w in sorted(self.edges().items()))
        return f"{self.d}; {body}" if body else f"{self.d};"

    @classmethod
    def from_text(cls, text: str) -> "WeightedGraph":
        head, _, body = text.partition(";")
        try:
            d = int(head)
        except ValueError as exc:
            raise InputError(f"bad graph text {text!r}") from exc
        edges = {}
        for item in filter(None, (s.strip() for s in body.split(","))):
            m = re.fullmatch(r"(\d+)-(\d+):(\d+)", item)
            if not m:
                raise InputError(f"bad edge {item!r} in graph text")
            i, j, w = (int(g) for g in m.groups())
            if not (1 <= i <= d and 1 <= j <= d):
                raise InputError(f"vertex out of range in {item!r}")
            edges[(i - 1, j - 1)] = w
        return cls.from_edges(d, edges)

    def __str__(self):
        return self.to_text()


def is_auxiliary(g: WeightedGraph) -> bool:
    """Surjective positive weights onto 1..n, plus the ultrametric triangle rule."""
    positive = {w for w in g.weights if w > 0}
    if not positive or positive != set(range(1, max(positive) + 1)):
        return False
    for a, b, c in itertools.combinations(range(g.d), 3):
        x, y, z = g.w(a, b), g.w(a, c), g.w(b, c)
        # minimum of the three attained at least twice
        lo = min(x, y, z)
        if (x == lo) + (y == lo) + (z == lo) < 2:
            return False
    return True


CanonicalKey = tuple  # (d, weights in colex order under the minimising labelling)


def _canonical_labelling(g: WeightedGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    d = g.d
    wm = [[0] * d for _ in range(d)]
    for (i, j), w in zip(pairs(d), g.weights):
        wm[i][j] = wm[j][i] = w
    # Level-by-level search keeping only orders whose weight prefix is minimal.
    frontier = [((), ())]
    for _ in range(d):
        best = None
        nxt = []
        for order, prefix in frontier:
            used = set(order)
            for v in range(d):
                if v in used:
                    continue
                ext = prefix + tuple(wm[u][v] for u in order)
                if best is None or ext < best:
                    best = ext
                    nxt = [(order + (v,), ext)]
                elif ext == best:
                    nxt.append((order + (v,), ext))
        frontier = nxt
    order, seq = frontier[0]
    return order, seq


def canonical_form(g: WeightedGraph) -> CanonicalKey:
    """Lexicographically least colex weight sequence over all relabellings."""
    return (g.d, _canonical_labelling(g)[1])


def canonical_graph(g: WeightedGraph) -> WeightedGraph:
    return WeightedGraph(g.d, canonical_form(g)[1])


def key_text(key: CanonicalKey) -> str:
    return WeightedGraph(key[0], key[1]).to_text()


def cosets(g: WeightedGraph) -> list[WeightedGraph]:
    """Distinct labelled images of g under S_d (one per coset of the stabiliser)."""
    seen = {g.relabel(p) for p in itertools.permutations(range(g.d))}
    return sorted(seen)


def prime_graph(g: WeightedGraph) -> WeightedGraph:
    return WeightedGraph(g.d, tuple(w + 1 if w > 0 else 0 for w in g.weights))


def _set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def candidate_set(g: WeightedGraph) -> list[WeightedGraph]:
    """Possible next auxiliary graphs given the current one.

    Prime g, then merge its blocks into a strictly coarser partition with new
    weight-1 edges.  Returned as canonical representatives, sorted by key.
    """
    if not g.is_cluster_union():
        raise ValueError("candidate_set needs a disjoint union of complete graphs")
    base = prime_graph(g)
    blocks = g.components()
    found = {}
    for part in _set_partitions(range(len(blocks))):
        if len(part) == len(blocks):
            continue
        ws = list(base.weights)
        for group in part:
            for a, b in itertools.combinations(group, 2):
                for i in blocks[a]:
                    for j in blocks[b]:
                        ws[pair_index(g.d, i, j)] = 1
        h = WeightedGraph(g.d, tuple(ws))
        key = canonical_form(h)
        if key not in found:
            found[key] = WeightedGraph(g.d, key[1])
    return [found[k] for k in sorted(found)]


@lru_cache(maxsize=None)
def _enumerate(d: int) -> tuple[WeightedGraph, ...]:
    seen = {}
    frontier = [WeightedGraph.empty(d)]
    while frontier:
        nxt = []
        for g in frontier:
            if g.is_complete():
                continue
            for h in candidate_set(g):
                key = canonical_form(h)
                if key not in seen:
                    seen[key] = h
                    nxt.append(h)
        frontier = nxt
    return tuple(seen[k] for k in sorted(seen))


def enumerate_auxiliary(d: int, max_degree: int = MAX_DEGREE) -> list[WeightedGraph]:
    """One canonical representative per isomorphism class of auxiliary graphs.

    Every auxiliary graph arises from a smaller one by :func:`candidate_set`
    (drop the weight-1 edges and decrement), so a closure from the empty graph
    reaches all of them.
    """
    if d < 2:
        raise InputError("auxiliary graphs need at least 2 vertices")
    check_degree(d, max_degree)
    return list(_enumerate(d))
