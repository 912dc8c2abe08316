"""Inductive recovery of the cluster picture from valuations of the J_{G,f}.

At step n+1 every candidate H extending the current auxiliary graph G_n gets
the value

    A(H) = (-ord J_{H,f} - 2 sum_{l<=n} e_l (n+2-l) d_l) / (2 (|E_H| - |E_{G_n}|)),

the maximiser with the most edges becomes G_{n+1} and the maximum is d_{n+1}.
Once the graph is complete, its weights and the depths give the tree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantError
from .evaluator import CacheStore, MonicInput, ord_J
from .graphs import WeightedGraph, candidate_set, is_auxiliary
from .valfield import INF, ExtRational, Valuation, fmt, parse_ext

# -- cluster pictures -----------------------------------------------------------


@dataclass(frozen=True)
class Cluster:
    """Internal node; children are Clusters or 1-based leaf indices."""

    depth: Fraction
    children: tuple

    @property
    def size(self) -> int:
        return sum(c.size if isinstance(c, Cluster) else 1 for c in self.children)

    def leaves(self) -> list[int]:
        out = []
        for c in self.children:
            out.extend(c.leaves() if isinstance(c, Cluster) else [c])
        return out


def _sort_key(node):
    if isinstance(node, Cluster):
        return (-node.size, -node.depth, _shape(node))
    return (-1, 1, "r")


def _sorted_children(node: Cluster):
    return sorted(node.children, key=_sort_key)


def _depth_text(t) -> str:
    s = fmt(t)
    return s if len(s) == 1 else "{" + s + "}"


def _shape(node) -> str:
    if not isinstance(node, Cluster):
        return "r"
    return "(" + " ".join(_shape(c) for c in _sorted_children(node)) + ")_" + _depth_text(node.depth)


class ClusterPicture:
    """Rooted tree of clusters with exact depths.  Equality ignores root labels."""

    def __init__(self, degree: int, root):
        self.degree = degree
        self.root = root          # Cluster, or the single leaf 1 when degree == 1
        self._check()

    def _check(self):
        if isinstance(self.root, Cluster):
            leaves = self.root.leaves()
            if sorted(leaves) != list(range(1, self.degree + 1)):
                raise InvariantError("cluster picture leaves must be 1..d exactly once")

            def walk(node, parent_depth):
                if parent_depth is not None and not node.depth > parent_depth:
                    raise InvariantError("child cluster is not deeper than its parent")
                if len(node.children) < 2:
                    raise InvariantError("cluster with fewer than two children")
                for c in node.children:
                    if isinstance(c, Cluster):
                        walk(c, node.depth)

            walk(self.root, None)
        elif self.degree != 1:
            raise InvariantError("a bare leaf is only a picture of degree 1")

    def ascii(self) -> str:
        return _shape(self.root)

    def __eq__(self, other):
        return isinstance(other, ClusterPicture) and self.degree == other.degree and self.ascii() == other.ascii()

    def __hash__(self):
        return hash((self.degree, self.ascii()))

    def __repr__(self):
        return f"ClusterPicture({self.ascii()})"

    def clusters(self) -> list[Cluster]:
        out = []

        def walk(node):
            if isinstance(node, Cluster):
                out.append(node)
                for c in node.children:
                    walk(c)

        walk(self.root)
        return out

    def depths(self) -> list[Fraction]:
        return sorted({c.depth for c in self.clusters()}, reverse=True)

    def relative_depths(self) -> dict:
        """Relative depth of every proper cluster, keyed by its sorted leaf tuple."""
        out = {}

        def walk(node, parent):
            if isinstance(node, Cluster):
                if parent is not None:
                    out[tuple(sorted(node.leaves()))] = node.depth - parent.depth
                for c in node.children:
                    walk(c, node)

        walk(self.root, None)
        return out

    def canonical(self) -> "ClusterPicture":
        """Same shape with leaves renumbered 1..d in display order."""
        counter = itertools.count(1)

        def walk(node):
            if isinstance(node, Cluster):
                return Cluster(node.depth, tuple(walk(c) for c in _sorted_children(node)))
            return next(counter)

        return ClusterPicture(self.degree, walk(self.root))

    def to_dict(self) -> dict:
        def enc(node):
            if isinstance(node, Cluster):
                return {"depth": fmt(node.depth), "children": [enc(c) for c in _sorted_children(node)]}
            return {"leaf": node}

        return enc(self.root)

    @classmethod
    def from_dict(cls, degree: int, data: dict) -> "ClusterPicture":
        def dec(obj):
            if "leaf" in obj:
                return int(obj["leaf"])
            depth = parse_ext(obj["depth"])
            return Cluster(Fraction(depth), tuple(dec(c) for c in obj["children"]))

        return cls(degree, dec(data))


def picture_from_valuation(d: int, val) -> ClusterPicture:
    """Top-down split: a cluster's depth is its least pairwise value, children are
    the classes of "value strictly larger".  ``val(i, j)`` takes 0-based indices."""
    if d == 1:
        return ClusterPicture(1, 1)

    def build(members):
        if len(members) == 1:
            return members[0] + 1
        t = min(val(i, j) for i, j in itertools.combinations(members, 2))
        groups: list[list[int]] = []
        for v in members:
            for grp in groups:
                if val(grp[0], v) > t:
                    grp.append(v)
                    break
            else:
                groups.append([v])
        for grp in groups:
            if any(val(i, j) <= t for i, j in itertools.combinations(grp, 2)):
                raise InvariantError("valuations are not ultrametric")
        return Cluster(Fraction(t), tuple(build(g) for g in groups))

    return ClusterPicture(d, build(list(range(d))))


# -- recovery state ------------------------------------------------------------------


@dataclass(frozen=True)
class DepthProfile:
    depths: tuple      # d_1 > d_2 > ... > d_k
    mult: tuple        # e_1 .. e_k

    def __post_init__(self):
        if len(self.depths) != len(self.mult):
            raise InvariantError("depth and multiplicity lists differ in length")
        if any(a <= b for a, b in zip(self.depths, self.depths[1:])):
            raise InvariantError("depths must strictly decrease")
        if any(e <= 0 for e in self.mult):
            raise InvariantError("multiplicities must be positive")

    @property
    def k(self) -> int:
        return len(self.depths)


@dataclass(frozen=True)
class CandidateRecord:
    graph: WeightedGraph
    edges: int
    ord_j: Valuation
    value: ExtRational
    forced: bool = False


@dataclass(frozen=True)
class StepRecord:
    n: int                      # index of the graph chosen at this step
    correction: Fraction        # 2 sum e_l (n+1-l) d_l over earlier steps
    candidates: tuple
    selected: WeightedGraph
    depth: Fraction

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "candidates": [
                {"graph": c.graph.to_text(), "edges": c.edges, "ord_J": fmt(c.ord_j), "A": fmt(c.value),
                 "forced": c.forced}
                for c in self.candidates
            ],
            "selected": self.selected.to_text(),
            "depth": fmt(self.depth),
        }


@dataclass
class RecoveryState:
    d: int
    graph: WeightedGraph
    depths: list = field(default_factory=list)
    mult: list = field(default_factory=list)
    ord_j: list = field(default_factory=list)     # ord J_{G_l, f} for l = 1..n
    trace: list = field(default_factory=list)

    @classmethod
    def start(cls, d: int) -> "RecoveryState":
        return cls(d, WeightedGraph.empty(d))

    @property
    def n(self) -> int:
        return len(self.depths)

    def correction(self) -> Fraction:
        """2 sum_{l=1}^{n} e_l (n+2-l) d_l, cross-checked against the ord J history."""
        n = self.n
        direct = 2 * sum(e * (n + 2 - l) * t for l, (e, t) in enumerate(zip(self.mult, self.depths), start=1))
        if n:
            prev = self.ord_j[-2] if n >= 2 else 0
            via_ord = -2 * self.ord_j[-1] + prev
            if via_ord != direct:
                raise InvariantError(f"correction term mismatch at n={n}: {direct} vs {via_ord}")
        return Fraction(direct)


def average(h: WeightedGraph, state: RecoveryState, ord_j_h: Valuation) -> ExtRational:
    gained = h.edge_count - state.graph.edge_count
    if gained <= 0:
        raise InvariantError("candidate does not add edges")
    if ord_j_h == INF:
        return -INF
    return (-ord_j_h - state.correction()) / (2 * gained)


def step(state: RecoveryState, f: MonicInput, cache: CacheStore, shortcut: bool = True) -> RecoveryState:
    cands = candidate_set(state.graph)
    if not cands:
        raise InvariantError("step called on a complete graph")
    correction = state.correction()
    records = []
    for h in cands:
        forced = shortcut and len(cands) == 1
        if forced:
            # the only candidate is G_n primed and completed: J_H = J_{G_n} / Delta
            prev = state.ord_j[-1] if state.n else 0
            oj = prev - f.ord_disc
        else:
            oj = ord_J(cache.get_or_compute(h), f)
        records.append(CandidateRecord(h, h.edge_count, oj, average(h, state, oj), forced))
    best = max(r.value for r in records)
    if best == -INF:
        raise InvariantError("every candidate has J = 0")
    top = [r for r in records if r.value == best]
    most = max(r.edges for r in top)
    chosen = [r for r in top if r.edges == most]
    if len(chosen) != 1:
        raise InvariantError("several maximisers share the largest edge count")
    pick = chosen[0]
    depth = Fraction(best)
    if state.depths and depth >= state.depths[-1]:
        raise InvariantError(f"depths do not decrease ({state.depths[-1]} then {depth})")
    state.trace.append(StepRecord(state.n + 1, correction, tuple(records), pick.graph, depth))
    state.mult.append(pick.edges - state.graph.edge_count)
    state.depths.append(depth)
    state.ord_j.append(pick.ord_j)
    state.graph = pick.graph
    return state


def assemble(g: WeightedGraph, profile: DepthProfile) -> ClusterPicture:
    """Tree from the final (complete) auxiliary graph and the depths."""
    if not g.is_complete():
        raise InvariantError("assemble needs the complete final graph")
    if not is_auxiliary(g):
        raise InvariantError("final weight matrix is not ultrametric")
    k = profile.k
    if g.max_weight != k:
        raise InvariantError("weights do not match the number of depths")
    return picture_from_valuation(g.d, lambda i, j: profile.depths[k - g.w(i, j)])


@dataclass(frozen=True)
class RecoveryResult:
    picture: ClusterPicture
    profile: DepthProfile
    trace: tuple
    final_graph: WeightedGraph | None
    ord_cf: Valuation

    def __iter__(self):
        return iter((self.picture, self.profile, self.trace))


def run(f: MonicInput, cache: CacheStore | None = None, shortcut: bool = True) -> RecoveryResult:
    if cache is None:
        cache = CacheStore()
    if f.d == 1:
        return RecoveryResult(ClusterPicture(1, 1), DepthProfile((), ()), (), None, f.ord_cf)
    state = RecoveryState.start(f.d)
    limit = f.d * (f.d - 1) // 2
    while not state.graph.is_complete():
        if state.n >= limit:
            raise InvariantError("recovery did not finish within C(d,2) steps")
        step(state, f, cache, shortcut)
    if candidate_set(state.graph):
        raise InvariantError("complete graph still has candidates")
    profile = DepthProfile(tuple(state.depths), tuple(state.mult))
    picture = assemble(state.graph, profile).canonical()
    return RecoveryResult(picture, profile, tuple(state.trace), state.graph, f.ord_cf)
