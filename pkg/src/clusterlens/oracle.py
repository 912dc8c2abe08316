"""Ground truth from explicit roots or prescribed valuation matrices.

Nothing here looks at polynomial coefficients: pictures come straight from
pairwise valuations, so these functions serve as the reference the recovery
algorithm is tested against.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .evaluator import MonicInput
from .graphs import WeightedGraph, cosets, pairs
from .recover import Cluster, ClusterPicture, DepthProfile
from .sympoly import elementary_values
from .valfield import INF, ExtRational, ValuedContext, fmt, ord_p, parse_rational


@dataclass(frozen=True)
class ValMatrix:
    """Pairwise valuations ord(x_i - x_j), stored in colex pair order."""

    d: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.d * (self.d - 1) // 2:
            raise InputError("wrong number of matrix entries")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def from_function(cls, d: int, fn) -> "ValMatrix":
        return cls(d, tuple(fn(i, j) for i, j in pairs(d)))

    def __call__(self, i: int, j: int) -> Fraction:
        if i > j:
            i, j = j, i
        return self.values[j * (j - 1) // 2 + i]

    def is_ultrametric(self) -> bool:
        for a, b, c in itertools.combinations(range(self.d), 3):
            x, y, z = self(a, b), self(a, c), self(b, c)
            lo = min(x, y, z)
            if (x == lo) + (y == lo) + (z == lo) < 2:
                return False
        return True

    def levels(self) -> list[Fraction]:
        """Distinct values, largest first (d_1 > d_2 > ...)."""
        return sorted(set(self.values), reverse=True)

    def to_text(self) -> str:
        lines = [str(self.d)]
        for i in range(self.d):
            for j in range(i + 1, self.d):
                lines.append(f"{i + 1} {j + 1} {fmt(self(i, j))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ValMatrix":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or len(rows[0]) != 1:
            raise InputError("matrix text must start with the dimension")
        d = int(rows[0][0])
        entries = {}
        for row in rows[1:]:
            if len(row) != 3:
                raise InputError(f"bad matrix line {' '.join(row)!r}")
            i, j = int(row[0]) - 1, int(row[1]) - 1
            if not (0 <= i < j < d):
                raise InputError(f"bad index pair {row[0]} {row[1]}")
            entries[(i, j)] = parse_rational(row[2])
        if len(entries) != d * (d - 1) // 2:
            raise InputError("matrix text does not list every pair once")
        return cls.from_function(d, lambda i, j: entries[(i, j)])


def valmatrix_from_roots(roots, ctx: ValuedContext) -> ValMatrix:
    roots = [Fraction(r) for r in roots]
    if len(set(roots)) != len(roots):
        raise InputError("roots must be pairwise distinct")
    return ValMatrix.from_function(len(roots), lambda i, j: ord_p(roots[i] - roots[j], ctx))


def cluster_from_valmatrix(m: ValMatrix) -> tuple[ClusterPicture, DepthProfile]:
    """Bottom-up single linkage: merge classes level by level from the deepest value."""
    if not m.is_ultrametric():
        raise InputError("valuation matrix is not ultrametric")
    d = m.d
    if d == 1:
        return ClusterPicture(1, 1), DepthProfile((), ())
    levels = m.levels()
    mult = tuple(sum(1 for v in m.values if v == t) for t in levels)
    node = {i: i + 1 for i in range(d)}       # class representative -> subtree
    owner = list(range(d))
    for t in levels:
        groups: dict[int, set[int]] = {}
        for i, j in pairs(d):
            if m(i, j) == t:
                a, b = owner[i], owner[j]
                if a != b:
                    ga = groups.setdefault(a, {a})
                    gb = groups.setdefault(b, {b})
                    merged = ga | gb
                    for x in merged:
                        groups[x] = merged
        done = set()
        for rep, grp in groups.items():
            key = frozenset(grp)
            if key in done:
                continue
            done.add(key)
            new = min(grp)
            node[new] = Cluster(t, tuple(node[r] for r in sorted(grp)))
            for r in grp:
                if r != new:
                    del node[r]
            for v in range(d):
                if owner[v] in grp:
                    owner[v] = new
    (root,) = node.values()
    return ClusterPicture(d, root), DepthProfile(tuple(levels), mult)


def auxiliary_graph(m: ValMatrix, n: int) -> WeightedGraph:
    """Edges with value >= d_n, weighted n+1-l for value d_l."""
    levels = m.levels()
    if not 0 <= n <= len(levels):
        raise ValueError(f"n={n} outside 0..{len(levels)}")
    rank = {t: l for l, t in enumerate(levels, start=1)}
    weights = tuple(n + 1 - rank[v] if rank[v] <= n else 0 for v in m.values)
    return WeightedGraph(m.d, weights)


def tropical_ord(g: WeightedGraph, m: ValMatrix) -> ExtRational:
    """min over summands of ord(S^sigma) = -max_sigma 2 sum w_sigma(ij) M(ij).

    A lower bound for ord(J_{G,f}); the minimum is attained by a single summand
    (hence equality) when G is an auxiliary graph of M in its own labelling.
    """
    if g.d != m.d:
        raise ValueError("graph and matrix sizes differ")
    if not any(g.weights):
        return Fraction(0)
    best = max(sum(w * v for w, v in zip(h.weights, m.values)) for h in cosets(g))
    return -2 * best


def tropical_attainers(g: WeightedGraph, m: ValMatrix) -> int:
    """Number of summands attaining the tropical minimum."""
    scores = [sum(w * v for w, v in zip(h.weights, m.values)) for h in cosets(g)]
    top = max(scores)
    return sum(1 for s in scores if s == top)


# -- constructing instances ----------------------------------------------------------

def poly_from_roots(roots, ctx: ValuedContext, cf=1) -> MonicInput:
    a = elementary_values([Fraction(r) for r in roots])
    return MonicInput(ctx, len(roots), tuple(a), ord_p(cf, ctx))


def roots_for_picture(picture: ClusterPicture, p: int, rng: random.Random, centre=0) -> list[Fraction]:
    """Rational roots realising a picture with integer depths (leaf i -> roots[i-1]).

    Siblings inside a cluster of depth t sit at p^t * u_i with the u_i distinct
    mod p, so at most p children per cluster are possible.
    """
    out: dict[int, Fraction] = {}

    def place(node, c):
        if not isinstance(node, Cluster):
            out[node] = c
            return
        if node.depth.denominator != 1:
            raise InputError("rational roots need integer depths")
        if len(node.children) > p:
            raise InputError(f"a cluster with {len(node.children)} children needs p >= {len(node.children)}")
        residues = rng.sample(range(p), len(node.children))
        scale = Fraction(p) ** int(node.depth)
        for child, u in zip(node.children, residues):
            unit = u + p * rng.randint(-2, 2)
            place(child, c + scale * unit)

    place(picture.root, Fraction(centre))
    return [out[i] for i in range(1, picture.degree + 1)]


def random_picture(d: int, rng: random.Random, max_children: int, top_range=(-1, 2),
                   gap_range=(1, 3)) -> ClusterPicture:
    """A random tree of clusters with integer depths."""
    labels = iter(range(1, d + 1))

    def build(size, depth):
        if size == 1:
            return next(labels)
        k = rng.randint(2, min(size, max_children))
        cuts = sorted(rng.sample(range(1, size), k - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [size])]
        kids = []
        for s in parts:
            if s == 1:
                kids.append(build(1, None))
            else:
                kids.append(build(s, depth + rng.randint(*gap_range)))
        return Cluster(Fraction(depth), tuple(kids))

    if d == 1:
        return ClusterPicture(1, 1)
    return ClusterPicture(d, build(d, rng.randint(*top_range)))


def random_split_poly(d: int, ctx: ValuedContext, seed: int) -> tuple[MonicInput, ValMatrix]:
    """Deterministic random monic split polynomial together with its valuation matrix."""
    if d < 2:
        raise InputError("need d >= 2")
    rng = random.Random(f"split/{d}/{ctx.p}/{seed}")
    while True:
        pic = random_picture(d, rng, max_children=min(d, ctx.p))
        roots = roots_for_picture(pic, ctx.p, rng, centre=rng.randint(-3, 3))
        m = valmatrix_from_roots(roots, ctx)
        # the construction fixes every pairwise valuation; reject if anything slipped
        if len(set(m.values)) == len(pic.depths()):
            break
    cf = Fraction(ctx.p) ** rng.randint(-1, 2) * rng.choice([1, 2, 3, -1])
    if cf.numerator % ctx.p == 0 and ord_p(cf, ctx) < 0:
        cf = Fraction(1)
    return poly_from_roots(roots, ctx, cf), m


def complete_shapes(d: int) -> list[WeightedGraph]:
    """Complete auxiliary graphs on d vertices: one per ranked cluster-picture shape."""
    from .graphs import enumerate_auxiliary

    if d == 2:
        return [WeightedGraph.complete(2)]
    return [g for g in enumerate_auxiliary(d) if g.is_complete()]


def structured_corpus(d: int, primes=(3, 5, 7), depth_sets=None, seed: int = 0):
    """Split polynomials realising every ranked shape on d roots.

    Yields (shape graph, prime, depths, MonicInput, ValMatrix); shapes whose
    clusters have more than p children are skipped for that p.
    """
    from .recover import assemble

    rng = random.Random(f"corpus/{d}/{seed}")
    for g in complete_shapes(d):
        k = g.max_weight
        sets = depth_sets(k) if depth_sets else [tuple(range(k - 1, -1, -1)), tuple(range(2 * k - 1, -1, -2)),
                                                  tuple(x - 1 for x in range(k, 0, -1))]
        for p in primes:
            ctx = ValuedContext(p)
            for depths in sets:
                profile_depths = tuple(Fraction(x) for x in depths)
                mult = tuple(sum(1 for w in g.weights if w == k - i) for i in range(k))
                pic = assemble(g, DepthProfile(profile_depths, mult))
                if max(len(c.children) for c in pic.clusters()) > p:
                    continue
                roots = roots_for_picture(pic, p, rng, centre=rng.randint(-5, 5))
                yield g, p, profile_depths, poly_from_roots(roots, ctx), valmatrix_from_roots(roots, ctx)


__all__ = [
    "INF", "ValMatrix", "valmatrix_from_roots", "cluster_from_valmatrix", "auxiliary_graph", "tropical_ord",
    "tropical_attainers", "poly_from_roots", "roots_for_picture", "random_picture", "random_split_poly",
    "complete_shapes", "structured_corpus",
]
