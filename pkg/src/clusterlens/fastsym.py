"""Elementary-basis forms of graph numerators without expanding in the roots.

For d >= 5 the X-space expansion of a numerator has far too many monomials,
so the A-basis polynomial is reconstructed from values instead:

1. the power of Delta dividing the numerator N is read off from the order
   of vanishing of N along a random line through the diagonal x_1 = x_2;
2. Q = N / Delta^j is interpolated on the hyperplane A_{d-1} = 0 (roots summing
   to zero) modulo several word-size primes.  Q is weighted homogeneous, so the
   unknowns are the monomials prod A_i^b_i with sum (d - i) b_i = deg Q;
3. the residues are combined by CRT until they stop changing, then the result
   is checked exactly at random integer points;
4. the A_{d-1}-dependence is restored from translation invariance, which gives
   the recurrence  d (k+1) g_{k+1} = -(L g_k + M g_{k-1})  for the coefficients
   of t = A_{d-1}, with L = sum_{i<=d-3} (i+1) A_{i+1} d/dA_i and
   M = (d-1) d/dA_{d-2};
5. the lifted polynomial is checked exactly at random (uncentred) integer roots.

Every returned polynomial has therefore been verified in exact arithmetic.
"""
from __future__ import annotations

import math
import random
from functools import lru_cache

import numpy as np

from .errors import InvariantError
from .graphs import WeightedGraph, cosets, pairs
from .sympoly import ElemPoly, elem_leading_partition, elementary_values
from .valfield import is_prime

_MAX_PRIMES = 64
_CHECK_POINTS = 3
_CHECK_RANGE = 10**6


@lru_cache(maxsize=None)
def _primes() -> tuple[int, ...]:
    out = []
    q = 2**31 - 1
    while len(out) < _MAX_PRIMES:
        if is_prime(q):
            out.append(q)
        q -= 2
    return tuple(out)


@lru_cache(maxsize=None)
def weighted_monomials(d: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors over A_0..A_{d-1} with A_{d-1} absent and sum (d-i) b_i = degree."""
    out = []

    def rec(i, left, acc):
        if i == d - 1:
            if left == 0:
                out.append(tuple(acc) + (0,))
            return
        wt = d - i
        for b in range(left // wt + 1):
            rec(i + 1, left - wt * b, acc + [b])

    rec(0, degree, [])
    return tuple(sorted(out))


# -- arithmetic mod p on numpy vectors (p < 2^31, so products fit in int64) ----

def _powmod_vec(x, e, p):
    result = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            result = result * base % p
        e >>= 1
        if e:
            base = base * base % p
    return result


def _elementary_mod(roots, p):
    """A_0..A_{d-1} for each column of a (d, n) root array."""
    d, n = roots.shape
    coeffs = [np.ones(n, dtype=np.int64)]
    for r in roots:
        nxt = [np.zeros(n, dtype=np.int64) for _ in range(len(coeffs) + 1)]
        for k, c in enumerate(coeffs):
            nxt[k + 1] = (nxt[k + 1] + c) % p
            nxt[k] = (nxt[k] - r * c) % p
        coeffs = nxt
    return coeffs[:-1]


def _lu_mod(a, p):
    """In-place LU with row pivoting mod p; returns (lu, perm) or None if singular."""
    a = a.copy()
    n = a.shape[0]
    perm = np.arange(n)
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if len(nz) == 0:
            return None
        r = c + nz[0]
        if r != c:
            a[[c, r]] = a[[r, c]]
            perm[[c, r]] = perm[[r, c]]
        inv = pow(int(a[c, c]), p - 2, p)
        mult = a[c + 1:, c] * inv % p
        a[c + 1:, c] = mult
        if c + 1 < n:
            a[c + 1:, c + 1:] = (a[c + 1:, c + 1:] - np.outer(mult, a[c, c + 1:]) % p) % p
    return a, perm


def _lu_solve(lu, perm, b, p):
    n = lu.shape[0]
    y = b[perm] % p
    for c in range(n - 1):
        y[c + 1:] = (y[c + 1:] - lu[c + 1:, c] * y[c]) % p
    for c in range(n - 1, -1, -1):
        y[c] = y[c] * pow(int(lu[c, c]), p - 2, p) % p
        if c:
            y[:c] = (y[:c] - lu[:c, c] * y[c]) % p
    return y


class _Plan:
    """Sample points and factored monomial matrix for one (d, degree, p)."""

    def __init__(self, d: int, degree: int, p: int):
        self.d, self.degree, self.p = d, degree, p
        monos = weighted_monomials(d, degree)
        n = len(monos)
        rng = random.Random(f"{d}/{degree}/{p}")
        for _ in range(8):
            roots = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(d - 1)], dtype=np.int64)
            last = (-roots.sum(axis=0)) % p
            roots = np.vstack([roots, last[None, :]]) if d > 1 else roots
            avals = _elementary_mod(roots, p)
            mat = np.ones((n, n), dtype=np.int64)
            for col, beta in enumerate(monos):
                for i, b in enumerate(beta):
                    if b:
                        mat[:, col] = mat[:, col] * _powmod_vec(avals[i], b, p) % p
            sq = {}
            for (i, j) in pairs(d):
                diff = (roots[i] - roots[j]) % p
                sq[(i, j)] = diff * diff % p
            disc = np.ones(n, dtype=np.int64)
            for v in sq.values():
                disc = disc * v % p
            if np.any(disc == 0):
                continue
            fact = _lu_mod(mat, p)
            if fact is None:
                continue
            self.roots, self.sq, self.disc = roots, sq, disc
            self.lu, self.perm = fact
            self.monos = monos
            return
        raise InvariantError(f"no invertible sample set for d={d}, degree={degree}")

    def values(self, maps, j):
        """Q = N / Delta^j at the sample points, N = sum over maps of prod sq^e."""
        p = self.p
        prs = pairs(self.d)
        top = max((max(m) for m in maps), default=0)
        powers = {pr: [np.ones_like(self.disc), self.sq[pr]] for pr in prs}
        for pr in prs:
            for _ in range(top - 1):
                powers[pr].append(powers[pr][-1] * self.sq[pr] % p)
        total = np.zeros_like(self.disc)
        for m in maps:
            term = np.ones_like(self.disc)
            for pr, e in zip(prs, m):
                if e:
                    term = term * powers[pr][e] % p
            total = (total + term) % p
        if j:
            total = total * _powmod_vec(_powmod_vec(self.disc, p - 2, p), j, p) % p
        return total

    def solve(self, maps, j):
        return _lu_solve(self.lu, self.perm, self.values(maps, j), p=self.p)


_plans: dict = {}


def _plan(d, degree, p):
    key = (d, degree, p)
    if key not in _plans:
        _plans[key] = _Plan(d, degree, p)
    return _plans[key]


def clear_plans():
    _plans.clear()


# -- exact checks -----------------------------------------------------------

def _numerator_exact(roots, maps, j):
    prs = pairs(len(roots))
    sq = [(roots[i] - roots[k]) ** 2 for i, k in prs]
    total = 0
    for m in maps:
        term = 1
        for s, e in zip(sq, m):
            if e:
                term *= s**e
        total += term
    if j:
        disc = math.prod(sq)
        q, r = divmod(total, disc**j)
        if r:
            raise InvariantError("numerator not divisible by the discriminant power")
        total = q
    return total


def _random_roots(rng, d, centred):
    while True:
        r = [rng.randint(-_CHECK_RANGE, _CHECK_RANGE) for _ in range(d)]
        if centred:
            r[-1] = -sum(r[:-1])
        if len(set(r)) == d:
            return r


def _verify(poly: ElemPoly, d, maps, j, centred, seed):
    rng = random.Random(seed)
    for _ in range(_CHECK_POINTS):
        roots = _random_roots(rng, d, centred)
        if poly.evaluate(elementary_values(roots)) != _numerator_exact(roots, maps, j):
            return False
    return True


# -- discriminant order along the diagonal -------------------------------------

def delta_power(d: int, maps, cap: int, p: int = 2**31 - 1, trials: int = 2, seed: int = 0) -> int:
    """Largest j <= cap with Delta^j dividing N = sum over maps of prod (X_i-X_j)^(2e).

    N is symmetric, so Delta^j exactly divides N iff N vanishes to order 2j
    on x_1 = x_2; the order is measured on random lines crossing that hyperplane
    using power series truncated at s^(2 cap + 1).
    """
    if d < 2 or cap <= 0:
        return 0
    rng = random.Random(seed)
    prec = 2 * cap + 1
    prs = pairs(d)
    best = None
    for _ in range(trials):
        u = [rng.randrange(p) for _ in range(d)]
        u[1] = u[0]
        v = [rng.randrange(p) for _ in range(d)]
        while v[0] == v[1]:
            v[1] = rng.randrange(p)
        total = [0] * prec
        lin = {(i, k): ((u[i] - u[k]) % p, (v[i] - v[k]) % p) for i, k in prs}
        for m in maps:
            term = [1] + [0] * (prec - 1)
            for pr, e in zip(prs, m):
                if not e:
                    continue
                c0, c1 = lin[pr]
                for _ in range(2 * e):
                    nxt = [0] * prec
                    for t, a in enumerate(term):
                        if a:
                            nxt[t] = (nxt[t] + a * c0) % p
                            if t + 1 < prec:
                                nxt[t + 1] = (nxt[t + 1] + a * c1) % p
                    term = nxt
            total = [(x + y) % p for x, y in zip(total, term)]
        order = next((t for t, a in enumerate(total) if a), prec)
        best = order if best is None else min(best, order)
    return min(best // 2, cap)


# -- interpolation and lifting --------------------------------------------------

def _crt_step(x, mod, r, p):
    inv = pow(mod % p, p - 2, p)
    return [xi + mod * (((ri - xi) * inv) % p) for xi, ri in zip(x, r)], mod * p


def _symmetric_lift(x, mod):
    half = mod // 2
    return [xi - mod if xi > half else xi for xi in x]


def interpolate_depressed(d: int, maps, j: int, degree: int, seed=0) -> ElemPoly:
    """Q = N / Delta^j restricted to A_{d-1} = 0, as an ElemPoly (exactly verified)."""
    if degree == 0:
        value = _numerator_exact(list(range(d)), maps, j)
        return ElemPoly(d, {(0,) * d: value})
    monos = weighted_monomials(d, degree)
    x, mod = [0] * len(monos), 1
    prev = None
    for p in _primes():
        plan = _plan(d, degree, p)
        r = [int(v) for v in plan.solve(maps, j)]
        x, mod = _crt_step(x, mod, r, p)
        cur = _symmetric_lift(x, mod)
        if cur == prev:
            poly = ElemPoly(d, dict(zip(monos, cur)))
            if _verify(poly, d, maps, j, centred=True, seed=f"{seed}/dep"):
                return poly
        prev = cur
    raise InvariantError(f"interpolation did not converge (d={d}, degree={degree})")


def _apply_derivation(poly: dict, d: int) -> tuple[dict, dict]:
    """Return (L poly, M poly) as term dictionaries."""
    lp, mp = {}, {}
    for e, c in poly.items():
        for i in range(d - 2):
            if e[i]:
                f = list(e)
                f[i] -= 1
                f[i + 1] += 1
                f = tuple(f)
                lp[f] = lp.get(f, 0) + (i + 1) * e[i] * c
        if d >= 2 and e[d - 2]:
            f = list(e)
            f[d - 2] -= 1
            f = tuple(f)
            mp[f] = mp.get(f, 0) + (d - 1) * e[d - 2] * c
    return lp, mp


def lift_translation(dep: ElemPoly, d: int, degree: int) -> ElemPoly:
    """Recover g from g|_{A_{d-1}=0} using invariance under x -> x + c."""
    if d < 2:
        return dep
    comps = [dict(dep.terms)]
    prev_m: dict = {}
    for k in range(degree):
        lk, mk = _apply_derivation(comps[-1], d)
        nxt = {}
        for src in (lk, prev_m):
            for e, c in src.items():
                nxt[e] = nxt.get(e, 0) + c
        prev_m = mk
        denom = d * (k + 1)
        step = {}
        for e, c in nxt.items():
            if c:
                if c % denom:
                    raise InvariantError("translation lift produced a non-integral coefficient")
                step[e] = -c // denom
        comps.append(step)
    terms = {}
    for k, comp in enumerate(comps):
        for e, c in comp.items():
            f = list(e)
            f[d - 1] = k
            terms[tuple(f)] = c
    return ElemPoly(d, terms)


def symmetric_to_elem(d: int, maps, j: int = 0, seed=0) -> ElemPoly:
    """A-basis form of N / Delta^j, N = sum over maps of prod (X_i - X_k)^(2e)."""
    maps = [tuple(m) for m in maps]
    full_degree = 2 * max(sum(m) for m in maps)
    if any(2 * sum(m) != full_degree for m in maps):
        raise InvariantError("summands of different degree")
    degree = full_degree - d * (d - 1) * j
    dep = interpolate_depressed(d, maps, j, degree, seed)
    g = lift_translation(dep, d, degree)
    if not _verify(g, d, maps, j, centred=False, seed=f"{seed}/full"):
        raise InvariantError(f"lifted polynomial failed the exact check (d={d})")
    return g


def graph_numerator(g: WeightedGraph) -> tuple[ElemPoly, int, int]:
    """(simplest-form numerator in the A basis, k, X-degree) for an auxiliary graph."""
    d = g.d
    m = g.max_weight
    maps = [tuple(m - w for w in h.weights) for h in cosets(g)]
    j = delta_power(d, maps, cap=m)
    poly = symmetric_to_elem(d, maps, j)
    degree = 2 * sum(maps[0]) - d * (d - 1) * j
    c = poly.content()
    if elem_leading_partition(poly)[1] < 0:
        c = -c
    poly = ElemPoly(d, {e: v // c for e, v in poly.terms.items()})
    return poly, m - j, degree


def discriminant(d: int) -> ElemPoly:
    return symmetric_to_elem(d, [(1,) * (d * (d - 1) // 2)], 0)
