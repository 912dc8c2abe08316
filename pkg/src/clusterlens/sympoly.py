"""Sparse integer polynomials, the graph numerators, and elementary-basis reduction.

Two polynomial flavours share one implementation:

* :class:`MultiPoly` - polynomials in the roots ``X_1..X_d``;
* :class:`ElemPoly` - polynomials in ``A_0..A_{d-1}``, where
  ``A_i = (-1)^(d-i) e_{d-i}(X)`` is the i-th coefficient of the monic
  polynomial with roots X.  Evaluating an ElemPoly at the coefficients of a
  monic f therefore evaluates the corresponding symmetric function at its roots.

Exponent vectors are tuples; coefficients are Python ints.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce

from .errors import InvariantError
from .graphs import WeightedGraph, check_degree, cosets, enumerate_auxiliary, pairs


class SparsePoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], int] = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    e = tuple(e)
                    s = self.terms.get(e, 0) + c
                    if s:
                        self.terms[e] = s
                    else:
                        self.terms.pop(e, None)

    @classmethod
    def const(cls, nvars, c=1):
        return cls(nvars, {(0,) * nvars: c} if c else None)

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def _new(self, terms):
        out = type(self).__new__(type(self))
        out.nvars = self.nvars
        out.terms = terms
        return out

    def copy(self):
        return self._new(dict(self.terms))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return type(self) is type(other) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.nvars, frozenset(self.terms.items())))

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def _iadd_terms(self, other_terms, scale=1):
        t = self.terms
        for e, c in other_terms.items():
            s = t.get(e, 0) + scale * c
            if s:
                t[e] = s
            else:
                t.pop(e, None)

    def __add__(self, other):
        out = self.copy()
        out._iadd_terms(other.terms)
        return out

    def __sub__(self, other):
        out = self.copy()
        out._iadd_terms(other.terms, -1)
        return out

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new({e: c * other for e, c in self.terms.items()} if other else {})
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.const(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def leading(self):
        """Lexicographically greatest (exponent, coefficient)."""
        e = max(self.terms)
        return e, self.terms[e]

    def content(self) -> int:
        return reduce(math.gcd, self.terms.values(), 0)

    def permute(self, perm):
        """Substitute X_i -> X_{perm[i]}."""
        out = {}
        n = self.nvars
        for e, c in self.terms.items():
            f = [0] * n
            for i, a in enumerate(e):
                f[perm[i]] = a
            out[tuple(f)] = c
        return self._new(out)

    def divexact(self, other):
        """Quotient if ``other`` divides self exactly (lex division), else None."""
        rem = dict(self.terms)
        le, lc = other.leading()
        q = {}
        while rem:
            e = max(rem)
            c = rem[e]
            if c % lc or any(a < b for a, b in zip(e, le)):
                return None
            qe = tuple(a - b for a, b in zip(e, le))
            qc = c // lc
            q[qe] = qc
            for oe, oc in other.terms.items():
                k = tuple(a + b for a, b in zip(qe, oe))
                s = rem.get(k, 0) - qc * oc
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return self._new(q)

    def evaluate(self, values):
        """Exact evaluation at a sequence of ints or Fractions."""
        powers = [dict() for _ in range(self.nvars)]
        total = 0
        for e, c in self.terms.items():
            term = c
            for i, a in enumerate(e):
                if a:
                    cache = powers[i]
                    v = cache.get(a)
                    if v is None:
                        v = cache[a] = values[i] ** a
                    term *= v
            total += term
        return total

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(0)"
        names = self._names()
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{names[i]}^{a}" if a > 1 else names[i] for i, a in enumerate(e) if a)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts).replace("+ -", "- ")

    def _names(self):
        return [f"v{i}" for i in range(self.nvars)]


class MultiPoly(SparsePoly):
    """Polynomial in the root variables X_1..X_d."""

    __slots__ = ()

    def _names(self):
        return [f"X{i + 1}" for i in range(self.nvars)]

    def is_symmetric(self) -> bool:
        d = self.nvars
        if d < 2:
            return True
        swap = (1, 0) + tuple(range(2, d))
        cycle = tuple((i + 1) % d for i in range(d))
        return self.permute(swap) == self and self.permute(cycle) == self


class ElemPoly(SparsePoly):
    """Polynomial in A_0..A_{d-1}, the non-leading coefficients of a monic polynomial."""

    __slots__ = ()

    def _names(self):
        return [f"A{i}" for i in range(self.nvars)]


# -- root-side constructions ------------------------------------------------

@lru_cache(maxsize=None)
def _binomial_square_terms(d, i, j, n):
    """Terms of (X_i - X_j)^n."""
    out = {}
    for a in range(n + 1):
        e = [0] * d
        e[i] = a
        e[j] = n - a
        out[tuple(e)] = math.comb(n, a) * (-1) ** (n - a)
    return out


def diff_product(d: int, expmap) -> MultiPoly:
    """Expand prod_{i<j} (X_i - X_j)^(2 * expmap[i,j]).

    ``expmap`` is a dict keyed by 0-based pairs or a tuple in colex pair order.
    """
    if not isinstance(expmap, dict):
        expmap = dict(zip(pairs(d), expmap))
    result = MultiPoly.const(d)
    for (i, j), k in sorted(expmap.items()):
        if k < 0:
            raise ValueError("exponents must be non-negative")
        if k:
            result = result * MultiPoly(d, _binomial_square_terms(d, min(i, j), max(i, j), 2 * k))
    return result


def numerator_exponents(g: WeightedGraph) -> tuple[int, list[tuple[int, ...]]]:
    """Return (m, [pairwise exponents of each coset summand over Delta^m])."""
    m = g.max_weight
    return m, [tuple(m - w for w in h.weights) for h in cosets(g)]


def numerator(g: WeightedGraph) -> tuple[MultiPoly, int]:
    """Numerator of J_G over Delta^m, with m the largest weight, as an X-polynomial."""
    d = g.d
    m = g.max_weight
    base = diff_product(d, tuple(m - w for w in g.weights))
    # each distinct image of the weight map is the base product with variables permuted
    images = {}
    for perm in itertools.permutations(range(d)):
        h = g.relabel(perm)
        images.setdefault(h, perm)
    total = MultiPoly(d)
    for perm in images.values():
        total._iadd_terms(base.permute(perm).terms)
    return total, m


def discriminant_x(d: int) -> MultiPoly:
    return diff_product(d, (1,) * (d * (d - 1) // 2))


# -- elementary basis ----------------------------------------------------------

@lru_cache(maxsize=None)
def _elementary_x(d: int, k: int) -> MultiPoly:
    terms = {}
    for idx in itertools.combinations(range(d), k):
        e = [0] * d
        for i in idx:
            e[i] = 1
        terms[tuple(e)] = 1
    return MultiPoly(d, terms)


def to_elementary(num: MultiPoly, d: int) -> ElemPoly:
    """Rewrite a symmetric X-polynomial in A_0..A_{d-1} (leading-term method).

    With lex order X_1 > ... > X_d the leading exponent lam of a symmetric
    polynomial is a partition; subtract c * e_1^(lam1-lam2) ... e_d^lamd and repeat.
    """
    rem = dict(num.terms)
    out = {}
    epow: dict = {}

    def e_power(k, a):
        key = (k, a)
        if key not in epow:
            epow[key] = _elementary_x(d, k) ** a
        return epow[key]

    while rem:
        lam = max(rem)
        c = rem[lam]
        if any(lam[i] < lam[i + 1] for i in range(d - 1)):
            raise InvariantError("to_elementary: input is not symmetric")
        mu = [lam[k - 1] - (lam[k] if k < d else 0) for k in range(1, d + 1)]
        prod = MultiPoly.const(d)
        for k, a in enumerate(mu, start=1):
            if a:
                prod = prod * e_power(k, a)
        for e, pc in prod.terms.items():
            s = rem.get(e, 0) - c * pc
            if s:
                rem[e] = s
            else:
                rem.pop(e, None)
        # e_k = (-1)^k A_{d-k}
        alpha = [0] * d
        sign = 1
        for k, a in enumerate(mu, start=1):
            alpha[d - k] = a
            if k % 2 and a % 2:
                sign = -sign
        out[tuple(alpha)] = sign * c
    return ElemPoly(d, out)


def from_elementary(g: ElemPoly, d: int) -> MultiPoly:
    """Substitute A_i = (-1)^(d-i) e_{d-i}(X) and expand."""
    gens = [_elementary_x(d, d - i) * ((-1) ** (d - i)) for i in range(d)]
    total = MultiPoly(d)
    for alpha, c in g.terms.items():
        term = MultiPoly.const(d, c)
        for i, a in enumerate(alpha):
            if a:
                term = term * gens[i] ** a
        total._iadd_terms(term.terms)
    return total


def elementary_values(roots) -> list:
    """[A_0, ..., A_{d-1}] for the monic polynomial with the given roots."""
    coeffs = [1]
    for r in roots:
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= r * c
        coeffs = nxt
    return coeffs[:-1]


def elem_leading_partition(g: ElemPoly) -> tuple[tuple[int, ...], int]:
    """Leading X-monomial (lex) and its coefficient of the symmetric function g represents."""
    d = g.nvars
    best = None
    for alpha, c in g.terms.items():
        mu = [alpha[d - k] for k in range(1, d + 1)]
        lam = tuple(itertools.accumulate(reversed(mu)))[::-1]
        sign = -1 if sum(k * a for k, a in enumerate(mu, start=1) if k % 2) % 2 else 1
        if best is None or lam > best[0]:
            best = (lam, sign * c)
    return best


def normalize_sign_content(num: MultiPoly) -> MultiPoly:
    c = num.content()
    if c == 0:
        return num
    if num.leading()[1] < 0:
        c = -c
    return num._new({e: v // c for e, v in num.terms.items()})


def to_simplest_form(num: MultiPoly, pre_k: int, d: int) -> tuple[MultiPoly, int]:
    """Cancel exact discriminant factors, then integer content, then fix the sign."""
    if not num:
        raise InvariantError("to_simplest_form: zero numerator")
    if not num.is_symmetric():
        raise InvariantError("to_simplest_form: numerator is not symmetric")
    k = pre_k
    if d >= 2:
        delta = discriminant_x(d)
        while k > 0:
            q = num.divexact(delta)
            if q is None:
                break
            num, k = q, k - 1
    return normalize_sign_content(num), k


def elem_simplest_form(g: ElemPoly, pre_k: int, delta: ElemPoly, probe=None) -> tuple[ElemPoly, int]:
    """Same normalisation as :func:`to_simplest_form`, carried out in the A basis.

    ``probe`` may be a callable returning False when the discriminant certainly
    does not divide g, to skip a doomed division attempt.
    """
    k = pre_k
    while k > 0 and (probe is None or probe(g)):
        q = g.divexact(delta)
        if q is None:
            break
        g, k = q, k - 1
    c = g.content()
    if elem_leading_partition(g)[1] < 0:
        c = -c
    return g._new({e: v // c for e, v in g.terms.items()}), k


# -- invariants and the family ---------------------------------------------------

@dataclass(frozen=True)
class GraphInvariant:
    graph: WeightedGraph       # canonical representative
    g: ElemPoly               # simplest-form numerator in the A basis
    k: int                    # J_G = g(A) / Delta^k
    num_degree: int           # total X-degree of the numerator

    @property
    def key(self):
        return (self.graph.d, self.graph.weights)

    @property
    def d(self):
        return self.graph.d

    @cached_property
    def depressed(self) -> ElemPoly:
        """g with A_{d-1} set to 0; enough to evaluate g after a translation."""
        last = self.graph.d - 1
        return ElemPoly(self.g.nvars, {e: c for e, c in self.g.terms.items() if e[last] == 0})


def graph_invariant(g: WeightedGraph, method: str = "auto") -> GraphInvariant:
    """Numerator, simplest form and A-basis form of J_G.

    ``method="expand"`` expands in the roots and uses the leading-term
    reduction; ``"interp"`` uses modular interpolation (see :mod:`.fastsym`),
    which never forms the X-polynomial.  ``"auto"`` expands for d <= 4.
    """
    from . import fastsym
    from .graphs import canonical_graph

    rep = canonical_graph(g)
    d = rep.d
    if method == "auto":
        method = "expand" if d <= 4 else "interp"
    if method == "expand":
        num, pre_k = numerator(rep)
        num, k = to_simplest_form(num, pre_k, d)
        elem = to_elementary(num, d)
        if from_elementary(elem, d) != num:
            raise InvariantError(f"round trip failed for {rep}")
        return GraphInvariant(rep, elem, k, num.total_degree())
    if method == "interp":
        elem, k, degree = fastsym.graph_numerator(rep)
        return GraphInvariant(rep, elem, k, degree)
    raise ValueError(f"unknown method {method!r}")


def discriminant(d: int, method: str = "auto") -> ElemPoly:
    """Delta = prod_{i<j} (X_i - X_j)^2 in the A basis."""
    from . import fastsym

    if method == "auto":
        method = "expand" if d <= 4 else "interp"
    if method == "expand":
        return to_elementary(discriminant_x(d), d)
    return fastsym.discriminant(d)


@dataclass(frozen=True)
class Family:
    d: int
    members: frozenset   # of ElemPoly, Delta included
    invariants: tuple    # GraphInvariant per auxiliary graph

    @property
    def t(self) -> int:
        return len(self.members)

    @property
    def distinct_functions(self) -> int:
        """Distinct rational functions J_G, counting J = 1/Delta as Delta itself."""
        one = ElemPoly.const(self.d)
        return 1 + len({(inv.g, inv.k) for inv in self.invariants if (inv.g, inv.k) != (one, 1)})


def family(d: int, get_invariant=None, max_degree: int = 8) -> Family:
    """Delta together with every distinct simplest-form numerator over G_d."""
    check_degree(d, max_degree)
    get_invariant = get_invariant or graph_invariant
    invs = tuple(get_invariant(g) for g in enumerate_auxiliary(d, max_degree))
    members = {discriminant(d)} | {inv.g for inv in invs}
    return Family(d, frozenset(members), invs)


def digest(poly: SparsePoly) -> str:
    import hashlib

    h = hashlib.sha256()
    for e, c in sorted(poly.terms.items()):
        h.update(f"{','.join(map(str, e))}:{c};".encode())
    return h.hexdigest()[:16]


def depress_shift(a) -> list:
    """Coefficients of f(x - a_{d-1}/d) for monic f = x^d + sum a_i x^i."""
    d = len(a)
    coeffs = list(a) + [1]
    s = Fraction(-coeffs[d - 1], d)
    out = []
    for k in range(d):
        out.append(sum(coeffs[i] * math.comb(i, k) * s ** (i - k) for i in range(k, d + 1)))
    return out
