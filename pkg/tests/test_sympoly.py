import itertools
import random

import pytest
import sympy

from clusterlens.errors import InvariantError
from clusterlens.graphs import WeightedGraph, enumerate_auxiliary
from clusterlens.sympoly import (
    ElemPoly,
    MultiPoly,
    diff_product,
    discriminant,
    discriminant_x,
    elementary_values,
    family,
    from_elementary,
    graph_invariant,
    numerator,
    to_elementary,
    to_simplest_form,
)


def tri(w12, w13, w23):
    return WeightedGraph.from_edges(3, {(0, 1): w12, (0, 2): w13, (1, 2): w23})


EDGE3, K3, TRI211 = tri(1, 0, 0), tri(1, 1, 1), tri(2, 1, 1)


def X(d):
    return [MultiPoly.var(d, i) for i in range(d)]


def as_sympy(poly, names):
    syms = sympy.symbols(names)
    return sympy.Add(*[c * sympy.Mul(*[s**e for s, e in zip(syms, exps)]) for exps, c in poly.terms.items()]), syms


def test_diff_product_binomial_square():
    x1, x2 = X(2)
    assert diff_product(2, {(0, 1): 1}) == x1 * x1 - x1 * x2 - x1 * x2 + x2 * x2


def test_diff_product_empty():
    assert diff_product(3, {(0, 1): 0, (0, 2): 0, (1, 2): 0}) == MultiPoly.const(3)


def test_diff_product_rejects_negative():
    with pytest.raises(ValueError):
        diff_product(2, {(0, 1): -1})


def test_cubic_discriminant_classical_formula():
    a0, a1, a2 = sympy.symbols("a0 a1 a2")
    x = sympy.Symbol("x")
    classical = a1**2 * a2**2 - 4 * a1**3 - 4 * a0 * a2**3 + 18 * a0 * a1 * a2 - 27 * a0**2
    assert sympy.expand(sympy.discriminant(x**3 + a2 * x**2 + a1 * x + a0, x) - classical) == 0
    g = to_elementary(discriminant_x(3), 3)
    expr, _ = as_sympy(g, "a0 a1 a2")
    assert sympy.expand(expr - classical) == 0


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_discriminant_matches_sympy(d):
    names = " ".join(f"a{i}" for i in range(d))
    expr, syms = as_sympy(discriminant(d), names)
    x = sympy.Symbol("x")
    f = x**d + sum(s * x**i for i, s in enumerate(syms))
    assert sympy.expand(expr - sympy.discriminant(f, x)) == 0


def test_numerator_of_complete_graph_is_one():
    for d in (2, 3, 4):
        assert numerator(WeightedGraph.complete(d)) == (MultiPoly.const(d), 1)


def test_numerator_single_edge_d3():
    x1, x2, x3 = X(3)
    sq = lambda p: p * p
    expected = (sq(x3 - x2) * sq(x3 - x1) + sq(x3 - x2) * sq(x2 - x1) + sq(x1 - x2) * sq(x3 - x1))
    assert numerator(EDGE3) == (expected, 1)


def test_numerator_triangle_211_shares_edge_numerator():
    num_k, pre_k = numerator(TRI211)
    assert pre_k == 2
    assert num_k == numerator(EDGE3)[0]


def test_to_simplest_form_examples():
    one = MultiPoly.const(3)
    assert to_simplest_form(discriminant_x(3), 1, 3) == (one, 0)
    num_h = numerator(EDGE3)[0]
    assert to_simplest_form(num_h, 1, 3) == (num_h, 1)
    assert to_simplest_form(numerator(TRI211)[0], 2, 3) == (num_h, 2)


def test_to_simplest_form_strips_content_and_sign():
    num_h = numerator(EDGE3)[0]
    scaled = num_h * MultiPoly.const(3, -6)
    assert to_simplest_form(scaled, 1, 3) == (num_h, 1)


def test_non_symmetric_input_is_rejected():
    x1, _, _ = X(3)
    with pytest.raises(InvariantError):
        to_simplest_form(x1, 1, 3)
    with pytest.raises(InvariantError):
        to_elementary(x1, 3)


def test_to_elementary_of_one():
    assert to_elementary(MultiPoly.const(4), 4) == ElemPoly.const(4)


def test_edge_invariant_on_depressed_cubics():
    g = graph_invariant(EDGE3).g
    a, b = sympy.symbols("a b")
    expr, (s0, s1, s2) = as_sympy(g, "a0 a1 a2")
    at_depressed = sympy.expand(expr.subs({s2: 0, s1: a, s0: b}))
    assert at_depressed in (9 * a**2, -9 * a**2)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_numerators_symmetric_and_nonzero(d):
    rng = random.Random(d)
    for g in enumerate_auxiliary(d):
        num, _ = numerator(g)
        assert num
        for perm in itertools.permutations(range(d)):
            assert num.permute(perm) == num
        # every summand is a square of a real polynomial, so N > 0 off the diagonals
        for _ in range(5):
            assert num.evaluate(rng.sample(range(-30, 30), d)) > 0


@pytest.mark.parametrize("d", [2, 3])
def test_even_monomials_positive_small_degree(d):
    for g in enumerate_auxiliary(d):
        num, _ = numerator(g)
        assert all(c > 0 for e, c in num.terms.items() if all(x % 2 == 0 for x in e))


def test_even_monomial_with_negative_coefficient_d4():
    """The all-even positivity witness breaks down at d = 4 (checked with sympy)."""
    g = WeightedGraph.from_edges(4, {(2, 3): 1})
    num, m = numerator(g)
    assert num.terms[(0, 2, 4, 4)] == -1
    x = sympy.symbols("x1:5")
    from clusterlens.graphs import cosets, pairs

    expr = sum(sympy.prod([(x[i] - x[j]) ** (2 * (m - w)) for (i, j), w in zip(pairs(4), h.weights)])
               for h in cosets(g))
    assert sympy.Poly(sympy.expand(expr), *x).coeff_monomial(x[1] ** 2 * x[2] ** 4 * x[3] ** 4) == -1


def test_d5_numerators_symmetric_under_sampled_permutations():
    rng = random.Random(5)
    graphs = [g for g in enumerate_auxiliary(5) if g.max_weight <= 2][:4]
    for g in graphs:
        num, _ = numerator(g)
        for _ in range(6):
            assert num.permute(rng.sample(range(5), 5)) == num


@pytest.mark.parametrize("d", [2, 3, 4])
def test_round_trip_every_invariant(d, store):
    for g in enumerate_auxiliary(d):
        inv = store.get_or_compute(g)
        num, pre_k = numerator(g)
        simple, k = to_simplest_form(num, pre_k, d)
        assert inv.k == k
        assert from_elementary(inv.g, d) == simple
        assert inv.num_degree == simple.total_degree()


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_degree_bound(d, store):
    for g in enumerate_auxiliary(d):
        assert store.get_or_compute(g).num_degree <= d * d * (d - 1) ** 2 // 4


def test_product_identity_d3(store):
    inv_h, inv_g = store.get_or_compute(EDGE3), store.get_or_compute(TRI211)
    assert inv_g.g == inv_h.g
    assert inv_g.k == inv_h.k + 1
    k3 = store.get_or_compute(K3)
    assert (k3.g, k3.k) == (ElemPoly.const(3), 1)


def test_invariant_matches_roots():
    """J_G(f) computed from root differences equals g(a) / Delta(a)^k."""
    from fractions import Fraction

    from clusterlens.graphs import cosets

    rng = random.Random(7)
    for d in (3, 4):
        for g in enumerate_auxiliary(d):
            inv = graph_invariant(g)
            roots = rng.sample(range(-20, 20), d)
            a = elementary_values(roots)
            disc = discriminant(d).evaluate(a)
            direct = sum(
                Fraction(1, sympy.prod([(roots[i] - roots[j]) ** (2 * w) for (i, j), w in h.edges().items()]))
                for h in cosets(g)
            )
            assert direct == Fraction(inv.g.evaluate(a)) / Fraction(disc) ** inv.k


def test_family_d3():
    fam = family(3)
    assert fam.t == 3
    assert discriminant(3) in fam.members
