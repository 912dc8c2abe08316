import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from clusterlens.errors import InputError, SeparabilityError
from clusterlens.evaluator import (
    CacheStore,
    MonicInput,
    discriminant_poly,
    ord_J,
    ord_J_direct,
    precompute,
    sylvester_discriminant,
)
from clusterlens.graphs import WeightedGraph, candidate_set, canonical_form, cosets, enumerate_auxiliary
from clusterlens.oracle import poly_from_roots
from clusterlens.sympoly import ElemPoly
from clusterlens.valfield import INF, ValuedContext, ord_p

P5 = ValuedContext(5)
EDGE3 = WeightedGraph.from_edges(3, {(0, 1): 1})
K3 = WeightedGraph.complete(3)
TRI211 = WeightedGraph.from_edges(3, {(0, 1): 2, (0, 2): 1, (1, 2): 1})


def ord_J_from_roots(g, roots, ctx):
    total = sum(
        1 / Fraction(sympy.prod([(roots[i] - roots[j]) ** (2 * w) for (i, j), w in h.edges().items()]))
        for h in cosets(g)
    )
    return INF if total == 0 else ord_p(total, ctx)


def test_ord_J_examples(store):
    f = poly_from_roots([0, 5, 10], P5)
    assert f.disc == 4 * 5**6
    assert ord_J(store.get_or_compute(K3), f) == -6
    assert ord_J(store.get_or_compute(EDGE3), f) == -2


def test_complete_graph_gives_minus_ord_disc(store):
    rng = random.Random(1)
    for d in (2, 3, 4):
        inv = store.get_or_compute(WeightedGraph.complete(d))
        for _ in range(5):
            f = poly_from_roots(rng.sample(range(-50, 50), d), P5)
            assert ord_J(inv, f) == -f.ord_disc


def test_invariant_examples(store):
    k3 = store.get_or_compute(K3)
    assert (k3.g, k3.k) == (ElemPoly.const(3), 1)
    h, g = store.get_or_compute(EDGE3), store.get_or_compute(TRI211)
    assert g.g == h.g and g.k == 2


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7])
def test_discriminant_matches_sympy_and_sylvester(d):
    rng = random.Random(d)
    x = sympy.Symbol("x")
    for _ in range(4):
        a = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(d)]
        expected = sympy.discriminant(x**d + sum(sympy.Rational(c.numerator, c.denominator) * x**i
                                                 for i, c in enumerate(a)), x)
        assert sylvester_discriminant(a) == Fraction(str(expected))
        if expected != 0:
            assert MonicInput(P5, d, tuple(a), 0).disc == Fraction(str(expected))


def test_discriminant_poly_cached():
    assert discriminant_poly(3) is discriminant_poly(3)


def test_separability_error():
    with pytest.raises(SeparabilityError):
        MonicInput(P5, 2, (1, 2), 0)       # (x + 1)^2
    with pytest.raises(InputError):
        MonicInput.parse(P5, "1; 2, 1")


def test_parse_and_from_coeffs_agree():
    f = MonicInput.parse(P5, "10; -8, 3/5, 4")
    g = MonicInput.from_coeffs(P5, [10, -80, 6, 40])
    assert f.a == g.a == (4, Fraction(3, 5), -8)
    assert f.ord_cf == g.ord_cf == 1


@pytest.mark.parametrize("bad", ["1 -8, 3", "0; 1, 2", "1;", "1; x, 2"])
def test_parse_rejects(bad):
    with pytest.raises(InputError):
        MonicInput.parse(P5, bad)


@pytest.mark.parametrize("d", [3, 4])
def test_coefficient_path_matches_root_path_exhaustively(d, store):
    rng = random.Random(d)
    for trial in range(4):
        p = (3, 5, 7, 11)[trial]
        ctx = ValuedContext(p)
        roots = [rng.randint(-2, 2) * p ** rng.randint(0, 2) + rng.randint(0, 1) * p**3 for _ in range(d)]
        if len(set(roots)) < d:
            continue
        f = poly_from_roots(roots, ctx)
        for g in enumerate_auxiliary(d):
            inv = store.get_or_compute(g)
            assert ord_J(inv, f) == ord_J_from_roots(g, roots, ctx) == ord_J_direct(inv, f)


def test_coefficient_path_matches_root_path_d5_candidates(store):
    rng = random.Random(55)
    ctx = ValuedContext(7)
    g = WeightedGraph.from_edges(5, {(3, 4): 1})
    graphs = [WeightedGraph.empty(5)] + [g]
    for h in graphs:
        for cand in candidate_set(h):
            inv = store.get_or_compute(cand)
            for _ in range(2):
                roots = rng.sample([0, 1, 7, 8, 49, 50, 14, -7, 343], 5)
                f = poly_from_roots(roots, ctx)
                assert ord_J(inv, f) == ord_J_from_roots(cand, roots, ctx) == ord_J_direct(inv, f)


@given(roots=st.lists(st.integers(-40, 40), min_size=3, max_size=3, unique=True), shift=st.integers(-30, 30),
       p=st.sampled_from([2, 3, 5]))
def test_ord_J_is_translation_invariant(roots, shift, p, store):
    ctx = ValuedContext(p)
    for g in enumerate_auxiliary(3):
        inv = store.get_or_compute(g)
        f = poly_from_roots(roots, ctx)
        f2 = poly_from_roots([r + shift for r in roots], ctx)
        assert ord_J(inv, f) == ord_J(inv, f2) == ord_J_from_roots(g, roots, ctx)


def test_cache_persists_byte_identical(tmp_path):
    store = CacheStore(tmp_path)
    inv = store.get_or_compute(EDGE3)
    key = inv.key
    first = store.file_bytes(key)
    assert store.computed == 1
    again = store.get_or_compute(EDGE3.relabel((2, 0, 1)))
    assert again is inv and store.computed == 1
    fresh = CacheStore(tmp_path)
    assert fresh.get_or_compute(EDGE3) == inv
    assert fresh.computed == 0
    fresh.put(inv)
    assert fresh.file_bytes(key) == first
    record = json.loads(first)
    assert record["format_version"] == 1 and record["k"] == 1


def test_version_mismatch_forces_recompute(tmp_path):
    store = CacheStore(tmp_path)
    inv = store.get_or_compute(EDGE3)
    path = store._path(inv.key)
    record = json.loads(path.read_bytes())
    record["format_version"] = 0
    path.write_text(json.dumps(record))
    fresh = CacheStore(tmp_path)
    assert fresh.get_or_compute(EDGE3) == inv
    assert fresh.computed == 1
    assert json.loads(path.read_bytes())["format_version"] == 1


def test_memory_only_cache():
    store = CacheStore()
    assert store.get_or_compute(K3).g == ElemPoly.const(3)
    assert store.directory is None


def test_cache_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CLUSTERLENS_CACHE", str(tmp_path))
    assert CacheStore.from_env().directory == tmp_path
    assert CacheStore.from_env(tmp_path / "x").directory == tmp_path / "x"


def test_precompute_d3(tmp_path):
    store = CacheStore(tmp_path)
    invs = precompute(store, 3)
    assert {canonical_form(i.graph) for i in invs} == {canonical_form(g) for g in enumerate_auxiliary(3)}
    assert (tmp_path / "d3_discriminant.json").exists()
    assert len(list(tmp_path.glob("d3_*.json"))) == 4
