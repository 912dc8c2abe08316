import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from clusterlens.errors import InputError
from clusterlens.graphs import WeightedGraph, is_auxiliary
from clusterlens.oracle import (
    ValMatrix,
    auxiliary_graph,
    cluster_from_valmatrix,
    random_picture,
    random_split_poly,
    roots_for_picture,
    structured_corpus,
    tropical_attainers,
    tropical_ord,
    valmatrix_from_roots,
)
from clusterlens.recover import DepthProfile, assemble, picture_from_valuation
from clusterlens.valfield import ValuedContext

P5, P7 = ValuedContext(5), ValuedContext(7)


def clusterpic1(p=5):
    """Valuations of +-sqrt(p), 1 +- p, -1 +- p (irrational roots, so matrix mode)."""
    twins = {(0, 1): F(1, 2), (2, 3): F(1), (4, 5): F(1)}
    return ValMatrix.from_function(6, lambda i, j: twins.get((i, j), F(0)))


def example_2_3(b=1, c=2, d=0):
    """Twin {x3, x4} at c + d and triple {x1, x2, x5} at b + d inside a top cluster at d."""
    def val(i, j):
        if {i, j} == {2, 3}:
            return F(c + d)
        if {i, j} <= {0, 1, 4}:
            return F(b + d)
        return F(d)
    return ValMatrix.from_function(5, val)


def edges(d, spec):
    return WeightedGraph.from_edges(d, {(i - 1, j - 1): w for (i, j), w in spec.items()})


@st.composite
def pictures(draw, max_d=6):
    d = draw(st.integers(2, max_d))
    seed = draw(st.integers(0, 10**6))
    return random_picture(d, random.Random(seed), max_children=d, top_range=(-2, 2))


def matrix_of(pic):
    leaf_depth = {}

    def walk(node, depth_of):
        for c in node.children:
            if hasattr(c, "children"):
                walk(c, depth_of)
        for a in node.leaves():
            for b in node.leaves():
                if a < b and (a, b) not in depth_of:
                    depth_of[(a, b)] = node.depth

    # deepest clusters first, so each pair keeps its least common ancestor's depth
    walk(pic.root, leaf_depth)
    return ValMatrix.from_function(pic.degree, lambda i, j: leaf_depth[(i + 1, j + 1)])


def test_valmatrix_from_roots_examples():
    assert valmatrix_from_roots([0, 5, 10], P5).values == (1, 1, 1)
    m = valmatrix_from_roots([0, 1, 5], P5)
    assert (m(0, 1), m(0, 2), m(1, 2)) == (0, 1, 0)
    m = valmatrix_from_roots([0, 5, 5 + 125, 1], P5)
    assert (m(0, 1), m(0, 2), m(1, 2)) == (1, 1, 3)
    assert (m(0, 3), m(1, 3), m(2, 3)) == (0, 0, 0)
    assert m.levels() == [3, 1, 0]


def test_valmatrix_rejects_duplicate_roots():
    with pytest.raises(InputError):
        valmatrix_from_roots([1, 2, 1], P5)


def test_clusterpic1_matrix():
    pic, prof = cluster_from_valmatrix(clusterpic1())
    assert prof == DepthProfile((1, F(1, 2), 0), (2, 1, 12))
    assert pic.ascii() == "((r r)_1 (r r)_1 (r r)_{1/2})_0"


def test_trivial_pictures():
    pic, prof = cluster_from_valmatrix(ValMatrix(4, (F(3, 2),) * 6))
    assert pic.ascii() == "(r r r r)_{3/2}" and prof.mult == (6,)
    pic, _ = cluster_from_valmatrix(ValMatrix(2, (F(-7),)))
    assert pic.ascii() == "(r r)_{-7}"


def test_non_ultrametric_rejected():
    m = ValMatrix(3, (F(1), F(0), F(2)))
    assert not m.is_ultrametric()
    with pytest.raises(InputError):
        cluster_from_valmatrix(m)


def test_auxiliary_graphs_of_example_2_3():
    m = example_2_3()
    assert auxiliary_graph(m, 0) == WeightedGraph.empty(5)
    assert auxiliary_graph(m, 1) == edges(5, {(3, 4): 1})
    assert auxiliary_graph(m, 2) == edges(5, {(1, 2): 1, (1, 5): 1, (2, 5): 1, (3, 4): 2})
    g3 = auxiliary_graph(m, 3)
    assert g3.is_complete()
    assert g3 == WeightedGraph.from_edges(5, {(i, j): 3 if (i, j) == (2, 3) else 2 if {i, j} <= {0, 1, 4} else 1
                                              for j in range(5) for i in range(j)})
    with pytest.raises(ValueError):
        auxiliary_graph(m, 4)


def test_auxiliary_graph_all_equal():
    assert auxiliary_graph(ValMatrix(3, (F(2),) * 3), 1) == WeightedGraph.complete(3)


def test_tropical_examples():
    assert tropical_ord(WeightedGraph.complete(2), ValMatrix(2, (F(5, 3),))) == F(-10, 3)
    assert tropical_ord(WeightedGraph.empty(4), ValMatrix(4, (F(1),) * 6)) == 0
    m = clusterpic1()
    depths, mult = (F(1), F(1, 2), F(0)), (2, 1, 12)
    for n in range(1, 4):
        expected = -2 * sum(e * (n + 1 - l) * t for l, (e, t) in enumerate(zip(mult[:n], depths[:n]), start=1))
        assert tropical_ord(auxiliary_graph(m, n), m) == expected
        assert tropical_attainers(auxiliary_graph(m, n), m) == 1


@given(pictures())
def test_bottom_up_matches_top_down(pic):
    m = matrix_of(pic)
    assert m.is_ultrametric()
    got, prof = cluster_from_valmatrix(m)
    assert got == pic == picture_from_valuation(m.d, m)
    k = prof.k
    assert auxiliary_graph(m, k).is_complete()
    assert assemble(auxiliary_graph(m, k), prof) == pic
    for n in range(k + 1):
        g = auxiliary_graph(m, n)
        assert g.is_cluster_union()
        if n:
            assert is_auxiliary(g)


@given(pictures(max_d=5), st.sampled_from([5, 7]), st.integers(0, 1000))
def test_roots_realise_picture(pic, p, seed):
    if max(len(c.children) for c in pic.clusters()) > p:
        return
    roots = roots_for_picture(pic, p, random.Random(seed))
    assert cluster_from_valmatrix(valmatrix_from_roots(roots, ValuedContext(p)))[0] == pic


@given(pictures())
def test_valmatrix_text_round_trip(pic):
    m = matrix_of(pic)
    assert ValMatrix.from_text(m.to_text()) == m


def test_valmatrix_text_format():
    m = valmatrix_from_roots([0, 1, 5], P5)
    assert m.to_text() == "3\n1 2 0\n1 3 1\n2 3 0\n"
    with pytest.raises(InputError):
        ValMatrix.from_text("3\n1 2 0\n")


def test_random_split_poly_examples():
    f, m = random_split_poly(3, P5, 1)
    assert f.d == 3 and f.disc != 0
    assert m.is_ultrametric()
    f2, m2 = random_split_poly(3, P5, 1)
    assert (f2.a, f2.ord_cf, m2) == (f.a, f.ord_cf, m)


def test_random_split_poly_ultrametric_over_100_seeds():
    for seed in range(100):
        f, m = random_split_poly(5, P7, seed)
        assert m.is_ultrametric()
        assert f.d == 5


def test_structured_corpus_covers_shapes():
    shapes = {g for g, *_ in structured_corpus(4, primes=(5,))}
    # 11 classes minus the 5 non-complete ones: edge, two edges, triangle, 2-edge + 1-edge, (2,1,1) triangle
    assert len(shapes) == 6
