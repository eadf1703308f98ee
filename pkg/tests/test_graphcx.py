from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfinv.barcx import BarComplex
from hopfinv.chainalg import homology_rank, tensor_d
from hopfinv.graphcx import (
    EilComplex,
    GraphComplex,
    GraphSpace,
    InvalidTree,
    Tree,
    canonicalize,
    normalize,
    quotient_reduce,
    relation_space,
)
from hopfinv.lincomb import LinComb
from hopfinv.model import UnsupportedModel, free_model, sphere_model, wedge_model
from hopfinv.parse import ParseError

from support import arnold_table, corpus, random_tree, random_word, swap

MODELS = corpus()
seeds = st.integers(0, 2**32 - 1)
model_index = st.sampled_from(range(len(MODELS)))


@pytest.fixture
def w222():
    return EilComplex(wedge_model((2, 2, 2)))


def test_arnold_relation_vanishes_only_in_the_quotient(w222):
    cx = w222
    cycle = [(0, 1), (1, 2), (2, 0)]
    trees = [cx.tree(["x", "y", "z"], [e for e in cycle if e != drop]) for drop in cycle]
    total = trees[0] + trees[1] + trees[2]
    assert cx.is_zero(total)
    assert not cx.is_zero(trees[0])
    assert not GraphComplex(cx.model).is_zero(total)


def test_reversing_an_edge_changes_sign(w222):
    assert w222.tree(["x", "y"], [(0, 1)]) == -w222.tree(["x", "y"], [(1, 0)])


def test_trees_with_odd_symmetry_vanish():
    assert EilComplex(wedge_model((2,))).tree(["x", "x"], [(0, 1)])
    assert not EilComplex(wedge_model((3,))).tree(["x", "x"], [(0, 1)])


def test_canonicalize_sign_and_form():
    sign, t = canonicalize((0, 1), ((1, 0),), (1, 1))
    assert sign == -1 and t == Tree((0, 1), ((0, 1),))
    # listing the same two odd vertices in the other order costs a Koszul sign
    swapped_sign, swapped = canonicalize((1, 0), ((0, 1),), (1, 1))
    assert (swapped_sign, swapped) == (-sign, t)


def test_normalize_returns_canonical_tree():
    m = wedge_model((2, 2))
    # vertex swap and edge reversal each contribute -1
    t, c = normalize(Tree((1, 0), ((0, 1),)), 3, m)
    assert (t, c) == (Tree((0, 1), ((0, 1),)), 3)


@pytest.mark.parametrize(
    "edges",
    [[(0, 1), (1, 0)], [(0, 1)], [(0, 1), (1, 2), (2, 0)], [(0, 3), (1, 2)], [(0, 0), (1, 2)]],
)
def test_invalid_trees(w222, edges):
    with pytest.raises(InvalidTree):
        w222.tree(["x", "y", "z"], edges)


def test_labels_need_positive_degree(w222):
    with pytest.raises((ParseError, KeyError, ValueError)):
        w222.tree(["x", "q"], [(0, 1)])


def test_tree_text_round_trip(w222):
    text = "-2*tree{v1:x} + tree{v1:y, v2:x, v3:z; v1->v2, v1->v3}"
    assert w222.format(w222.parse(text)) == text
    with pytest.raises(ParseError):
        w222.parse("tree{v1:x, v2:y; v1->v3}")


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_multilinear_quotient_has_factorial_dimension(n):
    w = wedge_model([2] * n)
    for oriented in (True, False):
        rel = GraphSpace(w, oriented=oriented).relations(tuple(range(n)))
        assert len(rel.trees) - rel.rank == math.factorial(n - 1)


def test_relation_space_example():
    rel = relation_space(wedge_model((2, 4)), 2, 6)
    assert (rel.free_dim, rel.rank, rel.quotient_dim) == (2, 1, 1)
    assert len(relation_space(wedge_model((2, 2)), 2, 4).basis) == 4


def test_quotient_reduce_detects_relations():
    w = wedge_model((2, 2, 2))
    rel = relation_space(w, 3, 6)
    cx = GraphComplex(w)
    cycle = [(0, 1), (1, 2), (2, 0)]
    arnold = LinComb()
    for drop in cycle:
        arnold.add_scaled(cx.tree(["x", "y", "z"], [e for e in cycle if e != drop]))
    assert quotient_reduce(arnold, rel) == {}
    assert quotient_reduce(cx.tree(["x", "y", "z"], [(0, 1), (1, 2)]), rel) != {}
    with pytest.raises(ValueError):
        quotient_reduce(cx.tree(["x", "y"], [(0, 1)]), rel)


def test_shuffles_map_into_the_relations():
    m = wedge_model((2, 3, 3))
    bar, cx = BarComplex(m), EilComplex(m)
    assert cx.is_zero(cx.phi(bar.shuffle((0, 1), (2,))))
    assert not cx.is_zero(cx.phi(bar.parse("x|y")))


def test_phi_sends_words_to_paths():
    m = wedge_model((2, 2, 2))
    bar, cx = BarComplex(m), EilComplex(m)
    path = cx.phi(bar.parse("x|y|z"))
    (t, c), = path.items()
    assert sorted(t.edges) != [] and len(t.edges) == 2
    assert cx.reduce(path) == cx.reduce(cx.tree(["x", "y", "z"], [(0, 1), (1, 2)]))


def test_cobracket_of_an_edge():
    cx = EilComplex(wedge_model((2, 3)))
    x, y = Tree((0,), ()), Tree((1,), ())
    assert cx.cobracket(cx.tree(["x", "y"], [(0, 1)])) == LinComb({(x, y): 1, (y, x): -1})


def test_graph_quotient_homology_of_wedges_and_spheres():
    eil = EilComplex(wedge_model((2, 2)))
    # free Lie algebra on two classes of degree 1: 2, 3, 2, 3 by total degree
    assert [homology_rank(eil, t) for t in range(1, 5)] == [2, 3, 2, 3]
    assert [homology_rank(EilComplex(sphere_model(3, truncation=10)), t) for t in range(1, 7)] == [0, 1, 0, 0, 0, 0]


def test_homotopy_needs_a_free_model():
    with pytest.raises(UnsupportedModel):
        EilComplex(wedge_model((2, 2))).homotopy_h(LinComb())


@settings(max_examples=50, deadline=None)
@given(model_index, seeds)
def test_sign_suite(which, seed):
    m = MODELS[which]
    rng = random.Random(seed)
    bar, cx = BarComplex(m), EilComplex(m)
    word = LinComb.single(random_word(rng, m, 4))
    assert cx.phi(bar.d(word)) == cx.d(cx.phi(word))
    c = random_tree(rng, cx, rng.randint(1, 4))
    assert not cx.d(cx.d(c))
    cb = cx.cobracket(c)
    assert cx.tensor_reduce(cx.cobracket(cx.d(c))) == cx.tensor_reduce(tensor_d(cx, cb))
    assert not cx.tensor_reduce(cb + swap(cx, cb))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_relations_are_preserved(seed):
    rng = random.Random(seed)
    m = arnold_table()
    cx = EilComplex(m)
    labels = tuple(sorted(rng.randrange(m.dim) for _ in range(rng.randint(2, 4))))
    for row in cx.space.relation_rows(labels):
        assert cx.is_zero(row)
        assert cx.is_zero(cx.d(row))
        assert not cx.tensor_reduce(cx.cobracket(row))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_oriented_and_unoriented_quotients_agree(seed):
    rng = random.Random(seed)
    m = wedge_model((2, 3, 2))
    labels = tuple(sorted(rng.randrange(3) for _ in range(rng.randint(1, 4))))
    a = GraphSpace(m, oriented=True).relations(labels)
    b = GraphSpace(m, oriented=False).relations(labels)
    assert len(a.trees) - a.rank == len(b.trees) - b.rank


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_homotopy_inverts_contraction_modulo_higher_weight(seed):
    rng = random.Random(seed)
    m = free_model("F", [("a", 2), ("b", 3), ("c", 4)], {"c": "a*b"}, 10)
    cx = EilComplex(m)
    c = random_tree(rng, cx, rng.randint(1, 3))
    if not c:
        return
    (t, _), = c.items()
    if (t.weight == 1 and cx.word_length(t) == 1) or sum(m.degrees[a] for a in t.labels) > m.truncation:
        return
    assert cx.is_zero(cx.d_external(cx.homotopy_h(c)) + cx.homotopy_h(cx.d_external(c)) - c)
