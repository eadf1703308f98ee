from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfinv.chainalg import (
    NOT_EXACT,
    Echelon,
    PieceTooLarge,
    SparseMatrix,
    default_cap,
    homology_basis,
    homology_rank,
    rank_fraction_free,
    solve_preimage,
)
from hopfinv.barcx import BarComplex
from hopfinv.lincomb import LinComb, fmt_rational, koszul_sign
from hopfinv.model import sphere_model, wedge_model

entries = st.integers(-3, 3).map(Fraction) | st.fractions(min_value=-2, max_value=2, max_denominator=4)


@st.composite
def matrices(draw, max_side=6):
    r = draw(st.integers(1, max_side))
    c = draw(st.integers(1, max_side))
    dense = draw(st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))
    return dense, SparseMatrix.from_rows([{j: v for j, v in enumerate(row) if v} for row in dense], c)


def test_lincomb_drops_zero_terms():
    a = LinComb({"x": 1, "y": 2})
    b = LinComb({"x": 1})
    assert a - b == LinComb({"y": 2})
    assert a - a == 0
    assert (2 * a)["y"] == 4


@pytest.mark.parametrize(
    "perm, degrees, sign",
    [
        ((1, 0), (1, 1), -1),
        ((1, 0), (2, 1), 1),
        ((2, 1, 0), (1, 1, 1), -1),
        ((1, 2, 0), (1, 1, 1), 1),
    ],
)
def test_koszul_sign_table(perm, degrees, sign):
    assert koszul_sign(perm, degrees) == sign


def test_koszul_sign_rejects_non_permutations():
    with pytest.raises(ValueError):
        koszul_sign((0, 0), (1, 1))


@given(st.permutations(range(5)), st.permutations(range(5)), st.lists(st.integers(0, 5), min_size=5, max_size=5))
def test_koszul_sign_is_multiplicative(p, q, degrees):
    # apply p, then q to the result
    composed = [p[q[k]] for k in range(5)]
    moved = [degrees[i] for i in p]
    assert koszul_sign(composed, degrees) == koszul_sign(p, degrees) * koszul_sign(q, moved)


def test_fmt_rational():
    assert fmt_rational(Fraction(3, 1)) == "3"
    assert fmt_rational(Fraction(-3, 6)) == "-1/2"


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    dense, sparse = m
    expected = sympy.Matrix(dense).rank() if dense and dense[0] else 0
    assert sparse.rank() == expected
    assert rank_fraction_free(sparse.rows()) == expected
    assert len(sparse.row_echelon().pivots()) == expected


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_annihilated_and_complete(m):
    _, a = m
    ker = a.kernel()
    for v in ker:
        assert a.apply(v) == {}
    assert len(ker) == a.ncols - a.rank()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(entries, min_size=6, max_size=6))
def test_preimage_of_an_image(m, xs):
    _, a = m
    x = {j: xs[j] for j in range(a.ncols) if xs[j]}
    y = a.apply(x)
    sol = solve_preimage(a, y)
    assert sol is not NOT_EXACT
    assert a.apply(sol) == y


def test_preimage_reports_inexact_targets():
    a = SparseMatrix.from_rows([{0: 1}, {0: 1}], 1)
    assert solve_preimage(a, {0: 1, 1: 2}) is NOT_EXACT
    assert solve_preimage(a, {0: 1, 1: 1}) == {0: 1}


def test_echelon_reduces_dependent_rows_to_zero():
    e = Echelon()
    assert e.add({0: 1, 1: 2})
    assert e.add({1: 1, 2: 1})
    assert not e.add({0: 1, 1: 3, 2: 1})
    assert e.reduce({0: 2, 1: 4}) == {}


def test_homology_of_the_three_sphere_bar_complex():
    bar = BarComplex(sphere_model(3))
    assert [homology_rank(bar, t) for t in range(1, 8)] == [0, 1, 0, 1, 0, 1, 0]


def test_homology_basis_projects_boundaries_to_zero():
    bar = BarComplex(sphere_model(2))
    hb = homology_basis(bar, 2)
    assert hb.rank == homology_rank(bar, 2)
    d = bar.differential_matrix(1)
    for j in range(d.ncols):
        assert all(v == 0 for v in hb.project(d.cols[j]))
    for k, z in enumerate(hb.cycles):
        assert hb.project(z) == [Fraction(int(i == k)) for i in range(hb.rank)]


def test_cap_is_read_from_the_environment(monkeypatch):
    monkeypatch.setenv("HOPFINV_CAP", "3")
    assert default_cap() == 3
    bar = BarComplex(wedge_model((2, 2, 2, 2)))
    with pytest.raises(PieceTooLarge) as info:
        homology_rank(bar, 2)
    assert info.value.cap == 3
