from __future__ import annotations

import random
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfinv.barcx import BarComplex
from hopfinv.graphcx import EilComplex
from hopfinv.lincomb import LinComb
from hopfinv.parse import ParseError, tokenize

from support import conf3_model, corpus, random_tree, random_word

MODELS = corpus()
coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(bool)


def test_tokens():
    tokens = tokenize("3/2*x^2|y'")
    assert [t.text for t in tokens if t.kind == "name"] == ["x", "y'"]
    with pytest.raises(ParseError):
        tokenize("x $ y")


def test_rational_coefficients_and_powers():
    m = MODELS[0]
    assert m.format(m.parse("3/2*x^2 - 1/2*x^2")) == "x^2"
    with pytest.raises(ParseError):
        m.parse("x^2/2")
    assert m.format(m.parse("-(x*y)")) == "-x*y"


def test_aliases_expand():
    c = conf3_model()
    bar = BarComplex(c)
    assert bar.format(bar.parse("a31|a12")) == "-a13|a12"


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(range(len(MODELS))), st.integers(0, 2**32 - 1), st.lists(coefficients, min_size=1, max_size=4))
def test_bar_print_parse_round_trip(which, seed, coefs):
    m = MODELS[which]
    bar, rng = BarComplex(m), random.Random(seed)
    chain = LinComb()
    for c in coefs:
        chain.add_term(random_word(rng, m, 3), c)
    text = bar.format(chain)
    assert bar.parse(text) == chain
    assert bar.format(bar.parse(text)) == text


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(range(len(MODELS))), st.integers(0, 2**32 - 1), st.lists(coefficients, min_size=1, max_size=3))
def test_tree_print_parse_round_trip(which, seed, coefs):
    m = MODELS[which]
    cx, rng = EilComplex(m), random.Random(seed)
    chain = LinComb()
    for c in coefs:
        chain.add_scaled(random_tree(rng, cx, rng.randint(1, 4)), c)
    text = cx.format(chain)
    assert cx.parse(text) == chain
    assert cx.format(cx.parse(text)) == text


def test_zero_prints_as_zero():
    bar = BarComplex(MODELS[0])
    assert bar.format(LinComb()) == "0"
    assert bar.parse("0") == LinComb()
    assert bar.parse("x|y - x|y") == 0
