import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nodaltwist.ncdga import (InhomogeneousError, NCPoly, PresentedDGA, Rule,
                              UnknownGeneratorError, check_consistency)
from nodaltwist.nodal import RHO, XI, XIP, X, Y, exp_rho, nodal_presentation
from nodaltwist.series import OrderMismatchError, Series2

GENS = (RHO, X, Y, XI, XIP)
DGA = nodal_presentation(6)
W = NCPoly.word


def test_rho_module_rules():
    assert DGA.reduce(W(RHO, X)) == W(X)
    assert DGA.reduce(W(X, RHO)) == NCPoly.zero()
    assert DGA.reduce(W(RHO, RHO, RHO, X)) == W(X)


def test_xi_moves_past_rho():
    assert DGA.reduce(W(XI, RHO, RHO, RHO)) == W(RHO, RHO, RHO, XI)


def test_generator_differentials():
    assert DGA.differentiate(W(XI)) == -W(X, Y) - W(Y, X)
    assert DGA.differentiate(W(XIP)) == -W(X, Y) - W(Y, X)
    assert DGA.differentiate(W(RHO)) == W(XIP) - W(XI)


def test_d_rho_power():
    r4 = DGA.differentiate(W(RHO, RHO, RHO, RHO))
    assert r4 == (W(RHO, RHO, RHO, XIP) - W(RHO, RHO, RHO, XI)).scale(4)


def test_products():
    assert DGA.multiply(W(XI), W(X)) == -W(X, XI)
    assert DGA.multiply(W(XI), W(Y)) == NCPoly.zero()
    assert DGA.multiply(W(Y), W(XI)) == NCPoly.zero()


def test_exponential_of_rho_times_x_collapses():
    N = DGA.order
    e = exp_rho(DGA, N)
    assert e.coeff(()) == Series2.one(N)
    got = DGA.multiply(e, NCPoly.word(X, coeff=Series2.one(N)))
    assert got == NCPoly({(X,): Series2.monomial(1, 1, N).exp()})


def test_errors():
    with pytest.raises(UnknownGeneratorError):
        DGA.reduce(W("z"))
    with pytest.raises(InhomogeneousError):
        DGA.differentiate(W(X) + W(RHO))
    with pytest.raises(OrderMismatchError):
        DGA.reduce(NCPoly({(X,): Series2.p(DGA.order + 1)}))
    with pytest.raises(ValueError):
        PresentedDGA([(X, 1, None)], [Rule((X, X), NCPoly({(): Series2.p(3)}))])


def test_catalog_passes_consistency():
    rep = check_consistency(nodal_presentation(10), 4)
    assert rep.passed, rep.failures()
    assert len(rep.critical_pairs) == 120
    assert all(not r for r in rep.leibniz.values())


def test_catalog_without_completion_rule_is_not_confluent():
    rep = check_consistency(nodal_presentation(10, completed=False), 4)
    bad = sorted(cp["word"] for cp in rep.critical_pairs if not cp["joinable"])
    assert len(bad) == 6
    assert rep.leibniz and all(not r for r in rep.leibniz.values())


def test_broken_preset_leibniz_residual():
    broken = nodal_presentation(10).without_rule((X, XIP))
    rep = check_consistency(broken, 4)
    assert not rep.passed
    want = W(X, XI) - W(X, XIP)
    assert rep.leibniz["x*rho -> 0"] == want
    assert rep.leibniz["rho*x -> x"] == want


def test_without_rule_unknown_lhs():
    with pytest.raises(KeyError):
        DGA.without_rule((Y, Y, Y))


def test_json_roundtrip():
    dga = nodal_presentation(10)
    back = PresentedDGA.from_json(dga.to_json())
    assert back.to_json() == dga.to_json()
    assert back.rules == dga.rules


def test_shipped_preset_matches_builtin():
    from nodaltwist.nodal import load_preset_json
    assert load_preset_json().to_json() == nodal_presentation(10).to_json()


# -- independent oracle: random-position rewriting ------------------------------

def rewrite_randomly(dga, poly, rng):
    """Reduce by applying rules at random positions until nothing applies."""
    terms = dict(poly.terms)
    while True:
        redexes = []
        for w in terms:
            for rule in dga.rules:
                n = len(rule.lhs)
                for i in range(len(w) - n + 1):
                    if w[i:i + n] == rule.lhs:
                        redexes.append((w, i, rule))
        if not redexes:
            return NCPoly(terms)
        w, i, rule = rng.choice(redexes)
        c = terms.pop(w)
        for rw, rc in rule.rhs.items():
            nw = w[:i] + rw + w[i + len(rule.lhs):]
            v = terms.get(nw, 0) + c * rc
            if v:
                terms[nw] = v
            else:
                terms.pop(nw, None)


words = st.lists(st.sampled_from(GENS), min_size=0, max_size=6).map(tuple)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def polys(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        terms[draw(words)] = draw(coeffs)
    return NCPoly(terms)


@settings(max_examples=60, deadline=None)
@given(polys(), st.integers(0, 2**16))
def test_normal_form_matches_random_rewriting(poly, seed):
    assert DGA.reduce(poly) == rewrite_randomly(DGA, poly, random.Random(seed))


@given(polys())
def test_reduce_is_idempotent(poly):
    r = DGA.reduce(poly)
    assert DGA.reduce(r) == r
    assert all(DGA.is_normal(w) for w in r.words())


@settings(deadline=None)
@given(words, words, words)
def test_multiply_is_associative(a, b, c):
    A, B, C = W(*a), W(*b), W(*c)
    assert DGA.multiply(DGA.multiply(A, B), C) == DGA.multiply(A, DGA.multiply(B, C))


@settings(deadline=None)
@given(words, words)
def test_graded_leibniz(a, b):
    A, B = DGA.reduce(W(*a)), DGA.reduce(W(*b))
    sign = -1 if DGA.word_degree(a) % 2 else 1
    lhs = DGA.differentiate(DGA.multiply(A, B))
    rhs = DGA.multiply(DGA.differentiate(A), B) + DGA.multiply(A, DGA.differentiate(B)).scale(sign)
    assert lhs == rhs


@settings(deadline=None)
@given(words)
def test_d_squared_is_zero(w):
    assert DGA.differentiate(DGA.differentiate(W(*w))) == NCPoly.zero()


@settings(deadline=None)
@given(words)
def test_reduce_commutes_with_d(w):
    P = W(*w)
    assert DGA.reduce(DGA.differentiate(P)) == DGA.reduce(DGA.differentiate(DGA.reduce(P)))


def test_d_of_free_word_equals_d_of_normal_form_exhaustively():
    # all words up to length 4: d is well defined on the quotient
    from itertools import product
    for n in range(5):
        for w in product(GENS, repeat=n):
            free = DGA.reduce(DGA._free_d_word(w))
            assert free == DGA.differentiate(DGA.reduce(W(*w))), w


def test_zero_is_unique_zero():
    assert NCPoly({(X,): Fraction(0)}) == NCPoly.zero()
    assert not NCPoly.zero()
