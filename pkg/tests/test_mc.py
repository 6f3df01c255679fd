import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nodaltwist.ainfty import (compose_morphisms, complete_to_cocycle, exp_coderivation,
                               exterior_algebra, gl2_morphism, identity_morphism,
                               random_endomorphism, symmetric_cochain)
from nodaltwist.mc import (MCElement, MCError, check_mc, h0_witness, hom_diff, plane_element,
                           pushforward_mc, symmetrization)
from nodaltwist.ncdga import NCPoly
from nodaltwist.nodal import (XI, XIP, X, Y, exp_rho, expected_G_beta, expected_PG_alpha,
                              morphism_G, nodal_presentation, pullback_morphism)
from nodaltwist.plane import PlaneMap, compose
from nodaltwist.series import OrderMismatchError, Series2

from strategies import series

L = exterior_algebra()
N = 6
p, q = Series2.p(N), Series2.q(N)
seeds = st.integers(0, 2**20)


def elements(order=N):
    coeff = series(order=order, valuation=1, max_terms=3)
    return st.tuples(coeff, coeff).map(lambda fg: plane_element(L, *fg))


# -- MC equation -------------------------------------------------------------------

@given(elements())
def test_every_plane_element_is_mc(alpha):
    # (f a + g b)^2 = fg (ab + ba) = 0 in the exterior algebra
    assert check_mc(alpha).passed


def test_nodal_mc_failures():
    dga = nodal_presentation(N)
    r = check_mc(MCElement(dga, {(XI,): p}))
    assert not r.passed
    assert NCPoly(r.residual) == (NCPoly.word(X, Y) + NCPoly.word(Y, X)).scale(-p)
    r = check_mc(MCElement(dga, {(X,): p, (Y,): q}))
    assert NCPoly(r.residual) == (NCPoly.word(X, Y) + NCPoly.word(Y, X)).scale(p * q)


def test_adding_pq_xi_repairs_the_element():
    dga = nodal_presentation(N)
    assert check_mc(MCElement(dga, {(X,): p, (Y,): q, (XI,): p * q})).passed
    assert check_mc(MCElement(dga, {(X,): p, (Y,): q, (XIP,): p * q})).passed


def test_element_errors():
    dga = nodal_presentation(N)
    with pytest.raises(MCError):
        MCElement(L, {"ab": p})
    with pytest.raises(MCError):
        MCElement(L, {"a": p + 1})
    with pytest.raises(MCError):
        MCElement(L, {"a": Fraction(1)})
    with pytest.raises(OrderMismatchError):
        MCElement(L, {"a": p, "b": Series2.q(N + 1)})
    with pytest.raises(OrderMismatchError):
        MCElement(dga, {(X,): Series2.p(N + 1)})
    with pytest.raises(MCError):
        MCElement(L, {})


def test_json_roundtrip():
    dga = nodal_presentation(N)
    for ctx, el in ((L, plane_element(L, p, q * q)), (dga, MCElement(dga, {(X,): p, (XI,): p * q}))):
        assert MCElement.from_json(ctx, el.to_json()) == el


# -- pushforward -----------------------------------------------------------------------

def test_pushforward_along_G():
    dga = nodal_presentation(N)
    s = Series2.monomial(1, 1, N)
    beta = plane_element(L, p * s.exp(), q * (-s).exp())
    got = pushforward_mc(morphism_G(dga), beta)
    assert got.as_ncpoly() == dga.reduce(expected_G_beta(N))
    assert got.certified


def test_pushforward_along_PG():
    dga = nodal_presentation(N)
    PG = compose_morphisms(pullback_morphism(dga), morphism_G(dga))
    got = pushforward_mc(PG, plane_element(L, p, q))
    assert got.as_ncpoly() == dga.reduce(expected_PG_alpha(N))
    assert got.certified


def test_pushforward_rejects_non_mc_and_wrong_source():
    dga = nodal_presentation(N)
    P = pullback_morphism(dga)
    with pytest.raises(MCError):
        pushforward_mc(P, MCElement(dga, {(XI,): p}))
    with pytest.raises(MCError):
        pushforward_mc(morphism_G(dga), MCElement(dga, {(X,): p, (Y,): q, (XI,): p * q}))


@settings(max_examples=15, deadline=None)
@given(seeds, elements())
def test_pushforward_preserves_mc_and_composes(seed, alpha):
    rng = random.Random(seed)
    f, g = random_endomorphism(rng, 4), random_endomorphism(rng, 4)
    one_step = pushforward_mc(compose_morphisms(g, f), alpha)
    two_steps = pushforward_mc(g, pushforward_mc(f, alpha))
    assert one_step.certified and two_steps.certified
    assert one_step == two_steps


# -- symmetrization --------------------------------------------------------------------

def test_linear_maps_symmetrize_to_themselves():
    for m in ([[2, 0], [0, Fraction(1, 2)]], [[1, 2], [3, 4]]):
        assert symmetrization(gl2_morphism(m), N) == PlaneMap.linear(m, N)
    assert symmetrization(identity_morphism(L), N) == PlaneMap.identity(N)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_symmetrization_is_multiplicative(seed):
    rng = random.Random(seed)
    f, g = random_endomorphism(rng, 4), random_endomorphism(rng, 4)
    assert symmetrization(compose_morphisms(g, f), N) == compose(symmetrization(g, N),
                                                                 symmetrization(f, N))


def test_exp_of_polyvector_cocycle_is_nonlinear():
    one = Fraction(1)
    table = symmetric_cochain(L, 3, {("a", "a", "b"): {"a": one}, ("a", "b", "b"): {"b": 2 * one}})
    eta = complete_to_cocycle(L, 3, table.table(3), lambda keys: "ab" in keys)
    S = symmetrization(exp_coderivation(eta), N)
    assert S.fp.truncate(3) == Series2(3, {(1, 0): 1, (2, 1): 3})
    assert S.fq.truncate(3) == Series2(3, {(0, 1): 1, (1, 2): 6})


def test_symmetrization_needs_exterior_algebra():
    dga = nodal_presentation(3)
    with pytest.raises(MCError):
        symmetrization(pullback_morphism(dga), 3)


# -- hom complex -----------------------------------------------------------------------

def _step2_elements(dga):
    s = Series2.monomial(1, 1, N)
    beta = plane_element(L, p * s.exp(), q * (-s).exp())
    PG = compose_morphisms(pullback_morphism(dga), morphism_G(dga))
    return pushforward_mc(morphism_G(dga), beta), pushforward_mc(PG, plane_element(L, p, q))


def test_exp_rho_is_an_h0_witness():
    dga = nodal_presentation(N)
    a, b = _step2_elements(dga)
    w = h0_witness(a, b, exp_rho(dga, N))
    assert w.passed
    assert hom_diff(a, b, exp_rho(dga, N)).is_zero()


def test_unit_is_not_closed():
    dga = nodal_presentation(N)
    a, b = _step2_elements(dga)
    w = h0_witness(a, b, NCPoly.unit(Series2.one(N)))
    assert not w.closed and not w.passed
    assert w.residual == a.as_ncpoly() - b.as_ncpoly()


def test_hom_diff_squares_to_zero():
    dga = nodal_presentation(N)
    a, b = _step2_elements(dga)
    rng = random.Random(3)
    gens = (X, Y, XI, XIP)
    for _ in range(20):
        words = [tuple(rng.choice(gens) for _ in range(rng.randint(0, 3))) for _ in range(3)]
        gamma = dga.reduce(NCPoly({w: Series2.monomial(rng.randint(0, 2), rng.randint(0, 2), N)
                                   for w in words}))
        assert hom_diff(a, b, hom_diff(a, b, gamma)).is_zero()


def test_hom_diff_context_errors():
    dga = nodal_presentation(N)
    a, _ = _step2_elements(dga)
    with pytest.raises(MCError):
        hom_diff(a, plane_element(L, p, q), NCPoly.unit(Series2.one(N)))
    with pytest.raises(MCError):
        hom_diff(plane_element(L, p, q), plane_element(L, p, q), NCPoly.unit(Series2.one(N)))
