from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from nodaltwist.plane import (NotInvertibleError, PlaneMap, RadialHamiltonian, ShapeError, compose,
                              conjugacy_witness, ham_flow, invert, jacobian_det, radial_log)
from nodaltwist.series import OrderMismatchError, Series2, SeriesDomainError

from strategies import P, Q, from_sympy, invertible_maps, series, small, to_sympy


def exp_map(N, t=1):
    s = Series2.monomial(1, 1, N)
    return PlaneMap(Series2.p(N) * s.scale(t).exp(), Series2.q(N) * s.scale(-t).exp())


def cluster_map(N):
    u = Series2.one(N) - Series2.monomial(1, 1, N)
    return PlaneMap(Series2.p(N) * u, Series2.q(N) * u.reciprocal())


def test_compose_exp_map_with_itself():
    assert compose(exp_map(10), exp_map(10)) == exp_map(10, 2)


def test_invert_exp_map():
    F = exp_map(12)
    G = invert(F)
    assert G == exp_map(12, -1)
    assert compose(F, G) == PlaneMap.identity(12) == compose(G, F)


def test_jacobians_of_the_two_maps():
    assert jacobian_det(exp_map(10)) == Series2.one(9)
    assert jacobian_det(cluster_map(10)) == Series2.one(9)


def test_flow_of_the_quartic_hamiltonian():
    H = Series2(14, {(2, 2): Fraction(-1, 2)})
    assert ham_flow(H, 12) == exp_map(12)


def test_radial_logs():
    assert radial_log(exp_map(12)) == RadialHamiltonian([0, 0, Fraction(-1, 2)])
    h = radial_log(cluster_map(12))
    # coefficient of (pq)^(n+1) has magnitude 1/(n(n+1))
    for n in range(1, 6):
        assert abs(h.coeffs[n + 1]) == Fraction(1, n * (n + 1))


def test_conjugacy_of_exp_and_cluster_maps():
    F, G = exp_map(12), cluster_map(12)
    res = conjugacy_witness(F, G, 12)
    assert res.ok and res.method == "radial"
    assert compose(res.witness, F) == compose(G, res.witness)


def test_conjugacy_report_for_impossible_pair():
    # nothing conjugates the identity to a different map
    res = conjugacy_witness(PlaneMap.identity(5), exp_map(5))
    assert not res.ok
    assert res.obstruction_degree is not None and res.residual is not None


def test_errors():
    N = 4
    with pytest.raises(NotInvertibleError):
        invert(PlaneMap.linear([[1, 2], [2, 4]], N))
    with pytest.raises(SeriesDomainError):
        ham_flow(Series2(N, {(1, 1): 1}))
    with pytest.raises(ShapeError):
        radial_log(PlaneMap(Series2.p(N) + Series2.q(N) * Series2.q(N), Series2.q(N)))
    with pytest.raises(OrderMismatchError):
        compose(PlaneMap.identity(3), PlaneMap.identity(4))
    with pytest.raises(SeriesDomainError):
        PlaneMap(Series2.one(N), Series2.q(N))


def test_json_roundtrip():
    F = cluster_map(6)
    assert PlaneMap.from_json(F.to_json()) == F
    with pytest.raises(ValueError):
        PlaneMap.from_json({"order": 6, "p_image": F.fp.to_json()})


# -- oracles -------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.data())
def test_compose_matches_sympy(data):
    N = data.draw(st.integers(1, 5))
    F, G = data.draw(invertible_maps(order=N)), data.draw(invertible_maps(order=N))
    H = compose(F, G)
    sub = {P: to_sympy(G.fp), Q: to_sympy(G.fq)}
    assert H.fp == from_sympy(to_sympy(F.fp).subs(sub, simultaneous=True), N)
    assert H.fq == from_sympy(to_sympy(F.fq).subs(sub, simultaneous=True), N)


@settings(max_examples=30, deadline=None)
@given(invertible_maps())
def test_jacobian_matches_sympy(F):
    fp, fq = to_sympy(F.fp), to_sympy(F.fq)
    det = sympy.Matrix([[fp.diff(P), fp.diff(Q)], [fq.diff(P), fq.diff(Q)]]).det()
    assert jacobian_det(F) == from_sympy(det, F.order - 1)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 8))
def test_flow_matches_closed_form(N):
    # flow of -(pq)^2/2 is (p e^{pq}, q e^{-pq}); compare with sympy exponentials
    s = P * Q
    F = ham_flow(Series2(N + 2, {(2, 2): Fraction(-1, 2)}), N)
    assert F.fp == from_sympy(P * sympy.exp(s), N)
    assert F.fq == from_sympy(Q * sympy.exp(-s), N)


# -- group laws and flow properties ----------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.data())
def test_compose_is_associative(data):
    N = data.draw(st.integers(1, 4))
    F, G, H = (data.draw(invertible_maps(order=N)) for _ in range(3))
    assert compose(compose(F, G), H) == compose(F, compose(G, H))


@settings(max_examples=30, deadline=None)
@given(invertible_maps())
def test_invert_is_two_sided(F):
    G = invert(F)
    ident = PlaneMap.identity(F.order)
    assert compose(F, G) == ident
    assert compose(G, F) == ident


@st.composite
def hamiltonians(draw):
    N = draw(st.integers(3, 6))
    return draw(series(order=N, valuation=3, max_terms=3)), N


@settings(max_examples=30, deadline=None)
@given(hamiltonians())
def test_flow_is_area_preserving(hn):
    H, N = hn
    F = ham_flow(H, N)
    assert jacobian_det(F) == Series2.one(N - 1)


@st.composite
def radials(draw, top=4):
    return RadialHamiltonian([0, 0] + [draw(small) for _ in range(top - 1)])


@settings(max_examples=30, deadline=None)
@given(radials(), st.integers(2, 10))
def test_radial_flow_preserves_pq(h, N):
    F = ham_flow(h, N)
    pq = Series2.monomial(1, 1, N)
    assert pq.substitute(F.fp, F.fq) == pq


@settings(max_examples=30, deadline=None)
@given(radials(), radials(), st.integers(2, 9))
def test_radial_flows_add(h1, h2, N):
    assert ham_flow(h1 + h2, N) == compose(ham_flow(h1, N), ham_flow(h2, N))


@settings(max_examples=30, deadline=None)
@given(radials(top=6), st.integers(2, 12))
def test_radial_log_inverts_flow(h, N):
    F = ham_flow(h, N)
    g = radial_log(F)
    # the flow at order N sees the s-coefficients up to s^(N // 2 + 1)
    k = (N - 1) // 2 + 1
    assert g.truncate(k) == h.truncate(k)
    assert ham_flow(g, N) == F


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_conjugacy_witness_found_and_verified(data):
    N = data.draw(st.integers(2, 5))
    # non-resonant diagonal linear part, random higher terms
    F = PlaneMap(Series2(N, {(1, 0): 2}) + data.draw(series(order=N, valuation=2, max_terms=2)),
                 Series2(N, {(0, 1): 5}) + data.draw(series(order=N, valuation=2, max_terms=2)))
    psi = data.draw(invertible_maps(order=N))
    G = compose(compose(psi, F), invert(psi))
    res = conjugacy_witness(F, G)
    assert res.ok
    assert compose(res.witness, F) == compose(G, res.witness)


@settings(max_examples=20, deadline=None)
@given(radials(), radials(), st.integers(4, 9))
def test_radial_conjugacy(h1, h2, N):
    assume(h1.coeffs[2] and h2.coeffs[2])
    F, G = ham_flow(h1, N), ham_flow(h2, N)
    res = conjugacy_witness(F, G)
    if res.ok:
        assert compose(res.witness, F) == compose(G, res.witness)
    else:
        assert res.obstruction_degree is not None
