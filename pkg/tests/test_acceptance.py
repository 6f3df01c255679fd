"""Acceptance suite: one test per headline criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line (shown even when
pytest captures output).  Run this file directly to get just those lines.
"""

import io
import json
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction

import pytest

from nodaltwist import cli
from nodaltwist.ainfty import (Contraction, HochschildCochain, TableAlgebra, check_ainf_relations,
                               check_homotopy, check_morphism, compose_morphisms, exp_coderivation,
                               exterior_algebra, from_dga, gl2_morphism, hochschild_differential,
                               random_cochain, random_cocycle, random_endomorphism, random_homotopy,
                               synthetic_dgas, transfer, transport_homotopy)
from nodaltwist.mc import (MCElement, check_mc, h0_witness, pushforward_mc, random_plane_element,
                           symmetrization)
from nodaltwist.ncdga import NCPoly, check_consistency
from nodaltwist.nodal import (RHO_RULES, XIP, X, expected_G_beta, expected_PG_alpha, morphism_G,
                              nodal_presentation, pullback_morphism, verify_pipeline)
from nodaltwist.plane import (PlaneMap, RadialHamiltonian, compose, conjugacy_witness, ham_flow,
                              jacobian_det)
from nodaltwist.series import Series2


def exp_map(N):
    s = Series2.monomial(1, 1, N)
    return PlaneMap(Series2.p(N) * s.exp(), Series2.q(N) * (-s).exp())


def cluster_map(N):
    u = Series2.one(N) - Series2.monomial(1, 1, N)
    return PlaneMap(Series2.p(N) * u, Series2.q(N) * u.reciprocal())


class Line:
    """Collects the verdict and prints it once."""

    def __init__(self, n, capsys=None):
        self.n = n
        self.capsys = capsys
        self.notes = []
        self.ok = True

    def check(self, cond, note):
        if not cond:
            self.ok = False
            self.notes.append(note)
        return cond

    def emit(self):
        verdict = "PASS" if self.ok else "FAIL"
        text = f"criterion {self.n}: {verdict}"
        if self.notes:
            text += "  (" + "; ".join(self.notes) + ")"
        if self.capsys is not None:
            with self.capsys.disabled():
                print("\n" + text)
        else:
            print(text)
        return self.ok


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.run(argv)
    return code, buf.getvalue()


# 1 ---------------------------------------------------------------------------

def criterion_1(capsys=None):
    line = Line(1, capsys)
    t = time.perf_counter()
    code, out = run_cli(["nodal", "verify", "--order", "10", "--arity", "5", "--format", "json"])
    elapsed = time.perf_counter() - t
    line.check(code == 0, f"exit code {code}")
    rep = json.loads(out)
    st = rep["stages"]
    line.check(rep["status"] == "PASS", "report status")
    line.check(st["step1"]["status"] == "PASS", "step 1")
    line.check("1364 tuples through arity 5" in st["step1"]["summary"], "step 1 tuple count")
    # Step 2 as exact normal forms, not just strings
    dga = nodal_presentation(10)
    G = morphism_G(dga)
    N = 10
    s = Series2.monomial(1, 1, N)
    L = exterior_algebra()
    beta = MCElement(L, {"a": Series2.p(N) * s.exp(), "b": Series2.q(N) * (-s).exp()}, N)
    alpha = MCElement(L, {"a": Series2.p(N), "b": Series2.q(N)}, N)
    g_beta = pushforward_mc(G, beta)
    pg_alpha = pushforward_mc(compose_morphisms(pullback_morphism(dga), G), alpha)
    want1 = NCPoly({("x",): Series2.p(N) * s.exp(), ("y",): Series2.q(N) * (-s).exp(), ("xi",): s})
    want2 = NCPoly({("x",): Series2.p(N), ("y",): Series2.q(N), (XIP,): s})
    line.check(g_beta.as_ncpoly() == want1, "G_*beta normal form")
    line.check(pg_alpha.as_ncpoly() == want2, "(PG)_*alpha normal form")
    line.check(st["step2"]["status"] == "PASS", "step 2")
    line.check(st["step3"]["status"] == "PASS" and st["step3"]["residuals"] == {}, "step 3")
    line.check(elapsed < 60, f"runtime {elapsed:.1f}s")
    return line.emit()


# 2 ---------------------------------------------------------------------------

def criterion_2(capsys=None):
    line = Line(2, capsys)
    t = time.perf_counter()
    H = Series2(14, {(2, 2): Fraction(-1, 2)})
    F = ham_flow(H, 12)
    F2 = ham_flow(RadialHamiltonian([0, 0, Fraction(-1, 2)]), 12)
    elapsed = time.perf_counter() - t
    want = exp_map(12)
    line.check(F.order == 12, "order")
    line.check(F.fp.terms == want.fp.terms and F.fq.terms == want.fq.terms, "coefficients")
    line.check(F2 == want, "radial form")
    line.check(elapsed < 1, f"runtime {elapsed:.2f}s")
    return line.emit()


# 3 ---------------------------------------------------------------------------

def criterion_3(capsys=None):
    line = Line(3, capsys)
    t = time.perf_counter()
    F, G = exp_map(12), cluster_map(12)
    res = conjugacy_witness(F, G, 12)
    elapsed = time.perf_counter() - t
    if not line.check(res.ok, f"no witness, obstruction at degree {res.obstruction_degree}"):
        return line.emit()
    psi = res.witness
    lhs, rhs = compose(psi, F), compose(G, psi)
    line.check((lhs.fp - rhs.fp).is_zero() and (lhs.fq - rhs.fq).is_zero(), "recomposition residual")
    J = jacobian_det(psi).truncate(11)
    line.check(J == Series2.one(11), f"jacobian_det(witness) = {J}, not 1")
    line.check(elapsed < 5, f"runtime {elapsed:.1f}s")
    return line.emit()


# 4 ---------------------------------------------------------------------------

def criterion_4(capsys=None, seed=20241016):
    line = Line(4, capsys)
    rng = random.Random(seed)
    L = exterior_algebra()
    t = time.perf_counter()
    nonlinear = 0
    for i in range(20):
        N = rng.randint(3, 8)
        f = random_endomorphism(rng, 5)
        g = random_endomorphism(rng, 5)
        gf = compose_morphisms(g, f)
        lhs = symmetrization(gf, N)
        rhs = compose(symmetrization(g, N), symmetrization(f, N))
        line.check(lhs == rhs, f"homomorphism law, pair {i}")
        nonlinear += any(a + b > 1 for a, b in list(lhs.fp.terms) + list(lhs.fq.terms))
    line.check(nonlinear >= 10, f"only {nonlinear} composites have nonlinear S")
    for i in range(10):
        N = rng.randint(3, 8)
        eta = random_cocycle(rng, L, (2, 3))
        kappa = random_cochain(rng, L, (1, 2), bar_degree=-1)
        dk = hochschild_differential(kappa)
        line.check(not dk.is_zero(4), f"d kappa vanishes, pair {i}")
        moved = eta + dk.materialize(4)
        e1, e2 = exp_coderivation(eta), exp_coderivation(moved)
        line.check(any(e1.table(n) != e2.table(n) for n in (1, 2, 3)), f"exp unchanged, pair {i}")
        line.check(check_morphism(e2, 4).passed, f"exp(eta + d kappa) not a morphism, pair {i}")
        line.check(symmetrization(e1, N) == symmetrization(e2, N), f"homotopy invariance, pair {i}")
    elapsed = time.perf_counter() - t
    line.check(elapsed < 120, f"runtime {elapsed:.1f}s")
    return line.emit()


# 5 ---------------------------------------------------------------------------

def criterion_5(capsys=None, seed=7):
    line = Line(5, capsys)
    rng = random.Random(seed)
    L = exterior_algebra()
    dga = nodal_presentation(6)
    G = morphism_G(dga)
    PG = compose_morphisms(pullback_morphism(dga), G)
    for i in range(50):
        kind = i % 3
        if kind == 0:
            N = rng.randint(2, 6)
            psi = random_endomorphism(rng, 4)
        else:
            N = 6
            psi = G if kind == 1 else PG
        alpha = random_plane_element(rng, L, N)
        line.check(check_mc(alpha).passed, f"input {i} not MC")
        out = pushforward_mc(psi, alpha)
        line.check(out.certified and check_mc(out).passed, f"pushforward {i} fails MC")
    for i in range(20):
        N = rng.randint(2, 7)
        phi = random_endomorphism(rng, 5)
        alpha = random_plane_element(rng, L, N)
        f, g = alpha.coeff("a"), alpha.coeff("b")
        S = symmetrization(phi, N)
        out = pushforward_mc(phi, alpha)
        want = {"a": S.fp.substitute(f, g), "b": S.fq.substitute(f, g)}
        want = {k: v for k, v in want.items() if v}
        line.check(out.payload == want, f"pushforward along a composite, instance {i}")
    return line.emit()


# 6 ---------------------------------------------------------------------------

def criterion_6(capsys=None):
    line = Line(6, capsys)
    dga = nodal_presentation(10)
    rep = check_consistency(dga, 4)
    line.check(rep.passed, "catalog consistency: " + "; ".join(rep.failures()[:2]))
    for lhs in RHO_RULES:
        mutated = dga.without_rule(lhs)
        r = verify_pipeline(6, 3, dga=mutated)
        st3 = r.stage("step3")
        residual = st3["residuals"].get("D(gamma)", "")
        line.check(st3["status"] == "FAIL" and residual not in ("", "0"),
                   f"removing {'*'.join(lhs)} leaves Step 3 passing")
    broken = dga.without_rule((X, XIP))
    rep = check_consistency(broken, 4)
    hits = [f for f in rep.failures() if f.startswith("Leibniz residual on rule x*rho -> 0")]
    line.check(not rep.passed and hits, "removing x*xi' -> x*xi does not break Leibniz on x*rho -> 0")
    return line.emit()


# 7 ---------------------------------------------------------------------------

def identity_contraction(dga):
    ids = {k: {k: Fraction(1)} for k in dga.space}
    return Contraction(dga, dga.space, ids, dict(ids), {})


def criterion_7(capsys=None):
    line = Line(7, capsys)
    dgas = synthetic_dgas()
    passed = 0
    for name, dga in dgas.items():
        res = transfer(dga, None, 6)
        ok = line.check(check_ainf_relations(res.algebra, 6).passed, f"{name}: relations")
        ok &= line.check(check_morphism(res.G, 5).passed, f"{name}: G")
        H = res.algebra
        if 3 in H.tables and H.tables[3]:
            eta = HochschildCochain(H, tables={3: H.tables[3]}, bar_degree=1)
            ok &= line.check(hochschild_differential(eta).is_zero(4), f"{name}: mu_3 cocycle")
        # h = 0: the transfer through the identity contraction is the dga itself
        flat = transfer(dga, identity_contraction(dga), 4)
        A = from_dga(dga)
        basis = A.basis()
        same = True
        for n in range(1, 5):
            for keys in _tuples(basis, n):
                if flat.algebra.mu(n, keys) != A.mu(n, keys):
                    same = False
        ok &= line.check(same, f"{name}: h = 0 transfer differs from the dga")
        passed += bool(ok)
    line.check(passed >= 3, f"only {passed} synthetic dgas pass")
    nontrivial = transfer(dgas["massey"], None, 3).algebra.mu(3, ("a", "b", "c"))
    line.check(bool(nontrivial), "massey mu_3(a, b, c) vanishes")
    return line.emit()


def _tuples(basis, n):
    from itertools import product
    return product(basis, repeat=n)


# 8 ---------------------------------------------------------------------------

def criterion_8(capsys=None):
    line = Line(8, capsys)
    dga = nodal_presentation(10)

    # broken preset: Leibniz residual x*xi - x*xi' on x*rho -> 0
    broken = dga.without_rule((X, XIP))
    fails = check_consistency(broken, 4).failures()
    line.check("Leibniz residual on rule x*rho -> 0: x*xi - x*xi'" in fails, "broken preset residual")
    code, out = run_cli_file_presentation(broken)
    line.check(code == 1 and "x*xi - x*xi'" in out, f"dga check CLI exit {code}")

    # non-associative mu_2 fails at arity 3
    L = exterior_algebra()
    T = TableAlgebra(L.space, {2: {k: L.mu(2, k) for k in _tuples(L.basis(), 2) if L.mu(2, k)}})
    line.check(check_ainf_relations(T, 4).passed, "tabulated exterior algebra")
    # a*1 = 2a makes (a*1)*1 and a*(1*1) differ
    bad = T.with_table(2, ("a", "1"), {k: 2 * v for k, v in L.mu(2, ("a", "1")).items()})
    rep = check_ainf_relations(bad, 4)
    line.check(not rep.passed and rep.first_failure_arity() == 3, "non-associative mu_2")

    # G with G_1(ab) sign flipped fails at arity 2 on (a, b)
    Gbad = morphism_G(dga, {("ab",): {("y", "x"): Fraction(1)}})
    rep = check_morphism(Gbad, 5)
    first = [keys for n, keys, _ in rep.violations if n == 2]
    line.check(not rep.passed and rep.first_failure_arity() == 2 and ("a", "b") in first,
               "flipped G_1(ab)")

    # non-homotopic morphisms: no homotopy works
    rng = random.Random(3)
    f = gl2_morphism([[1, 0], [0, 1]])
    g = gl2_morphism([[2, 0], [0, Fraction(1, 2)]])
    line.check(symmetrization(f, 3) != symmetrization(g, 3), "S-images agree")
    for h in [random_homotopy(rng) for _ in range(3)]:
        line.check(not check_homotopy(f, g, h, 3).passed, "homotopy check passed for non-homotopic maps")
    line.check(check_homotopy(f, transport_homotopy(f, h), h, 4).passed, "positive control")

    # p*xi is not MC: residual -p(xy + yx)
    N = 10
    p = Series2.p(N)
    el = MCElement(dga, {("xi",): p}, N)
    r = check_mc(el)
    want = NCPoly({("x", "y"): -p, ("y", "x"): -p})
    line.check(not r.passed and NCPoly(r.residual) == want, f"p*xi residual {r.text}")

    # gamma = 1 in Step 3
    rep = verify_pipeline(N, 2, gamma="one")
    st3 = rep.stage("step3")
    G = morphism_G(dga)
    s = Series2.monomial(1, 1, N)
    beta = MCElement(L, {"a": p * s.exp(), "b": Series2.q(N) * (-s).exp()}, N)
    alpha = MCElement(L, {"a": p, "b": Series2.q(N)}, N)
    a_ = pushforward_mc(G, beta)
    b_ = pushforward_mc(compose_morphisms(pullback_morphism(dga), G), alpha)
    w = h0_witness(a_, b_, NCPoly.unit(Series2.one(N)))
    diff = dga.reduce(expected_G_beta(N)) - dga.reduce(expected_PG_alpha(N))
    line.check(st3["status"] == "FAIL" and not rep.passed, "gamma = 1 pipeline passes")
    line.check(w.residual == diff and not w.residual.is_zero(), "gamma = 1 residual")
    line.check(st3["residuals"].get("D(gamma)") == dga.format(diff), "gamma = 1 printed residual")
    return line.emit()


def run_cli_file_presentation(dga):
    import os
    import tempfile
    fd, path = tempfile.mkstemp(suffix=".json")
    with os.fdopen(fd, "w") as fh:
        fh.write(dga.dumps())
    try:
        return run_cli(["dga", "check", "--presentation", path, "--critical-length", "4"])
    finally:
        os.unlink(path)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n, capsys):
    assert CRITERIA[n - 1](capsys)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    raise SystemExit(0 if all(results) else 1)
