"""The nodal sphere: presentation, the morphism G, the pullback, and the pipeline.

Generators: rho (degree 0) and x, y, xi, xi' (degree 1), with
dx = dy = 0, dxi = dxi' = -xy - yx and drho = xi' - xi.  The relation
catalog below is shipped as the preset; :func:`build_preset` certifies it.

The pipeline checks, at a fixed truncation order N and arity bound K:

0. the presentation is consistent (d^2, Leibniz, critical pairs);
1. G from the exterior algebra is an A-infinity morphism through arity K;
2. alpha = pa + qb and beta = pe^{pq}a + qe^{-pq}b are MC, and their
   pushforwards are pe^{pq}x + qe^{-pq}y + pq xi (along G) and
   px + qy + pq xi' (along the pullback after G);
3. e^{pq rho} is closed for the hom-complex differential between the two and
   has unit constant term.
"""

import importlib.resources
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .ainfty.core import AInfMorphism, check_morphism, compose_morphisms
from .ainfty.samples import exterior_algebra
from .mc import MCElement, MCError, check_mc, h0_witness, hom_diff, pushforward_mc, context_algebra
from .ncdga import NCPoly, PresentedDGA, Rule, check_consistency
from .series import Series2

__all__ = [
    "RHO", "X", "Y", "XI", "XIP",
    "CATALOG",
    "RHO_RULES",
    "nodal_presentation",
    "load_preset_json",
    "NodalPreset",
    "PresetError",
    "build_preset",
    "morphism_G",
    "pullback_morphism",
    "certify_pullback",
    "exp_rho",
    "expected_G_beta",
    "expected_PG_alpha",
    "VerificationReport",
    "verify_pipeline",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1

RHO, X, Y, XI, XIP = "rho", "x", "y", "xi", "xi'"

_W = NCPoly.word
_Z = NCPoly.zero()

# (group, lhs, rhs); the groups only label the rules in reports
CATALOG = [
    ("squares", (X, X), _Z),
    ("squares", (Y, Y), _Z),
    ("squares", (XI, XI), _Z),
    ("squares", (XIP, XIP), _Z),
    ("anticommutation", (XI, X), -_W(X, XI)),
    ("anticommutation", (XIP, X), -_W(X, XIP)),
    ("anticommutation", (XIP, XI), -_W(XI, XIP)),
    ("annihilation", (XI, Y), _Z),
    ("annihilation", (Y, XI), _Z),
    ("annihilation", (XIP, Y), _Z),
    ("annihilation", (Y, XIP), _Z),
    ("rho-module", (RHO, X), _W(X)),
    ("rho-module", (X, RHO), _Z),
    ("rho-module", (RHO, Y), _Z),
    ("rho-module", (Y, RHO), _W(Y)),
    ("commutation", (XI, RHO), _W(RHO, XI)),
    ("commutation", (XIP, RHO), _W(RHO, XIP)),
    ("collapse", (X, XIP), _W(X, XI)),
    ("pruning", (Y, X, Y), _Z),
    ("pruning", (X, Y, XI), _Z),
    ("pruning", (Y, X, XI), _Z),
    ("pruning", (X, Y, XIP), _Z),
    ("pruning", (Y, X, XIP), _Z),
    # needed for confluence: x xi' xi rewrites to 0 (collapse, then xi xi -> 0)
    # and to -x xi xi' (anticommutation); the rule passes the Leibniz check
    ("completion", (X, XI, XIP), _Z),
]

# the five rules the Step 3 identity consumes
RHO_RULES = [(RHO, X), (X, RHO), (RHO, Y), (Y, RHO), (XI, RHO)]


def _generators():
    dxi = -_W(X, Y) - _W(Y, X)
    return [
        (RHO, 0, _W(XIP) - _W(XI)),
        (X, 1, _Z),
        (Y, 1, _Z),
        (XI, 1, dxi),
        (XIP, 1, dxi),
    ]


def nodal_presentation(order=10, completed=True):
    """The nodal presentation; ``completed=False`` drops the confluence rule x xi xi' -> 0."""
    rules = [Rule(lhs, rhs) for group, lhs, rhs in CATALOG
             if completed or group != "completion"]
    return PresentedDGA(_generators(), rules, order, precedence=(RHO, X, Y, XI, XIP),
                        name="nodal")


def load_preset_json():
    """The shipped JSON presentation (order 10)."""
    text = importlib.resources.files("nodaltwist.data").joinpath("nodal_preset.json").read_text()
    return PresentedDGA.from_json(json.loads(text))


class PresetError(ValueError):
    pass


@dataclass
class NodalPreset:
    dga: PresentedDGA
    order: int
    arity: int
    consistency: object
    lam: object = field(default_factory=exterior_algebra)

    @property
    def algebra(self):
        return context_algebra(self.dga)


def build_preset(N=10, K=5, dga=None, critical_length=4, certify=True):
    if N < 1 or K < 1:
        raise ValueError("order and arity bound must be positive")
    dga = dga.with_order(N) if dga is not None else nodal_presentation(N)
    report = check_consistency(dga, critical_length) if certify else None
    if certify and not report.passed:
        raise PresetError("nodal presentation is inconsistent: " + report.failures()[0])
    dga.certified = report.passed if report is not None else None
    return NodalPreset(dga, N, K, report)


def _dga_of(p):
    return p.dga if isinstance(p, NodalPreset) else p


def morphism_G(preset, overrides=None):
    """G from the exterior algebra to the nodal dga.

    G_1(1) = 1, G_1(a) = x, G_1(b) = y, G_1(ab) = -yx, G_2(a, b) = xi,
    G_2(a, ab) = x xi, and zero on every other input.  ``overrides`` replaces
    entries (used for negative controls).
    """
    dga = _dga_of(preset)
    one = Fraction(1)
    table = {
        ("1",): {(): one},
        ("a",): {(X,): one},
        ("b",): {(Y,): one},
        ("ab",): {(Y, X): -one},
        ("a", "b"): {(XI,): one},
        ("a", "ab"): {(X, XI): one},
    }
    for k, v in (overrides or {}).items():
        table[tuple(k)] = dict(v)
    target = context_algebra(dga)
    table = {k: dga.reduce(NCPoly(v)).terms for k, v in table.items()}
    return AInfMorphism(exterior_algebra(), target, lambda n, keys: table.get(keys, {}),
                        max_arity=2, name="G")


class PullbackDomainError(ValueError):
    pass


def pullback_morphism(preset):
    """Strict map fixing x and y and sending xi to xi', on words in x, y, xi."""
    dga = _dga_of(preset)
    alg = context_algebra(dga)
    swap = {X: X, Y: Y, XI: XIP}

    def fn(n, keys):
        if n != 1:
            return {}
        (w,) = keys
        try:
            image = tuple(swap[g] for g in w)
        except KeyError as exc:
            raise PullbackDomainError(f"pullback is defined on words in x, y, xi; got {exc}") from None
        return dict(dga.normal_form(image))

    return AInfMorphism(alg, alg, fn, max_arity=1, name="P")


def certify_pullback(preset):
    """Chain-map and relation-preservation residuals of the pullback (all zero when certified)."""
    dga = _dga_of(preset)
    P = pullback_morphism(dga)

    def apply(poly):
        out = NCPoly.zero()
        for w, c in poly.items():
            out = out + NCPoly(P.component(1, (w,))).scale(c)
        return out

    residuals = {}
    for g in (X, Y, XI):
        lhs = apply(dga.generator_differential(g))
        rhs = dga.differentiate(apply(_W(g)))
        r = lhs - rhs
        if r:
            residuals[f"P(d{g}) - d(P{g})"] = r
    for rule in dga.rules:
        if set(rule.lhs) <= {X, Y, XI} and all(set(w) <= {X, Y, XI} for w in rule.rhs.words()):
            r = apply(_W(*rule.lhs)) - apply(rule.rhs)
            if r:
                residuals[f"P({rule})"] = r
    return residuals


def exp_rho(dga, order):
    """``e^{pq rho} = sum_n (pq)^n rho^n / n!`` truncated at the given order."""
    pq = Series2.monomial(1, 1, order)
    out = {}
    term = Series2.one(order)
    n = 0
    while term:
        out[(RHO,) * n] = term.scale(Fraction(1, factorial(n)))
        term = term * pq
        n += 1
    return dga.reduce(NCPoly(out))


def _exp_pq(order, sign=1):
    return Series2.monomial(1, 1, order, sign).exp()


def expected_G_beta(order):
    p, q = Series2.p(order), Series2.q(order)
    return NCPoly({(X,): p * _exp_pq(order), (Y,): q * _exp_pq(order, -1),
                   (XI,): Series2.monomial(1, 1, order)})


def expected_PG_alpha(order):
    return NCPoly({(X,): Series2.p(order), (Y,): Series2.q(order),
                   (XIP,): Series2.monomial(1, 1, order)})


@dataclass
class VerificationReport:
    order: int
    arity: int
    stages: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self):
        return bool(self.stages) and all(s["status"] == "PASS" for s in self.stages.values())

    def stage(self, name):
        return self.stages[name]

    def to_json(self, timing=False):
        out = {
            "schema_version": self.schema_version,
            "report": "nodal verify",
            "status": "PASS" if self.passed else "FAIL",
            "parameters": {"order": self.order, "arity": self.arity},
            "stages": self.stages,
        }
        if timing:
            out["timing_seconds"] = {k: round(v, 3) for k, v in self.timing.items()}
        return out

    def text(self, timing=False):
        lines = [f"nodal verify  order={self.order}  arity={self.arity}  "
                 f"{'PASS' if self.passed else 'FAIL'}"]
        for name, st in self.stages.items():
            t = f"  ({self.timing[name]:.2f}s)" if timing and name in self.timing else ""
            lines.append(f"  [{st['status']}] {name}: {st['summary']}{t}")
            for k, v in st.get("residuals", {}).items():
                lines.append(f"      {k}: {v}")
        return "\n".join(lines)


def verify_pipeline(N=10, K=5, dga=None, gamma="exp", critical_length=4):
    """Run the consistency suite and Steps 1-3; failures become report content.

    ``dga`` substitutes a (possibly mutated) presentation; ``gamma="one"``
    runs Step 3 with the constant 1 instead of e^{pq rho} (negative control).
    """
    rep = VerificationReport(N, K)
    dga = dga.with_order(N) if dga is not None else nodal_presentation(N)
    clock = time.perf_counter

    t = clock()
    cons = check_consistency(dga, critical_length)
    fails = cons.failures()
    rep.stages["consistency"] = {
        "status": "PASS" if cons.passed else "FAIL",
        "summary": (f"d^2 on {len(cons.d_squared)} generators, Leibniz on {len(cons.leibniz)} rules, "
                    f"{len(cons.critical_pairs)} critical pairs up to length {critical_length}"),
        "residuals": {f"#{i}": f for i, f in enumerate(fails[:10])},
    }
    rep.timing["consistency"] = clock() - t

    t = clock()
    G = morphism_G(dga)
    mrep = check_morphism(G, K)
    rep.stages["step1"] = {
        "status": "PASS" if mrep.passed else "FAIL",
        "summary": mrep.summary(),
        "residuals": {",".join(map(str, keys)): G.target.format(res)
                      for _, keys, res in mrep.violations[:10]},
    }
    rep.timing["step1"] = clock() - t

    t = clock()
    L = exterior_algebra()
    p, q = Series2.p(N), Series2.q(N)
    alpha = MCElement(L, {"a": p, "b": q}, N)
    beta = MCElement(L, {"a": p * _exp_pq(N), "b": q * _exp_pq(N, -1)}, N)
    st2 = {}
    res2 = {}
    for label, el in (("alpha", alpha), ("beta", beta)):
        r = check_mc(el)
        st2[f"mc({label})"] = r.passed
        if not r.passed:
            res2[f"mc({label})"] = r.text
    P = pullback_morphism(dga)
    PG = compose_morphisms(P, G)
    try:
        g_beta = pushforward_mc(G, beta)
        pg_alpha = pushforward_mc(PG, alpha)
    except MCError as exc:
        g_beta = pg_alpha = None
        res2["pushforward"] = str(exc)
    want1, want2 = dga.reduce(expected_G_beta(N)), dga.reduce(expected_PG_alpha(N))
    if g_beta is not None:
        for label, got, want in (("G_*beta", g_beta, want1), ("(PG)_*alpha", pg_alpha, want2)):
            ok = got.as_ncpoly() == want
            st2[label] = ok
            st2[f"mc({label})"] = bool(got.certified)
            if not ok:
                res2[label] = dga.format(got.as_ncpoly() - want)
            if not got.certified:
                res2[f"mc({label})"] = check_mc(got).text
    passed2 = bool(st2) and all(st2.values()) and not res2
    rep.stages["step2"] = {
        "status": "PASS" if passed2 else "FAIL",
        "summary": ("G_*beta = pe^{pq}x + qe^{-pq}y + pq xi, (PG)_*alpha = px + qy + pq xi'"
                    if passed2 else "pushforwards differ from the expected normal forms"),
        "checks": st2,
        "residuals": res2,
    }
    if g_beta is not None:
        rep.stages["step2"]["G_*beta"] = dga.format(g_beta.as_ncpoly())
        rep.stages["step2"]["(PG)_*alpha"] = dga.format(pg_alpha.as_ncpoly())
    rep.timing["step2"] = clock() - t

    t = clock()
    if g_beta is None:
        rep.stages["step3"] = {"status": "FAIL", "summary": "skipped: Step 2 produced no elements",
                               "residuals": {}}
    else:
        gam = exp_rho(dga, N) if gamma == "exp" else NCPoly.unit(Series2.one(N))
        w = h0_witness(g_beta, pg_alpha, gam)
        rep.stages["step3"] = {
            "status": "PASS" if w.passed else "FAIL",
            "summary": ("D e^{pq rho} = 0 with unit constant term: nonzero class in H^0"
                        if w.passed else "hom-complex witness fails"),
            "gamma": "e^{pq rho}" if gamma == "exp" else "1",
            "checks": {"degree_zero": w.degree_ok, "closed": w.closed,
                       "unit_constant_term": w.unit_constant},
            "residuals": {} if w.closed else {"D(gamma)": w.text},
        }
    rep.timing["step3"] = clock() - t
    return rep


def hom_residual(dga, N, gamma):
    """D(gamma) between the two Step 2 elements, for experiments."""
    G = morphism_G(dga)
    PG = compose_morphisms(pullback_morphism(dga), G)
    L = exterior_algebra()
    p, q = Series2.p(N), Series2.q(N)
    alpha = MCElement(L, {"a": p, "b": q}, N)
    beta = MCElement(L, {"a": p * _exp_pq(N), "b": q * _exp_pq(N, -1)}, N)
    return hom_diff(pushforward_mc(G, beta), pushforward_mc(PG, alpha), gamma)
