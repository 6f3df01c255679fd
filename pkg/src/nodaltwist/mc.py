"""Maurer-Cartan elements with power-series coefficients.

An MC element lives in a context, either a :class:`~nodaltwist.ncdga.PresentedDGA`
(keys are normal words) or an A-infinity algebra with a finite basis.  For a
dga the MC equation is ``d(alpha) + alpha*alpha = 0``; for an A-infinity
algebra it is ``sum_n mu_n(alpha, ..., alpha) = 0``, which for a dga equals
minus the former.

Pushing forward along a morphism psi gives ``sum_n psi_n(alpha, ..., alpha)``;
the sum stops because every coefficient has zero constant term.
"""

from dataclasses import dataclass
from fractions import Fraction

from ._vec import vadd
from .ainfty.core import AInfAlgebra, DGAAlgebra, from_dga
from .ncdga import NCPoly, PresentedDGA
from .plane import PlaneMap
from .series import Series2, OrderMismatchError

__all__ = [
    "MCError",
    "MCElement",
    "MCReport",
    "check_mc",
    "mc_residual",
    "pushforward_mc",
    "hom_diff",
    "H0Witness",
    "h0_witness",
    "symmetrization",
    "plane_element",
]


class MCError(ValueError):
    pass


_WRAPPED = {}


def context_algebra(ctx):
    """The A-infinity algebra behind a context (presented dgas are wrapped once)."""
    if isinstance(ctx, PresentedDGA):
        alg = _WRAPPED.get(id(ctx))
        if alg is None or alg.dga is not ctx:
            alg = from_dga(ctx)
            _WRAPPED[id(ctx)] = alg
        return alg
    if isinstance(ctx, AInfAlgebra):
        return ctx
    raise MCError(f"not an MC context: {type(ctx).__name__}")


def _same_context(a, b):
    if a is b:
        return True
    if isinstance(a, DGAAlgebra) and b is a.dga:
        return True
    if isinstance(b, DGAAlgebra) and a is b.dga:
        return True
    return False


class MCElement:
    """A degree-1 element with Series2 coefficients, zero constant terms, in a context."""

    def __init__(self, context, payload, order=None):
        self.context = context
        if isinstance(payload, NCPoly):
            payload = payload.terms
        payload = {k: v for k, v in dict(payload).items() if v}
        alg = context_algebra(context)
        orders = set()
        for k, c in payload.items():
            if not isinstance(c, Series2):
                raise MCError(f"coefficient of {k!r} must be a power series with zero constant term")
            if c.constant_term():
                raise MCError(f"coefficient of {k!r} has a nonzero constant term")
            if alg.degree(k) != 1:
                raise MCError(f"MC elements have degree 1; {k!r} has degree {alg.degree(k)}")
            orders.add(c.order)
        if order is None:
            if len(orders) != 1:
                if not orders:
                    raise MCError("the zero element needs an explicit truncation order")
                raise OrderMismatchError(f"coefficients have different orders {sorted(orders)}")
            order = orders.pop()
        elif orders and orders != {order}:
            raise OrderMismatchError(f"coefficient orders {sorted(orders)} differ from {order}")
        if isinstance(context, PresentedDGA) and order != context.order:
            raise OrderMismatchError(
                f"element order {order} differs from the presentation order {context.order}")
        self.payload = payload
        self.order = order
        self.certified = None

    @property
    def algebra(self):
        return context_algebra(self.context)

    def as_ncpoly(self):
        return NCPoly(self.payload)

    def coeff(self, key):
        return self.payload.get(key, Series2.zero(self.order))

    def format(self):
        if isinstance(self.context, PresentedDGA):
            return self.context.format(self.as_ncpoly())
        return self.algebra.format(self.payload)

    def __str__(self):
        return self.format()

    def __eq__(self, other):
        if not isinstance(other, MCElement):
            return NotImplemented
        return _same_context(self.context, other.context) and self.payload == other.payload

    def to_json(self):
        if isinstance(self.context, PresentedDGA):
            key = self.context.word_key
            element = self.as_ncpoly().to_json(self.order, key)
        else:
            element = [{"coeff": c.to_json(), "name": k} for k, c in sorted(self.payload.items())]
        return {"context": getattr(self.context, "name", ""), "order": self.order,
                "element": element}

    @classmethod
    def from_json(cls, context, data):
        try:
            elem = data["element"]
            order = data.get("order")
        except (KeyError, TypeError):
            raise ValueError("MC element JSON needs an 'element' field") from None
        if isinstance(context, PresentedDGA):
            payload = NCPoly.from_json(elem).terms
        else:
            try:
                payload = {e["name"]: Series2.from_json(e["coeff"]) for e in elem}
            except (KeyError, TypeError):
                raise ValueError("MC element entries need 'name' and 'coeff'") from None
        return cls(context, payload, order)


def plane_element(context, fp, fq, a="a", b="b"):
    """The element ``fp*a + fq*b`` (default ``p*a + q*b`` style elements of the exterior algebra)."""
    return MCElement(context, {a: fp, b: fq}, fp.order)


@dataclass
class MCReport:
    passed: bool
    residual: dict
    text: str

    def to_json(self):
        return {"status": "PASS" if self.passed else "FAIL", "residual": self.text}


def _powers(alpha, n_max, keep=None):
    """Yield ``(n, combos)`` where combos maps key tuples of length n to coefficient products."""
    terms = list(alpha.payload.items())
    level = {(): None}
    for n in range(1, n_max + 1):
        nxt = {}
        for keys, c in level.items():
            for k, v in terms:
                prod = v if c is None else c * v
                if prod:
                    nxt[keys + (k,)] = prod
        level = nxt
        if not level:
            return
        if keep is None or n in keep:
            yield n, level


def mc_residual(alpha):
    ctx = alpha.context
    if isinstance(ctx, PresentedDGA):
        a = alpha.as_ncpoly()
        return (ctx.differentiate(a) + ctx.multiply(a, a)).terms if a else {}
    alg = ctx
    arities = alg.arities()
    acc = {}
    for n, combos in _powers(alpha, min(alpha.order, max(arities, default=0)), keep=arities):
        for keys, c in combos.items():
            vadd(acc, alg.mu(n, keys), c)
    return acc


def _format(ctx, vec):
    if isinstance(ctx, PresentedDGA):
        return ctx.format(NCPoly(vec))
    return ctx.format(vec)


def check_mc(alpha):
    res = mc_residual(alpha)
    alpha.certified = not res
    return MCReport(not res, res, _format(alpha.context, res))


def pushforward_mc(psi, alpha, certify=True):
    """``sum_n psi_n(alpha, ..., alpha)`` as an MC element of the target."""
    if not _same_context(psi.source, alpha.context) and psi.source is not alpha.algebra:
        raise MCError("the morphism's source is not the element's context")
    if alpha.certified is None:
        check_mc(alpha)
    if alpha.certified is False:
        raise MCError("cannot push forward an element that fails the MC equation")
    n_max = alpha.order if psi.max_arity is None else min(alpha.order, psi.max_arity)
    acc = {}
    for n, combos in _powers(alpha, n_max):
        for keys, c in combos.items():
            vadd(acc, psi.component(n, keys), c)
    target = psi.target
    ctx = target.dga if isinstance(target, DGAAlgebra) else target
    out = MCElement(ctx, acc, alpha.order)
    if certify:
        check_mc(out)
    return out


def _as_poly(x):
    if isinstance(x, MCElement):
        return x.as_ncpoly()
    if isinstance(x, NCPoly):
        return x
    return NCPoly(x)


def hom_diff(alpha, beta, gamma, context=None):
    """``D gamma = d gamma + alpha gamma - (-1)^|gamma| gamma beta`` in a presented dga.

    On degree 0 this is ``d gamma + alpha gamma - gamma beta``.  The sign sits on
    the right-hand product so that D squares to zero when both ends are MC.
    """
    ctx = context
    for x in (alpha, beta):
        if isinstance(x, MCElement):
            if ctx is None:
                ctx = x.context
            elif not _same_context(ctx, x.context):
                raise MCError("hom_diff arguments live in different contexts")
    if not isinstance(ctx, PresentedDGA):
        raise MCError("hom_diff needs a presented dga context")
    a, b, g = _as_poly(alpha), _as_poly(beta), _as_poly(gamma)
    out = NCPoly.zero()
    for deg, part in sorted(ctx.homogeneous_parts(g).items()):
        s = -1 if deg % 2 else 1
        out = out + ctx.differentiate(part) + ctx.multiply(a, part) - ctx.multiply(part, b).scale(s)
    return out


@dataclass
class H0Witness:
    """Certificate that a degree-0 element is closed with an invertible constant term."""

    degree_ok: bool
    closed: bool
    unit_constant: bool
    residual: NCPoly
    text: str

    @property
    def passed(self):
        return self.degree_ok and self.closed and self.unit_constant

    def to_json(self):
        return {
            "status": "PASS" if self.passed else "FAIL",
            "degree_zero": self.degree_ok,
            "closed": self.closed,
            "unit_constant_term": self.unit_constant,
            "residual": self.text,
        }


def h0_witness(alpha, beta, gamma):
    ctx = alpha.context
    g = _as_poly(gamma)
    degs = ctx.degrees(g)
    res = hom_diff(alpha, beta, g)
    c0 = g.coeff(())
    if isinstance(c0, Series2):
        c0 = c0.constant_term()
    return H0Witness(degs <= {0}, res.is_zero(), bool(c0), res, ctx.format(res))


def symmetrization(phi, order):
    """The plane map read off the a- and b-coefficients of ``phi_*(p a + q b)``."""
    alg = phi.source
    for x in (phi.source, phi.target):
        names = getattr(x, "space", None)
        if names is None or "a" not in names or "b" not in names \
                or x.degree("a") != 1 or x.degree("b") != 1:
            raise MCError("symmetrization needs an endomorphism of the exterior algebra")
    alpha = plane_element(alg, Series2.p(order), Series2.q(order))
    alpha.certified = True
    out = pushforward_mc(phi, alpha, certify=False)
    extra = {k: v for k, v in out.payload.items() if k not in ("a", "b")}
    if extra:
        raise MCError(f"pushforward has components outside span(a, b): {sorted(extra)}")
    return PlaneMap(out.coeff("a"), out.coeff("b"))


def random_plane_element(rng, context, order, a="a", b="b"):
    """``f a + g b`` with random f, g of zero constant term (always MC in the exterior algebra)."""
    from .ainfty.samples import random_scalar

    def series():
        terms = {}
        for _ in range(rng.randint(1, 4)):
            i, j = rng.randint(0, 2), rng.randint(0, 2)
            if i + j and i + j <= order:
                terms[(i, j)] = random_scalar(rng)
        if not terms:
            terms[(1, 0) if rng.random() < 0.5 else (0, 1)] = Fraction(1)
        return Series2(order, terms)

    return MCElement(context, {a: series(), b: series()}, order)
