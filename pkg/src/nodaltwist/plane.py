"""Formal maps of the plane: composition, inversion, Hamiltonian flows, conjugacy.

A :class:`PlaneMap` is the pair of images ``(fp, fq)`` of the coordinates.
``compose(outer, inner)`` substitutes ``inner`` into ``outer``, i.e. it is
``outer o inner`` as a map of points.

Hamiltonian sign convention: the vector field of ``H`` is
``X_H = -dH/dq d/dp + dH/dp d/dq``.  With it the time-1 map of ``-(pq)^2/2`` is
exactly ``(p e^{pq}, q e^{-pq})``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import _univariate as uni
from . import linalg
from .series import OrderMismatchError, Series2, SeriesDomainError, series_substitute

__all__ = [
    "PlaneMap",
    "RadialHamiltonian",
    "ConjugacyResult",
    "NotInvertibleError",
    "ShapeError",
    "compose",
    "invert",
    "jacobian_det",
    "ham_flow",
    "radial_log",
    "conjugacy_witness",
]


class NotInvertibleError(ValueError):
    pass


class ShapeError(ValueError):
    """The map does not have the radial form ``(p a(pq), q / a(pq))``."""


@dataclass(frozen=True)
class PlaneMap:
    fp: Series2
    fq: Series2

    def __post_init__(self):
        if self.fp.order != self.fq.order:
            raise OrderMismatchError(
                f"components have orders {self.fp.order} and {self.fq.order}")
        if self.fp.constant_term() or self.fq.constant_term():
            raise SeriesDomainError("a plane map must have zero constant terms")

    @property
    def order(self):
        return self.fp.order

    @classmethod
    def identity(cls, order):
        return cls(Series2.p(order), Series2.q(order))

    @classmethod
    def linear(cls, matrix, order):
        """Map with ``fp = a p + b q``, ``fq = c p + d q`` for ``[[a, b], [c, d]]``."""
        (a, b), (c, d) = matrix
        return cls(Series2(order, {(1, 0): a, (0, 1): b}),
                   Series2(order, {(1, 0): c, (0, 1): d}))

    def linear_part(self):
        return ((self.fp.coeff(1, 0), self.fp.coeff(0, 1)),
                (self.fq.coeff(1, 0), self.fq.coeff(0, 1)))

    def is_invertible(self):
        (a, b), (c, d) = self.linear_part()
        return a * d - b * c != 0

    def truncate(self, order):
        return PlaneMap(self.fp.truncate(order), self.fq.truncate(order))

    def __str__(self):
        return f"(p -> {self.fp}, q -> {self.fq})"

    def to_json(self):
        return {"order": self.order, "p_image": self.fp.to_json(), "q_image": self.fq.to_json()}

    @classmethod
    def from_json(cls, data):
        try:
            fp = Series2.from_json(data["p_image"])
            fq = Series2.from_json(data["q_image"])
        except KeyError as exc:
            raise ValueError(f"plane map JSON is missing field {exc}") from None
        if "order" in data and data["order"] != fp.order:
            raise OrderMismatchError(
                f"field 'order' is {data['order']} but 'p_image' has order {fp.order}")
        return cls(fp, fq)


def compose(outer, inner):
    if outer.order != inner.order:
        raise OrderMismatchError(f"cannot compose maps of orders {outer.order} and {inner.order}")
    return PlaneMap(series_substitute(outer.fp, inner.fp, inner.fq),
                    series_substitute(outer.fq, inner.fp, inner.fq))


def _inverse_matrix(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    if not det:
        raise NotInvertibleError("linear part is singular")
    return ((d / det, -b / det), (-c / det, a / det))


def invert(F):
    """Two-sided compositional inverse, solved one degree at a time."""
    N = F.order
    Linv = _inverse_matrix(F.linear_part())
    A = PlaneMap.linear(F.linear_part(), N)
    # F = A + R; G = A^{-1} (id - R o G), iterated once per degree
    R = PlaneMap(F.fp - A.fp, F.fq - A.fq)
    Ainv = PlaneMap.linear(Linv, N)
    G = Ainv
    ident = PlaneMap.identity(N)
    for _ in range(N):
        RG = compose(R, G)
        G_next = compose(Ainv, PlaneMap(ident.fp - RG.fp, ident.fq - RG.fq))
        if G_next == G:
            break
        G = G_next
    return G


def jacobian_det(F):
    """Jacobian determinant, truncated at order ``N - 1``."""
    fpp, fpq = F.fp.derivative("p"), F.fp.derivative("q")
    fqp, fqq = F.fq.derivative("p"), F.fq.derivative("q")
    return fpp * fqq - fpq * fqp


def _pad_order(s, order):
    # the vector field raises degree, so the N-1 truncation loses nothing at order N
    return Series2(order, s.terms)


@dataclass(frozen=True)
class RadialHamiltonian:
    """A Hamiltonian ``h(s)`` depending on ``s = pq`` only.

    ``coeffs[k]`` is the coefficient of ``s**k``; valuation in ``s`` is at least 2.
    """

    coeffs: tuple = field(default=())

    def __post_init__(self):
        c = tuple(Fraction(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if any(c[:2]):
            raise SeriesDomainError("radial Hamiltonian must have valuation >= 2 in s")

    @property
    def s_order(self):
        return len(self.coeffs) - 1

    def to_series2(self, order):
        return Series2.from_radial(self.coeffs, order)

    def truncate(self, s_order):
        return RadialHamiltonian(uni.pad(list(self.coeffs), s_order + 1))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a, b = uni.pad(list(self.coeffs), n), uni.pad(list(other.coeffs), n)
        return RadialHamiltonian([x + y for x, y in zip(a, b)])

    def __eq__(self, other):
        if not isinstance(other, RadialHamiltonian):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return uni.pad(list(self.coeffs), n) == uni.pad(list(other.coeffs), n)

    def __hash__(self):
        c = list(self.coeffs)
        while c and not c[-1]:
            c.pop()
        return hash(tuple(c))

    def __str__(self):
        return _radial_str(self.coeffs)


def _radial_str(coeffs):
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "(pq)" if k == 1 else f"(pq)^{k}"
        body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return text + "".join(f" {s} {b}" for s, b in parts[1:])


def ham_flow(H, order=None):
    """Time-1 map of the Hamiltonian vector field of ``H``.

    ``H`` may be a :class:`Series2` (read as the polynomial of its stored terms)
    or a :class:`RadialHamiltonian`.  The valuation must be at least 3 so the
    flow exponential terminates.
    """
    if isinstance(H, RadialHamiltonian):
        if order is None:
            raise ValueError("order is required for a radial Hamiltonian")
        H = H.to_series2(order + 2)
    if order is None:
        order = H.order
    if H and H.valuation() < 3:
        raise SeriesDomainError(
            f"Hamiltonian valuation {H.valuation()} < 3: the flow would not terminate")
    work = order + 1
    Hw = Series2(work, H.terms)
    xp = -Hw.derivative("q")
    xq = Hw.derivative("p")
    images = []
    for start in (Series2.p(work), Series2.q(work)):
        total = start
        term = start
        for k in range(1, work + 1):
            term = _pad_order(xp * term.derivative("p") + xq * term.derivative("q"), work)
            if not term:
                break
            term = term.scale(Fraction(1, k))
            total = total + term
        images.append(total.truncate(order))
    return PlaneMap(*images)


def _radial_profile(s, power_p, power_q, length):
    """Coefficients ``a_k`` when ``s = p^power_p q^power_q sum a_k (pq)^k``."""
    coeffs = [Fraction(0)] * length
    for (i, j), c in s.terms.items():
        k = i - power_p
        if k < 0 or j - power_q != k:
            raise ShapeError(f"term p^{i} q^{j} is not of radial shape")
        if k < length:
            coeffs[k] = c
    return coeffs


def _radial_parts(F):
    """``a(s)`` (as a list) with ``F = (p a(s), q b(s))``, checking ``a b = 1``."""
    N = F.order
    length = (N - 1) // 2 + 1
    a = _radial_profile(F.fp, 1, 0, length)
    b = _radial_profile(F.fq, 0, 1, length)
    if a[0] != 1:
        raise ShapeError("radial profile must start with 1")
    if uni.mul(a, b) != [Fraction(1)] + [Fraction(0)] * (length - 1):
        raise ShapeError("q-profile is not the reciprocal of the p-profile")
    return a


def radial_log(F):
    """Radial Hamiltonian whose time-1 flow is ``F = (p a(pq), q / a(pq))``.

    Under the module convention the flow of ``h(pq)`` is
    ``(p e^{-h'(s)}, q e^{h'(s)})``, so ``h' = -log a`` and ``h(0) = h'(0) = 0``.
    """
    a = _radial_parts(F)
    u = uni.log(a)
    dh = [-c for c in u]
    h = uni.integral(dh + [Fraction(0)])
    return RadialHamiltonian(h)


@dataclass
class ConjugacyResult:
    """Outcome of :func:`conjugacy_witness`.

    ``witness`` is ``None`` on failure; then ``obstruction_degree`` and
    ``residual`` describe the first degree whose linear system had no solution.
    """

    witness: object = None
    method: str = ""
    obstruction_degree: int = None
    residual: object = None

    @property
    def ok(self):
        return self.witness is not None

    def to_json(self):
        out = {"ok": self.ok, "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        else:
            out["obstruction_degree"] = self.obstruction_degree
            out["residual"] = self.residual.to_json() if self.residual is not None else None
        return out


def _radial_conjugator(F, G):
    """``(p c(s), q d(s))`` conjugating two radial maps, or ``None``."""
    try:
        a_f = _radial_parts(F)
        a_g = _radial_parts(G)
    except ShapeError:
        return None
    N = F.order
    length = len(a_f)
    # F = (p e^{u_F}, q e^{-u_F}); psi o F = G o psi  <=>  u_G(s c d) = u_F(s)
    u_f = uni.log(a_f)
    u_g = uni.log(a_g)
    if length < 2 or not u_g[1] or not u_f[1]:
        return None
    sigma = uni.compose(uni.revert(u_g), u_f)  # s c(s) d(s)
    # the top profile coefficient is not reached by the data at this order
    cd = sigma[1:] + [Fraction(0)]
    root = uni.rational_sqrt(cd[0])
    if root is not None:
        c = uni.sqrt(cd, root)
        d = c
    else:
        # no rational square root of the leading coefficient: put everything on q
        c = [Fraction(1)] + [Fraction(0)] * (length - 1)
        d = cd
    psi = PlaneMap(Series2(N, {(k + 1, k): x for k, x in enumerate(c)}),
                   Series2(N, {(k, k + 1): x for k, x in enumerate(d)}))
    return psi


def _monomials(degree):
    return [(degree - j, j) for j in range(degree + 1)]


def _solve_linear_part(F, G):
    """Invertible ``L`` with ``L A_F = A_G L`` (point-map convention), or ``None``."""
    (a, b), (c, d) = F.linear_part()
    (e, f), (g, h) = G.linear_part()
    AF = [[a, b], [c, d]]
    AG = [[e, f], [g, h]]
    if AF == AG:
        return ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    # unknowns L00 L01 L10 L11 ; equation (L AF - AG L)_{ik} = 0
    rows = []
    for i in range(2):
        for k in range(2):
            row = {}
            for j in range(2):
                row[2 * i + j] = row.get(2 * i + j, 0) + AF[j][k]
                row[2 * j + k] = row.get(2 * j + k, 0) - AG[i][j]
            rows.append(row)
    kernel = linalg.nullspace(rows, 4)
    if not kernel:
        return None
    candidates = list(kernel)
    for i in range(len(kernel)):
        for j in range(i + 1, len(kernel)):
            candidates.append([x + y for x, y in zip(kernel[i], kernel[j])])
            candidates.append([x - y for x, y in zip(kernel[i], kernel[j])])
    for v in candidates:
        if v[0] * v[3] - v[1] * v[2]:
            return ((v[0], v[1]), (v[2], v[3]))
    return None


def _general_conjugator(F, G):
    N = F.order
    L = _solve_linear_part(F, G)
    if L is None:
        diff = PlaneMap(F.fp.homogeneous_part(1), F.fq.homogeneous_part(1))
        residual = PlaneMap(G.fp.homogeneous_part(1) - diff.fp, G.fq.homogeneous_part(1) - diff.fq)
        return ConjugacyResult(None, "general", 1, residual)
    psi = PlaneMap.linear(L, N)
    for k in range(2, N + 1):
        base = _difference(psi, F, G)
        R = (base.fp.homogeneous_part(k), base.fq.homogeneous_part(k))
        if not R[0] and not R[1]:
            continue
        mons = _monomials(k)
        n = len(mons)
        cols = []  # image of each unknown monomial under the degree-k operator
        for comp in range(2):
            for (i, j) in mons:
                unit = Series2.monomial(i, j, N)
                z = Series2.zero(N)
                trial = PlaneMap(unit, z) if comp == 0 else PlaneMap(z, unit)
                shifted = PlaneMap(psi.fp + trial.fp, psi.fq + trial.fq)
                d = _difference(shifted, F, G)
                cols.append((d.fp.homogeneous_part(k) - R[0], d.fq.homogeneous_part(k) - R[1]))
        rows, rhs = [], []
        for comp in range(2):
            for (i, j) in mons:
                row = {}
                for col, img in enumerate(cols):
                    v = img[comp].coeff(i, j)
                    if v:
                        row[col] = v
                rows.append(row)
                rhs.append(-R[comp].coeff(i, j))
        x = linalg.solve_min_norm(rows, rhs, 2 * n)
        if x is None:
            return ConjugacyResult(None, "general", k, PlaneMap(R[0], R[1]))
        add_p = Series2(N, {m: x[t] for t, m in enumerate(mons)})
        add_q = Series2(N, {m: x[n + t] for t, m in enumerate(mons)})
        psi = PlaneMap(psi.fp + add_p, psi.fq + add_q)
    return ConjugacyResult(psi, "general")


def _difference(psi, F, G):
    lhs = compose(psi, F)
    rhs = compose(G, psi)
    return PlaneMap(lhs.fp - rhs.fp, lhs.fq - rhs.fq)


def conjugacy_witness(F, G, order=None):
    """Find ``psi`` with ``compose(psi, F) == compose(G, psi)`` to the given order.

    Radial pairs are tried with the ansatz ``psi = (p c(pq), q d(pq))`` first;
    otherwise (or if that fails) the conjugator is built degree by degree,
    taking the minimal-norm solution of each degree's linear system.  The
    result is always re-verified by composing both sides.
    """
    if F.order != G.order:
        raise OrderMismatchError(f"maps have orders {F.order} and {G.order}")
    if order is not None and order != F.order:
        F, G = F.truncate(order), G.truncate(order)
    for M in (F, G):
        if not M.is_invertible():
            raise NotInvertibleError("conjugacy needs invertible maps")
    psi = _radial_conjugator(F, G)
    if psi is not None and psi.is_invertible() and compose(psi, F) == compose(G, psi):
        return ConjugacyResult(psi, "radial")
    result = _general_conjugator(F, G)
    if result.ok and compose(result.witness, F) != compose(G, result.witness):
        d = _difference(result.witness, F, G)
        return ConjugacyResult(None, "general", min(d.fp.valuation(), d.fq.valuation()), d)
    return result
