"""Concrete algebras and random A-infinity data for tests and demos.

Random objects take a ``random.Random`` instance so that runs are
reproducible from a seed.
"""

from fractions import Fraction
from itertools import product

from .core import (FiniteDGA, GradedSpace, Homotopy, compose_morphisms, from_dga,
                   strict_morphism, transport_homotopy)
from .hochschild import HochschildCochain, cocycle_basis, cochain_unknowns, exp_coderivation

__all__ = [
    "exterior_dga",
    "exterior_algebra",
    "gl2_morphism",
    "random_scalar",
    "random_gl2",
    "random_cochain",
    "random_cocycle",
    "random_homotopy",
    "random_endomorphism",
    "truncated_polynomial_dga",
    "acyclic_extension_dga",
    "small_acyclic_dga",
    "massey_dga",
    "synthetic_dgas",
]

ONE, A, B, AB = "1", "a", "b", "ab"


def exterior_dga():
    """Exterior algebra on a, b of degree 1, with zero differential."""
    space = GradedSpace([(ONE, 0), (A, 1), (B, 1), (AB, 2)])
    one = Fraction(1)
    prod = {}
    for k in space:
        prod[(ONE, k)] = {k: one}
        prod[(k, ONE)] = {k: one}
    prod[(A, B)] = {AB: one}
    prod[(B, A)] = {AB: -one}
    return FiniteDGA(space, {}, prod, unit=ONE, name="Lambda")


_LAMBDA = None


def exterior_algebra():
    """The shared A-infinity algebra of the exterior algebra (one instance per process)."""
    global _LAMBDA
    if _LAMBDA is None:
        _LAMBDA = from_dga(exterior_dga())
    return _LAMBDA


def gl2_morphism(matrix, algebra=None, name="strict"):
    """Strict automorphism with a -> m00 a + m10 b, b -> m01 a + m11 b."""
    L = algebra or exterior_algebra()
    (m00, m01), (m10, m11) = [[Fraction(x) for x in row] for row in matrix]
    det = m00 * m11 - m01 * m10
    images = {
        ONE: {ONE: Fraction(1)},
        A: {k: v for k, v in ((A, m00), (B, m10)) if v},
        B: {k: v for k, v in ((A, m01), (B, m11)) if v},
        AB: {AB: det} if det else {},
    }
    return strict_morphism(L, L, images, name=name)


def random_scalar(rng, spread=3):
    num = rng.randint(-spread, spread)
    den = rng.randint(1, spread)
    return Fraction(num, den)


def random_gl2(rng):
    while True:
        m = [[random_scalar(rng) for _ in range(2)] for _ in range(2)]
        if m[0][0] * m[1][1] - m[0][1] * m[1][0]:
            return m


def random_cochain(rng, algebra, arities, bar_degree=0, density=0.5, normalized=True):
    tables = {}
    for n in arities:
        table = {}
        for keys, out in cochain_unknowns(algebra, n, bar_degree, normalized):
            if rng.random() < density:
                c = random_scalar(rng)
                if c:
                    table.setdefault(keys, {})[out] = c
        tables[n] = table
    return HochschildCochain(algebra, tables=tables, bar_degree=bar_degree)


_BASES = {}


def _basis(algebra, n):
    key = (id(algebra), n)
    if key not in _BASES:
        _BASES[key] = cocycle_basis(algebra, n)
    return _BASES[key]


def random_cocycle(rng, algebra=None, arities=(2, 3), terms=2):
    """Random rational combination of basis cocycles in the given arities."""
    algebra = algebra or exterior_algebra()
    tables = {}
    for n in arities:
        basis = _basis(algebra, n)
        table = {}
        for _ in range(terms):
            if not basis:
                break
            v = rng.choice(basis)
            c = random_scalar(rng)
            for keys, out in v.table(n).items():
                row = table.setdefault(keys, {})
                for k, x in out.items():
                    row[k] = row.get(k, 0) + c * x
        tables[n] = table
    return HochschildCochain(algebra, tables=tables, bar_degree=0)


def random_homotopy(rng, algebra=None, arities=(1, 2, 3), density=0.4):
    """Random normalized homotopy (components of degree -n)."""
    algebra = algebra or exterior_algebra()
    eta = random_cochain(rng, algebra, arities, bar_degree=-1, density=density)
    tables = {n: eta.table(n) for n in arities}
    return Homotopy(algebra, algebra, lambda n, keys: tables.get(n, {}).get(keys, {}),
                    max_arity=max(arities))


def random_endomorphism(rng, max_arity=5, kind=None):
    """Random A-infinity endomorphism of the exterior algebra.

    Kinds: ``"strict"`` (linear), ``"exp"`` (exponential of a random cocycle
    in arities 2..max_arity), ``"homotopy"`` (a strict or exp map moved along a
    random homotopy) and ``"composite"`` (composition of two of the above).
    """
    L = exterior_algebra()
    kinds = ("strict", "exp", "homotopy", "composite")
    kind = kind or rng.choice(kinds)
    if kind == "strict":
        return gl2_morphism(random_gl2(rng))
    if kind == "exp":
        ar = tuple(range(2, max_arity + 1))
        arities = tuple(sorted(rng.sample(ar, min(2, len(ar)))))
        return exp_coderivation(random_cocycle(rng, L, arities))
    if kind == "homotopy":
        base = random_endomorphism(rng, max_arity, rng.choice(("strict", "exp")))
        return transport_homotopy(base, random_homotopy(rng, L, tuple(range(1, min(max_arity, 3) + 1))))
    f = random_endomorphism(rng, max_arity, rng.choice(kinds[:3]))
    g = random_endomorphism(rng, max_arity, rng.choice(kinds[:3]))
    return compose_morphisms(g, f)


# -- synthetic dgas for the transfer engine ------------------------------------

def truncated_polynomial_dga():
    """Q[x, y]/(x^3, y^2) with |x| = 2, |y| = 3 and dy = x^2.

    Graded commutative; x is even, so every product sign is +1.  Its
    cohomology is spanned by 1, x, xy, x^2 y and carries a nonzero mu_3.
    """
    names = {"1": ((0,), False), "x": ((1,), False), "x2": ((2,), False),
             "y": ((0,), True), "xy": ((1,), True), "x2y": ((2,), True)}
    space = GradedSpace([("1", 0), ("x", 2), ("y", 3), ("x2", 4), ("xy", 5), ("x2y", 7)])
    prod = {}
    for k1, (e1, o1) in names.items():
        for k2, (e2, o2) in names.items():
            if o1 and o2:
                continue
            e = (e1[0] + e2[0],)
            if e[0] > 2:
                continue
            odd = o1 or o2
            for k, (ek, ok) in names.items():
                if ek == e and ok == odd:
                    prod[(k1, k2)] = {k: Fraction(1)}
    d = {"y": {"x2": Fraction(1)}, "xy": {}, "x2y": {}}
    return FiniteDGA(space, d, prod, unit="1", name="Q[x,y]/(x^3,y^2)")


def acyclic_extension_dga():
    """The exterior algebra plus a square-zero acyclic ideal spanned by u, v = du.

    Everything except the unit multiplies u and v to zero.  The cohomology is
    the exterior algebra again, reached through a nontrivial homotopy.
    """
    base = exterior_dga()
    space = GradedSpace([("1", 0), ("u", 0), ("a", 1), ("b", 1), ("v", 1), ("ab", 2)])
    prod = dict(base.prod_table)
    one = Fraction(1)
    for k in ("u", "v"):
        prod[("1", k)] = {k: one}
        prod[(k, "1")] = {k: one}
    return FiniteDGA(space, {"u": {"v": one}}, prod, unit="1", name="Lambda+acyclic")


def small_acyclic_dga():
    """Four-dimensional: Q[a]/(a^2) with |a| = 1 plus an acyclic square-zero pair u, v = du."""
    space = GradedSpace([("1", 0), ("u", 0), ("a", 1), ("v", 1)])
    one = Fraction(1)
    prod = {}
    for k in space:
        prod[("1", k)] = {k: one}
        prod[(k, "1")] = {k: one}
    return FiniteDGA(space, {"u": {"v": one}}, prod, unit="1", name="Q[a]/a^2+acyclic")


def massey_dga(twist=1):
    """Noncommutative dga with a nontrivial triple Massey product <a, b, c>.

    Basis 1; a, b, c, s, t in degree 1; ab, bc, w in degree 2.  Products
    a*b = ab, b*c = bc, s*c = w, a*t = twist*w, all others zero apart from
    the unit; ds = ab and dt = bc.  Cohomology is spanned by 1, a, b, c, w.
    """
    space = GradedSpace([("1", 0), ("a", 1), ("b", 1), ("c", 1), ("s", 1), ("t", 1),
                         ("ab", 2), ("bc", 2), ("w", 2)])
    one = Fraction(1)
    prod = {}
    for k in space:
        prod[("1", k)] = {k: one}
        prod[(k, "1")] = {k: one}
    prod[("a", "b")] = {"ab": one}
    prod[("b", "c")] = {"bc": one}
    prod[("s", "c")] = {"w": one}
    prod[("a", "t")] = {"w": Fraction(twist)}
    d = {"s": {"ab": one}, "t": {"bc": one}}
    return FiniteDGA(space, d, prod, unit="1", name="massey")


def synthetic_dgas():
    """Named finite dgas used to exercise the transfer engine."""
    return {
        "exterior": exterior_dga(),
        "truncated_polynomial": truncated_polynomial_dga(),
        "acyclic_extension": acyclic_extension_dga(),
        "small_acyclic": small_acyclic_dga(),
        "massey": massey_dga(),
    }
