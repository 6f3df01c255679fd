"""Exact sparse linear algebra over the rationals.

Thin wrappers around sympy's ``DomainMatrix`` over ``QQ``.  Matrices are given
as lists of sparse rows (``{column: Fraction}``); vectors come back as lists of
Fractions.
"""

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

__all__ = ["rref", "solve", "solve_min_norm", "nullspace", "rank"]


def _qq(c):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _frac(x):
    return Fraction(int(x.numerator), int(x.denominator))


def _dm(rows, ncols):
    data = {}
    for r, row in enumerate(rows):
        entries = {c: _qq(v) for c, v in row.items() if v}
        if entries:
            data[r] = entries
    return DomainMatrix(data, (len(rows), ncols), QQ)


def rref(rows, ncols):
    """Reduced row echelon form as ``(sparse_rows, pivot_columns)``."""
    if not rows:
        return [], ()
    R, pivots = _dm(rows, ncols).rref()
    sdm = R.to_sparse().rep
    out = []
    for r in range(len(pivots)):
        out.append({c: _frac(v) for c, v in sdm.get(r, {}).items()})
    return out, tuple(pivots)


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def solve(rows, rhs, ncols):
    """Some solution of ``A x = rhs`` (free variables set to 0), or ``None``."""
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[ncols] = Fraction(b)
        aug.append(r)
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row.get(ncols, Fraction(0))
    return x


def nullspace(rows, ncols):
    """Basis of ``{x : A x = 0}`` as dense Fraction lists."""
    R, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(R, pivots):
            c = row.get(free)
            if c:
                v[pc] = -c
        basis.append(v)
    return basis


def solve_min_norm(rows, rhs, ncols):
    """The solution of ``A x = rhs`` orthogonal to the kernel of ``A``.

    Among all solutions this is the one with zero projection onto the kernel
    (the minimal-norm solution in the standard basis).  ``None`` when the
    system is inconsistent.
    """
    x0 = solve(rows, rhs, ncols)
    if x0 is None:
        return None
    kernel = nullspace(rows, ncols)
    if not kernel:
        return x0
    k = len(kernel)
    gram = [{j: sum(a * b for a, b in zip(kernel[i], kernel[j])) for j in range(k)}
            for i in range(k)]
    proj = [sum(a * b for a, b in zip(kernel[i], x0)) for i in range(k)]
    coeffs = solve(gram, proj, k)
    return [xi - sum(coeffs[i] * kernel[i][t] for i in range(k)) for t, xi in enumerate(x0)]
