"""Truncated one-variable series as lists of Fractions (index = exponent).

These are the radial profiles ``a(s)``, ``h(s)`` with ``s = pq`` used by the
formal-plane module.  All lists passed to one function have the same length.
"""

from fractions import Fraction
from math import factorial

from .series import SeriesDomainError


def pad(coeffs, length):
    coeffs = [Fraction(c) for c in coeffs[:length]]
    return coeffs + [Fraction(0)] * (length - len(coeffs))


def mul(a, b):
    n = len(a)
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(n - i):
            out[i + j] += x * b[j]
    return out


def reciprocal(a):
    if not a[0]:
        raise SeriesDomainError("radial series with zero constant term is not invertible")
    n = len(a)
    out = [Fraction(0)] * n
    out[0] = 1 / a[0]
    for k in range(1, n):
        out[k] = -sum(a[i] * out[k - i] for i in range(1, k + 1)) / a[0]
    return out


def derivative(a):
    return [a[k] * k for k in range(1, len(a))] + [Fraction(0)]


def integral(a):
    """Antiderivative with zero constant term; the top coefficient is dropped."""
    return [Fraction(0)] + [a[k] / (k + 1) for k in range(len(a) - 1)]


def exp(a):
    if a[0]:
        raise SeriesDomainError("exp needs zero constant term")
    n = len(a)
    total = [Fraction(0)] * n
    total[0] = Fraction(1)
    power = list(total)
    for k in range(1, n):
        power = mul(power, a)
        for i in range(n):
            total[i] += power[i] / factorial(k)
    return total


def log(a):
    """Logarithm of a series with constant term 1."""
    if a[0] != 1:
        raise SeriesDomainError("log needs constant term 1")
    # log a = integral(a' / a)
    da = [a[k + 1] * (k + 1) for k in range(len(a) - 1)] + [Fraction(0)]
    q = mul(da, reciprocal(a))
    return [Fraction(0)] + [q[k] / (k + 1) for k in range(len(a) - 1)]


def sqrt(a, root0):
    """Square root with prescribed constant term ``root0`` (``root0**2 == a[0]``)."""
    if root0 * root0 != a[0] or not root0:
        raise SeriesDomainError("bad square root of the constant term")
    n = len(a)
    r = [Fraction(0)] * n
    r[0] = Fraction(root0)
    for k in range(1, n):
        acc = a[k] - sum(r[i] * r[k - i] for i in range(1, k))
        r[k] = acc / (2 * r[0])
    return r


def compose(a, b):
    """``a(b(s))`` for ``b`` without constant term."""
    if b[0]:
        raise SeriesDomainError("inner series must have zero constant term")
    n = len(a)
    out = [Fraction(0)] * n
    power = [Fraction(0)] * n
    power[0] = Fraction(1)
    for k in range(n):
        if a[k]:
            for i in range(n):
                out[i] += a[k] * power[i]
        power = mul(power, b)
    return out


def revert(a):
    """Compositional inverse of ``a`` (``a[0] == 0``, ``a[1] != 0``)."""
    if a[0] or not a[1]:
        raise SeriesDomainError("reversion needs a[0] == 0 and a[1] != 0")
    n = len(a)
    # Newton-free order-by-order solve of a(r(s)) = s
    r = [Fraction(0)] * n
    if n > 1:
        r[1] = 1 / a[1]
    for k in range(2, n):
        trial = compose(a, r)
        r[k] = -trial[k] / a[1]
    return r


def rational_sqrt(c):
    """Exact square root of a non-negative rational, or ``None``."""
    from math import isqrt

    c = Fraction(c)
    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None
