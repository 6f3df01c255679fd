"""Exact rationals and truncated power series in two commuting variables p, q.

Every coefficient in the package is a :class:`fractions.Fraction`.  A
:class:`Series2` carries its truncation order ``N`` and never stores a term of
total degree above ``N``; combining series of different orders is an error.
"""

from fractions import Fraction
from math import factorial

__all__ = [
    "Series2",
    "OrderMismatchError",
    "SeriesDomainError",
    "as_scalar",
    "format_scalar",
    "parse_scalar",
    "series_exp",
    "series_substitute",
]


class OrderMismatchError(ValueError):
    """Raised when two values with different truncation orders are combined."""


class SeriesDomainError(ValueError):
    """Raised when an operation needs a series of positive valuation."""


def as_scalar(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def format_scalar(c):
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def parse_scalar(text):
    text = str(text).strip()
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def _term_key(ij):
    i, j = ij
    return (i + j, i)


class Series2:
    """Truncated formal power series in ``p`` and ``q`` over the rationals.

    >>> N = 4
    >>> p, q = Series2.p(N), Series2.q(N)
    >>> (1 + p * q) * (1 - p * q)
    Series2(4, 1 - p^2*q^2)
    """

    __slots__ = ("order", "_terms", "_hash")

    def __init__(self, order, terms=None):
        if not isinstance(order, int) or order < 0:
            raise ValueError(f"truncation order must be a non-negative integer, got {order!r}")
        self.order = order
        clean = {}
        if terms:
            for (i, j), c in dict(terms).items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent ({i}, {j})")
                if i + j > order:
                    continue
                c = as_scalar(c)
                if c:
                    clean[(i, j)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, order, terms):
        # terms already truncated, pruned and Fraction-valued
        s = cls.__new__(cls)
        s.order = order
        s._terms = terms
        s._hash = None
        return s

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, order):
        return cls._raw(order, {})

    @classmethod
    def constant(cls, c, order):
        return cls(order, {(0, 0): c})

    @classmethod
    def one(cls, order):
        return cls.constant(1, order)

    @classmethod
    def monomial(cls, i, j, order, c=1):
        return cls(order, {(i, j): c})

    @classmethod
    def p(cls, order):
        return cls.monomial(1, 0, order)

    @classmethod
    def q(cls, order):
        return cls.monomial(0, 1, order)

    @classmethod
    def from_radial(cls, coeffs, order):
        """Series ``sum c_k (pq)^k`` from coefficients in the product variable."""
        return cls(order, {(k, k): c for k, c in enumerate(coeffs) if 2 * k <= order})

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        """Terms in canonical order: by total degree, then by the power of p."""
        return sorted(self._terms.items(), key=lambda kv: _term_key(kv[0]))

    def coeff(self, i, j):
        return self._terms.get((i, j), Fraction(0))

    def constant_term(self):
        return self._terms.get((0, 0), Fraction(0))

    def valuation(self):
        """Lowest total degree present; ``order + 1`` for the zero series."""
        if not self._terms:
            return self.order + 1
        return min(i + j for i, j in self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def homogeneous_part(self, d):
        return Series2._raw(self.order, {k: c for k, c in self._terms.items() if k[0] + k[1] == d})

    def truncate(self, order):
        if order > self.order:
            raise OrderMismatchError(f"cannot raise truncation order {self.order} to {order}")
        return Series2._raw(order, {k: c for k, c in self._terms.items() if k[0] + k[1] <= order})

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Series2):
            if other.order != self.order:
                raise OrderMismatchError(
                    f"truncation orders differ: {self.order} vs {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return Series2.constant(other, self.order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Series2._raw(self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return Series2._raw(self.order, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return Series2.zero(self.order)
        return Series2._raw(self.order, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        N = self.order
        out = {}
        b_items = list(other._terms.items())
        for (i1, j1), c1 in self._terms.items():
            d1 = i1 + j1
            for (i2, j2), c2 in b_items:
                if d1 + i2 + j2 > N:
                    continue
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return Series2._raw(N, {k: c for k, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / as_scalar(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        result = Series2.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def reciprocal(self):
        """Multiplicative inverse of a series with nonzero constant term."""
        c0 = self.constant_term()
        if not c0:
            raise SeriesDomainError("series with zero constant term is not invertible")
        N = self.order
        inv0 = 1 / c0
        rest = (self - c0).scale(inv0)  # self = c0 * (1 + rest)
        # 1/(1 + rest) = sum (-rest)^k, finite because val(rest) >= 1
        total = Series2.one(N)
        term = Series2.one(N)
        neg_rest = -rest
        for _ in range(N):
            term = term * neg_rest
            if not term:
                break
            total = total + term
        return total.scale(inv0)

    def derivative(self, var):
        """Partial derivative in ``'p'`` or ``'q'``; the result has order ``N - 1``."""
        if self.order == 0:
            raise SeriesDomainError("cannot differentiate an order-0 series")
        out = {}
        for (i, j), c in self._terms.items():
            if var == "p" and i:
                out[(i - 1, j)] = c * i
            elif var == "q" and j:
                out[(i, j - 1)] = c * j
            elif var not in ("p", "q"):
                raise ValueError(f"unknown variable {var!r}")
        return Series2(self.order - 1, out)

    def exp(self):
        return series_exp(self)

    def substitute(self, fp, fq):
        return series_substitute(self, fp, fq)

    # -- comparison and hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Series2):
            return self.order == other.order and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({(0, 0): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, frozenset(self._terms.items())))
        return self._hash

    # -- text and JSON ------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in self.items():
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("p", i), ("q", j)) if e)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Series2({self.order}, {self})"

    def to_json(self):
        return {
            "order": self.order,
            "terms": [[i, j, format_scalar(c)] for (i, j), c in self.items()],
        }

    @classmethod
    def from_json(cls, data):
        try:
            order = data["order"]
            raw = data["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"series JSON needs 'order' and 'terms': {exc}") from None
        if not isinstance(order, int):
            raise ValueError("series field 'order' must be an integer")
        terms = {}
        for entry in raw:
            i, j, c = entry
            terms[(int(i), int(j))] = parse_scalar(c)
        return cls(order, terms)


def series_exp(s):
    """``sum s^k / k!`` for a series without constant term."""
    if s.constant_term():
        raise SeriesDomainError("exp needs a series with zero constant term")
    N = s.order
    total = Series2.one(N)
    power = Series2.one(N)
    for k in range(1, N + 1):
        power = power * s
        if not power:
            break
        total = total + power.scale(Fraction(1, factorial(k)))
    return total


def series_substitute(s, fp, fq):
    """Replace p by ``fp`` and q by ``fq`` in ``s``."""
    N = s.order
    for name, f in (("p", fp), ("q", fq)):
        if f.order != N:
            raise OrderMismatchError(f"substituted {name}-series has order {f.order}, expected {N}")
        if f.constant_term():
            raise SeriesDomainError(f"substituted {name}-series must have zero constant term")
    max_i = max((i for i, _ in s._terms), default=0)
    max_j = max((j for _, j in s._terms), default=0)
    p_pow = [Series2.one(N)]
    for _ in range(max_i):
        p_pow.append(p_pow[-1] * fp)
    q_pow = [Series2.one(N)]
    for _ in range(max_j):
        q_pow.append(q_pow[-1] * fq)
    total = Series2.zero(N)
    for (i, j), c in s._terms.items():
        total = total + (p_pow[i] * q_pow[j]).scale(c)
    return total
