"""
Truncated power series in p and q
=================================

Exact rational coefficients, total-degree truncation.
"""

from fractions import Fraction

from nodaltwist.series import Series2

N = 8
p, q = Series2.p(N), Series2.q(N)
s = p * q

# exp of pq and its inverse
e = s.exp()
print("exp(pq)           =", e)
print("exp(pq) exp(-pq)  =", e * (-s).exp())

# substitution (p, q) -> (p e^{pq}, q e^{-pq}) keeps pq fixed
print("pq after twist    =", s.substitute(p * e, q * (-s).exp()))

# reciprocal of 1 - pq
u = Series2.one(N) - s
print("1/(1-pq)          =", u.reciprocal())

# truncation drops everything above the order
print("truncate(exp, 4)  =", e.truncate(4))
print("coeff of p^2 q^2  =", e.coeff(2, 2), "==", Fraction(1, 2))

# JSON round trip
print("json              =", s.to_json())
