"""
Maurer-Cartan elements and symmetrization
=========================================

Pushforwards along A-infinity morphisms and the plane map they induce.
"""

import random
from fractions import Fraction

from nodaltwist.ainfty import (compose_morphisms, complete_to_cocycle, exp_coderivation,
                               exterior_algebra, gl2_morphism, random_endomorphism,
                               symmetric_cochain)
from nodaltwist.mc import check_mc, plane_element, pushforward_mc, symmetrization
from nodaltwist.plane import compose
from nodaltwist.series import Series2

N = 6
L = exterior_algebra()
p, q = Series2.p(N), Series2.q(N)

alpha = plane_element(L, p, q)
print("alpha =", alpha, " MC:", check_mc(alpha).passed)

f = gl2_morphism([[2, 0], [0, Fraction(1, 2)]])
print("f_* alpha =", pushforward_mc(f, alpha))
print("S(f)      =", symmetrization(f, N))

# S turns composition into composition of plane maps
rng = random.Random(5)
g, h = random_endomorphism(rng, 4), random_endomorphism(rng, 4)
lhs = symmetrization(compose_morphisms(g, h), N)
rhs = compose(symmetrization(g, N), symmetrization(h, N))
print("S(g h) == S(g) S(h):", lhs == rhs)

# exponentials of polyvector cocycles give nonlinear plane maps
one = Fraction(1)
eta = symmetric_cochain(L, 3, {("a", "a", "b"): {"a": one}, ("a", "b", "b"): {"b": 2 * one}})
eta = complete_to_cocycle(L, 3, eta.table(3), lambda keys: "ab" in keys)
print("S(exp eta) =", symmetrization(exp_coderivation(eta), N))
