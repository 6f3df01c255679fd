"""
Formal maps of the plane
========================

Composition, inversion, Hamiltonian flows and conjugacy.
"""

from fractions import Fraction

from nodaltwist.plane import (PlaneMap, RadialHamiltonian, compose, conjugacy_witness, ham_flow,
                              invert, jacobian_det, radial_log)
from nodaltwist.series import Series2

N = 10
s = Series2.monomial(1, 1, N)
p, q = Series2.p(N), Series2.q(N)

twist = PlaneMap(p * s.exp(), q * (-s).exp())
u = Series2.one(N) - s
cluster = PlaneMap(p * u, q * u.reciprocal())

print("twist            :", twist)
print("twist o twist    :", compose(twist, twist))
print("twist^-1         :", invert(twist))
print("det J(twist)     :", jacobian_det(twist))
print("det J(cluster)   :", jacobian_det(cluster))

# the twist is the time-one flow of -(pq)^2/2
H = RadialHamiltonian([0, 0, Fraction(-1, 2)])
print("flow == twist    :", ham_flow(H, N) == twist)

# both maps preserve pq level sets, so each has a radial logarithm
print("log(twist)       :", radial_log(twist))
print("log(cluster)     :", radial_log(cluster))

# a conjugating map, checked by recomposition
res = conjugacy_witness(twist, cluster, N)
print("method           :", res.method)
print("psi              :", res.witness)
print("psi F == G psi   :", compose(res.witness, twist) == compose(cluster, res.witness))
print("det J(psi)       :", jacobian_det(res.witness))

# a pair that is not conjugate: the report names the first obstructed degree
bad = conjugacy_witness(PlaneMap.identity(5), twist.truncate(5))
print("identity vs twist:", bad.ok, "obstruction at degree", bad.obstruction_degree)
