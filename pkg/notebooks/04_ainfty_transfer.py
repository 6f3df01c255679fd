"""
A-infinity structures and homotopy transfer
===========================================

Structure maps from a dga, relation checks, transfer to cohomology,
and exponentials of Hochschild cocycles.
"""

import random
from fractions import Fraction

from nodaltwist.ainfty import (check_ainf_relations, check_morphism, complete_to_cocycle,
                               exp_coderivation, exterior_algebra, hkr_symmetrize,
                               hochschild_differential, massey_dga, random_cocycle,
                               symmetric_cochain, synthetic_dgas, transfer)

L = exterior_algebra()
print("mu2(a, b) =", L.mu(2, ("a", "b")), " mu2(b, a) =", L.mu(2, ("b", "a")))
print(check_ainf_relations(L, 5).summary())

# transfer to cohomology along the Hodge contraction
for name, dga in sorted(synthetic_dgas().items()):
    res = transfer(dga, None, 5)
    print(f"{name:22s} H = {res.algebra.basis()}",
          "relations", check_ainf_relations(res.algebra, 5).passed,
          "G", check_morphism(res.G, 4).passed)

# a triple product survives in cohomology
H = transfer(massey_dga(), None, 3).algebra
print("mu3(a, b, c) =", H.mu(3, ("a", "b", "c")))

# a polyvector a^2 b d/da + 2 a b^2 d/db as a symmetric cochain
one = Fraction(1)
eta = symmetric_cochain(L, 3, {("a", "a", "b"): {"a": one}, ("a", "b", "b"): {"b": 2 * one}})
print("zero extension closed:", hochschild_differential(eta).is_zero(4))
eta = complete_to_cocycle(L, 3, eta.table(3), lambda keys: "ab" in keys)
print("completed closed     :", hochschild_differential(eta).is_zero(4))
print("symmetrization       :", hkr_symmetrize(eta, 3))

f = exp_coderivation(eta)
print("exp(eta) is a morphism:", check_morphism(f, 5).passed)

# exponentials of random cocycles
rng = random.Random(0)
print("random exp morphisms  :",
      all(check_morphism(exp_coderivation(random_cocycle(rng, L, (2, 3))), 4).passed for _ in range(5)))
