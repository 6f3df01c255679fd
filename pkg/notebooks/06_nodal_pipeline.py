"""
The nodal pipeline
==================

Consistency, the morphism G, the two pushforwards, and the degree-zero
element e^{pq rho} that identifies them.
"""

from nodaltwist.ncdga import NCPoly
from nodaltwist.nodal import RHO_RULES, hom_residual, nodal_presentation, verify_pipeline
from nodaltwist.series import Series2

rep = verify_pipeline(10, 5)
print(rep.text(timing=True))

# negative controls
print()
print(verify_pipeline(6, 3, gamma="one").text())
print()
dga = nodal_presentation(6)
for lhs in RHO_RULES:
    r = verify_pipeline(6, 3, dga=dga.without_rule(lhs))
    print("without", " ".join(lhs), "->", r.stage("step3")["status"],
          r.stage("step3")["residuals"])

# D applied to the constant 1 is the difference of the two elements
print("D(1) =", dga.format(hom_residual(dga, 6, NCPoly.unit(Series2.one(6)))))
