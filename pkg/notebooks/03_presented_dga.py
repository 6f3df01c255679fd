"""
A finitely presented dga
========================

Normal forms by rewriting, the differential, and the consistency suite.
"""

from nodaltwist.ncdga import NCPoly, check_consistency
from nodaltwist.nodal import RHO, XI, XIP, X, Y, nodal_presentation

dga = nodal_presentation(6)
W = NCPoly.word

print("generators:", [(g, dga.word_degree((g,))) for g in dga.precedence])
print("rules:")
for r in dga.rules:
    print("   ", r)

print("rho rho rho x  ->", dga.format(dga.reduce(W(RHO, RHO, RHO, X))))
print("xi rho         ->", dga.format(dga.reduce(W(XI, RHO))))
print("d xi           =", dga.format(dga.differentiate(W(XI))))
print("d rho^3        =", dga.format(dga.differentiate(W(RHO, RHO, RHO))))
print("xi * y         =", dga.format(dga.multiply(W(XI), W(Y))))

# d^2 = 0 on generators, Leibniz on every rule, critical pairs joinable
rep = check_consistency(dga, 4)
print("consistent:", rep.passed, "-", len(rep.critical_pairs), "critical pairs")

# removing a rule breaks Leibniz, and the residual says where
broken = dga.without_rule((X, XIP))
for line in check_consistency(broken, 4).failures():
    print("broken:", line)

# without the extra completion rule some overlaps fail to join
raw = check_consistency(nodal_presentation(6, completed=False), 4)
print("uncompleted catalog, non-joinable overlaps:",
      sorted(cp["word"] for cp in raw.critical_pairs if not cp["joinable"]))
