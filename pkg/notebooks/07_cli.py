"""
The command line
================

Every check is also a command; exit codes are 0 (pass), 1 (residual), 2 (bad input).
"""

import json
import os
import tempfile

from nodaltwist.cli import run
from nodaltwist.nodal import X, XIP, nodal_presentation

run(["nodal", "verify", "--order", "6", "--arity", "3"])
run(["fps", "conjugate", "--f", "builtin:exp", "--g", "builtin:cluster", "--order", "8"])
run(["dga", "reduce", "--word", "rho rho x"])
run(["ainf", "transfer", "--dga", "builtin:massey"])
run(["mc", "symmetrize", "--morphism", "builtin:gl2:2,0,0,1/2", "--order", "4"])

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "broken.json")
    with open(path, "w") as fh:
        json.dump(nodal_presentation(6).without_rule((X, XIP)).to_json(), fh)
    code = run(["dga", "check", "--presentation", path])
    print("exit code for the broken presentation:", code)

print("exit code for a bad flag:", run(["fps", "invert", "--map", "builtin:exp", "--bogus"]))
