"""Exact verification of the nodal-sphere Dehn twist computation.

Subpackages and modules:

* :mod:`nodaltwist.series` exact power series in p, q
* :mod:`nodaltwist.plane` formal automorphisms of the plane
* :mod:`nodaltwist.ncdga` presented dgas and rewriting
* :mod:`nodaltwist.ainfty` A-infinity algebras, Hochschild cochains, transfer
* :mod:`nodaltwist.mc` Maurer-Cartan elements and symmetrization
* :mod:`nodaltwist.nodal` the nodal preset and the end-to-end pipeline
"""

from .series import Series2, OrderMismatchError, SeriesDomainError, series_exp, series_substitute
from .plane import PlaneMap, RadialHamiltonian, compose, invert, jacobian_det, ham_flow, radial_log, conjugacy_witness
from .ncdga import NCPoly, PresentedDGA, check_consistency

__version__ = "0.1.0"
