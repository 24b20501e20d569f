"""Finite-volume flux-relaxation solvers for entropy-dissipative viscous
conservation laws: 1-D scalar laws (viscous Burgers) and the 1-D/2-D
compressible Navier-Stokes equations.

The viscous system is replaced by a hyperbolic system with a stiff source
that relaxes an artificial flux variable toward the viscous flux; upwind,
Roe-type, and implicit-explicit generalized-Riemann-problem (IMEX-GRP)
schemes then advance it with hyperbolic CFL steps dt = O(dx).
"""

from . import core, errors

__all__ = ["core", "errors"]
__version__ = "0.1.0"
