"""Exact theta-positivity on the Lagrangian Grassmannian LG(n, 2n).

Modules:

* :mod:`theta_lgr.linalg` -- exact rational matrices, ranks, minors, PSD tests, LDL.
* :mod:`theta_lgr.weyl` -- the type B/C Weyl group as signed permutations, parabolic cosets, lifts.
* :mod:`theta_lgr.symplectic` -- Sp_2n with its pinning, the theta-nonnegative monoid, the cell U*.
* :mod:`theta_lgr.lagrangian` -- points, stratum classifiers, Plücker coordinates, chart and flow.
* :mod:`theta_lgr.sampling`, :mod:`theta_lgr.verify`, :mod:`theta_lgr.cli` -- seeded data, property suites, CLI.
"""

from .lagrangian import LagrangianPoint, StratumSignature
from .linalg import Matrix
from .weyl import SignedPermutation

__all__ = ["LagrangianPoint", "Matrix", "SignedPermutation", "StratumSignature"]
__version__ = "0.1.0"
