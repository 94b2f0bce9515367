"""Causal polytopes of bipartite correlations and their violation.

The :mod:`causalpoly.polytope` subpackage characterizes the polytope of
causally ordered correlations exactly (vertices, facets, bounds, symmetry
orbits); :mod:`causalpoly.process` implements the process-matrix calculus
that generalizes quantum states and channels without assuming a global
order; :mod:`causalpoly.sdp` and :mod:`causalpoly.seesaw` maximize
inequality violations by alternating semidefinite optimization.
"""

from . import linalg, polytope, process, sdp, seesaw

__version__ = "0.1.0"

__all__ = ["linalg", "polytope", "process", "sdp", "seesaw", "__version__"]
