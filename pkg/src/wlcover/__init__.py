"""Branched coverings of S^3 over the Whitehead link and other small links.

Permutation monodromies on link diagrams, their validation and search,
associated regular covers, covering moves with homology certificates,
fundamental groups of the covering manifolds, and independent oracles.
"""

from ._kernels import BACKEND
from .errors import WLCoverError
from .links import LinkDiagram, annular_closure, builtin_diagram, parse_braid, parse_pd, whitehead_diagram
from .monodromy import Monodromy, search_monodromies, theorem2_constraints, theorem2_validate, validate
from .perm import CycleType, Permutation

__all__ = [
    "BACKEND",
    "CycleType",
    "LinkDiagram",
    "Monodromy",
    "Permutation",
    "WLCoverError",
    "annular_closure",
    "builtin_diagram",
    "parse_braid",
    "parse_pd",
    "search_monodromies",
    "theorem2_constraints",
    "theorem2_validate",
    "validate",
    "whitehead_diagram",
]

__version__ = "0.1.0"
