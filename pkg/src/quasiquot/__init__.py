"""Quotients of finite linear group actions: exact invariant theory plus numerical lifting."""

__version__ = "0.1.0"

from .exact import CycloScalar, ExactMatrix, solve_linear
from .group import Representation, close, isotropy_classes
from .invariants import generators, molien, orbit_map, relations
from .lifting import PathSpec, fiber, lift_along_path, monodromy
from .poly import Poly, WeightSystem
from .quasiiso import find_quasi_isomorphism, graded_automorphism, real_form
from .quasilinear import QuotientMap, quasilinear_part, scaled_family
from .strata import real_membership, stratify

__all__ = [
    "__version__",
    "CycloScalar",
    "ExactMatrix",
    "solve_linear",
    "Representation",
    "close",
    "isotropy_classes",
    "generators",
    "molien",
    "orbit_map",
    "relations",
    "PathSpec",
    "fiber",
    "lift_along_path",
    "monodromy",
    "Poly",
    "WeightSystem",
    "find_quasi_isomorphism",
    "graded_automorphism",
    "real_form",
    "QuotientMap",
    "quasilinear_part",
    "scaled_family",
    "real_membership",
    "stratify",
]
