"""Exact combinatorial spin and spin-c structures on triangulated manifolds."""

from .binary_groups import (
    LiftedPermutation,
    Permutation,
    canonical_lift,
    cycle_lift,
    element_order,
    enumerate_cover,
    transposition_lift,
)
from .complex import DeltaComplex, TriangulationError, load, orient_and_w1, parse_and_validate
from .spin import NonOrientableError, canonical_trivialization, solve_spin_structures
from .spinc import find_spinc

__version__ = "0.1.0"

__all__ = [
    "DeltaComplex",
    "LiftedPermutation",
    "NonOrientableError",
    "Permutation",
    "TriangulationError",
    "canonical_lift",
    "canonical_trivialization",
    "cycle_lift",
    "element_order",
    "enumerate_cover",
    "find_spinc",
    "load",
    "orient_and_w1",
    "parse_and_validate",
    "solve_spin_structures",
    "transposition_lift",
]
