"""Exact fusion-ring, premodular and super-modular data: checks, catalog and bounded search."""
from .exactnum import CycloNum, root_of_unity, sqrt_int
from .fusering import FusionRing, fp_character, validate_ring
from .premodular import PremodularData, classify_center
from .supermodular import SuperModularData, full_suite, promote

__version__ = "0.1.0"

__all__ = [
    "CycloNum",
    "FusionRing",
    "PremodularData",
    "SuperModularData",
    "classify_center",
    "fp_character",
    "full_suite",
    "promote",
    "root_of_unity",
    "sqrt_int",
    "validate_ring",
]
