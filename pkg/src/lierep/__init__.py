"""Numerical toolkit for learning and using Lie group representations."""

__version__ = "0.1.0"

from .algebra import (
    StructureConstants,
    algebra_by_name,
    so3_constants,
    so21_constants,
    so31_constants,
    validate,
)
from .reps import (
    AlgebraRep,
    RepLabel,
    direct_sum,
    rep_so21,
    rep_so31,
    spin_rep_so3,
    tensor_product,
    trivial_rep,
    vector_rep,
)

__all__ = [
    "StructureConstants",
    "AlgebraRep",
    "RepLabel",
    "algebra_by_name",
    "so3_constants",
    "so21_constants",
    "so31_constants",
    "validate",
    "spin_rep_so3",
    "rep_so21",
    "rep_so31",
    "direct_sum",
    "tensor_product",
    "trivial_rep",
    "vector_rep",
]
