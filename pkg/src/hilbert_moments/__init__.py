"""Moment computations for families of Hilbert modular forms over totally
real fields of degree 1 and 2, with exact field/ideal arithmetic underneath.
"""

from .fields import (
    FieldElement,
    FieldError,
    NumberField,
    balanced_representative,
    make_field,
    totally_positive_fundamental_unit,
    totally_positive_units_mod_squares,
    unit_window,
)

__all__ = [
    "FieldElement",
    "FieldError",
    "NumberField",
    "balanced_representative",
    "make_field",
    "totally_positive_fundamental_unit",
    "totally_positive_units_mod_squares",
    "unit_window",
]

__version__ = "0.1.0"
