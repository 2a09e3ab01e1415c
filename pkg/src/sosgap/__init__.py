"""Exact computations on faces of the cones of nonnegative forms and sums of squares."""

from .exact import Matrix, as_rational, rational_str
from .forms import Form, monomial_basis
from .ideals import (
    FormSubspace,
    PointSet,
    check_d_independence,
    double_vanishing_space,
    extra_constraint_basis,
    squares_span,
    vanishing_space,
)

__version__ = "0.1.0"

__all__ = [
    "Form",
    "FormSubspace",
    "Matrix",
    "PointSet",
    "as_rational",
    "check_d_independence",
    "double_vanishing_space",
    "extra_constraint_basis",
    "monomial_basis",
    "rational_str",
    "squares_span",
    "vanishing_space",
]
