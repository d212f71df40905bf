"""Laplacians, Green's operator and boundary value problems on the full shift.

Rational results are returned as "p/q" strings; `fraction` converts them.
"""

from fractions import Fraction

from ._core import (
    ShiftlapError,
    apply_H,
    dirichlet_form,
    green_apply,
    green_kernel,
    neumann_derivatives,
    run,
    solve_dirichlet,
    verify,
)


def fraction(value: str) -> Fraction:
    return Fraction(value)


__all__ = [
    "ShiftlapError",
    "apply_H",
    "dirichlet_form",
    "fraction",
    "green_apply",
    "green_kernel",
    "neumann_derivatives",
    "run",
    "solve_dirichlet",
    "verify",
]
