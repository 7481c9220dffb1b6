"""Finite-difference approximations of the Caputo derivative and fractional solvers."""

from .errors import DomainError, NumericalError
from .weights import Scheme, WeightVector, scheme_weights, tail_correction, expansion_coeff

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NumericalError",
    "Scheme",
    "WeightVector",
    "scheme_weights",
    "tail_correction",
    "expansion_coeff",
]
