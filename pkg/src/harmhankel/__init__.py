"""Verification toolkit for the harmonic family D0_H(alpha, M) and the H21 bound on P(M)."""

from .errors import DegenerateInputError, DomainError, RadicandError

__version__ = "0.1.0"

__all__ = ["DomainError", "DegenerateInputError", "RadicandError", "__version__"]
