"""Exact scalar arithmetic."""

from .binary import (
    BinaryForm,
    MultiplicityProfile,
    binary_divides,
    binary_gcd,
    merge_coarsening,
    squarefree_decompose,
)
from .laurent import LaurentPoly, PoleError, laurent_limit
from .quotient import QuotientRingElement
from .rational import (
    DEFAULT_MODULUS,
    PrimeFieldElement,
    Rational,
    check_modulus,
    rational_to_str,
    to_rational,
)

__all__ = [
    "BinaryForm",
    "DEFAULT_MODULUS",
    "LaurentPoly",
    "MultiplicityProfile",
    "PoleError",
    "PrimeFieldElement",
    "QuotientRingElement",
    "Rational",
    "binary_divides",
    "binary_gcd",
    "check_modulus",
    "laurent_limit",
    "merge_coarsening",
    "rational_to_str",
    "squarefree_decompose",
    "to_rational",
]
