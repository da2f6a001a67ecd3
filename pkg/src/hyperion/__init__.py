"""Gamma-quotient hypergeometric identity engine."""

from .scalars import (
    DEFAULT_PRECISION_BITS,
    ApComplex,
    ExactZero,
    EXACT_ZERO,
    GammaQuotient,
    GaussianRational,
    Rational,
    check_duplication,
    check_reflection,
    eval_gamma_quotient,
    gr,
    log_gamma,
    rising_factorial,
)

__all__ = [
    "DEFAULT_PRECISION_BITS", "ApComplex", "ExactZero", "EXACT_ZERO",
    "GammaQuotient", "GaussianRational", "Rational", "check_duplication",
    "check_reflection", "eval_gamma_quotient", "gr", "log_gamma",
    "rising_factorial",
]
