"""Certified Banach-algebra numerics on sequence and line convolution algebras.

Two concrete algebras are shipped: absolutely summable two-sided
sequences under convolution (:mod:`wiener.l1z`) and integrable functions
on the line under convolution (:mod:`wiener.l1r`).  Every operation
carries a machine-checkable upper bound on its norm error
(:mod:`wiener.certs`), and the headline algorithms return explicit
witnesses with certified residuals: inversion of a series bounded away
from zero on the circle (:mod:`wiener.inversion`) and division in the
line algebra under a transform lower bound (:mod:`wiener.l1r`).
"""

from .certs import CU_ZERO, CertUpper, cu, cu_add, cu_mul, cu_sum_abs
from .errors import (
    BoundOverflow,
    CertificationFailure,
    HypothesisFailure,
    InvalidInput,
    ToleranceUnreachable,
    WienerError,
)
from .l1z import L1ZSeq, delta
from .l1r import PLFunction

__version__ = "0.1.0"

__all__ = [
    "CU_ZERO",
    "CertUpper",
    "cu",
    "cu_add",
    "cu_mul",
    "cu_sum_abs",
    "L1ZSeq",
    "PLFunction",
    "delta",
    "WienerError",
    "InvalidInput",
    "BoundOverflow",
    "HypothesisFailure",
    "CertificationFailure",
    "ToleranceUnreachable",
]
