"""Certified upper-bound arithmetic.

Every norm-like quantity in this package is carried as a :class:`CertUpper`,
a single nonnegative double guaranteed to lie at or above the true real
quantity it bounds.  Soundness against floating-point rounding is obtained
by a fixed multiplicative slack policy: the result of every floating
addition, multiplication or division is multiplied by ``1 + 4*2**-52``,
which dominates the worst-case rounding of both the operation and the
slack multiply itself.

Sums are evaluated in a fixed left-to-right order over canonically sorted
inputs so certificates are bit-reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import BoundOverflow, InvalidInput

#: one unit in the last place of the double mantissa
ULP = 2.0 ** -52

#: multiplicative rounding slack applied after every floating operation
SLACK = 1.0 + 4.0 * ULP

#: below this, relative slack no longer dominates subnormal rounding
_TINY = 1e-300

#: absolute cushion absorbing the worst-case subnormal rounding error
_GUARD = 1e-307


def _up(x: float) -> float:
    """Inflate a freshly computed float upward by the slack policy."""
    y = x * SLACK
    if math.isinf(y):
        raise BoundOverflow("bound overflow")
    return y


@dataclass(frozen=True)
class CertUpper:
    """A certified upper bound on a nonnegative real quantity.

    Invariant: ``value`` is finite, nonnegative, and at or above the true
    quantity for which it was produced.
    """

    value: float

    def __post_init__(self):
        v = self.value
        if isinstance(v, int):
            v = float(v)
            object.__setattr__(self, "value", v)
        if math.isnan(v):
            raise InvalidInput("NaN is not a valid bound")
        if math.isinf(v):
            raise BoundOverflow("bound overflow")
        if v < 0.0:
            raise InvalidInput("negative value cannot be an upper bound on a norm")


CU_ZERO = CertUpper(0.0)
CU_ONE = CertUpper(1.0)


def cu(value: float) -> CertUpper:
    """Wrap an exactly known nonnegative float as a bound."""
    return CertUpper(float(value))


def _guarded(x: float) -> float:
    """Cushion a nonzero result against subnormal underflow."""
    if x < _TINY:
        x += _GUARD
    return x


def cu_abs(c: complex) -> CertUpper:
    """Upper bound on ``|c|`` for a complex scalar."""
    if _has_nan(c):
        raise InvalidInput("NaN coefficient")
    if c == 0:
        return CU_ZERO
    return CertUpper(_up(_guarded(abs(c))))


def cu_add(a: CertUpper, b: CertUpper) -> CertUpper:
    return CertUpper(_up(a.value + b.value))


def cu_mul(a: CertUpper, b: CertUpper) -> CertUpper:
    if a.value == 0.0 or b.value == 0.0:
        return CU_ZERO
    return CertUpper(_up(_guarded(a.value * b.value)))


def cu_div(a: CertUpper, denom_lower: float) -> CertUpper:
    """Upper bound on ``a / d`` given a positive lower bound on ``d``.

    The caller is responsible for ``denom_lower`` being a true lower
    bound; the slack multiply absorbs the rounding of the division.
    """
    if not denom_lower > 0.0:
        raise InvalidInput("denominator lower bound must be positive")
    if a.value == 0.0:
        return CU_ZERO
    return CertUpper(_up(_guarded(a.value / denom_lower)))


def cu_max(a: CertUpper, b: CertUpper) -> CertUpper:
    return a if a.value >= b.value else b


def cu_sum_abs(xs: Iterable[complex]) -> CertUpper:
    """Upper bound on ``sum(|x|)``, left-to-right with per-step slack."""
    s = 0.0
    for x in xs:
        if _has_nan(x):
            raise InvalidInput("NaN in summand")
        t = abs(x)
        if t != 0.0:
            t = _guarded(t)
        s = _up(s + _up(t))
    return CertUpper(s)


def cu_sum(bounds: Iterable[CertUpper]) -> CertUpper:
    """Left-to-right certified sum of upper bounds."""
    s = 0.0
    for b in bounds:
        s = _up(s + b.value)
    return CertUpper(s)


def cu_from_float_sum(total: float, nterms: int) -> CertUpper:
    """Promote a vectorized nonnegative sum to a certified bound.

    ``total`` must be the floating sum (in any association order) of
    ``nterms`` nonnegative doubles that are themselves exact or already
    upper bounds.  Recursive/pairwise summation of nonnegative terms has
    relative error below ``nterms * 2**-53``, which this inflation covers.
    """
    if math.isnan(total):
        raise InvalidInput("NaN in summand")
    if total < 0.0:
        raise InvalidInput("negative total for a nonnegative sum")
    growth = 1.0 + (nterms + 4.0) * ULP
    if growth > 1.01:
        # absurdly long sums would need a sharper analysis
        raise InvalidInput("sum too long for the coarse inflation policy")
    return CertUpper(_up(total * growth))


def _has_nan(c: complex) -> bool:
    c = complex(c)
    return math.isnan(c.real) or math.isnan(c.imag)
