"""Certified upper-bound arithmetic: soundness against 128-bit oracles."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wiener.certs import (
    CU_ONE,
    CU_ZERO,
    SLACK,
    ULP,
    CertUpper,
    cu,
    cu_abs,
    cu_add,
    cu_div,
    cu_from_float_sum,
    cu_max,
    cu_mul,
    cu_sum,
    cu_sum_abs,
    _up,
)
from wiener.errors import BoundOverflow, InvalidInput

from conftest import mp_abs_sum

finite = st.floats(
    min_value=0.0, max_value=1e100, allow_nan=False, allow_infinity=False
)
small_complex = st.complex_numbers(
    max_magnitude=1e50, allow_nan=False, allow_infinity=False
)


def test_constants():
    assert ULP == 2.0 ** -52
    assert SLACK > 1.0
    assert CU_ZERO.value == 0.0
    assert CU_ONE.value == 1.0


def test_validation():
    with pytest.raises(InvalidInput):
        CertUpper(-1.0)
    with pytest.raises(InvalidInput):
        CertUpper(float("nan"))
    with pytest.raises(BoundOverflow):
        CertUpper(float("inf"))
    assert CertUpper(0).value == 0.0  # int is normalized to float


def test_up_overflow():
    with pytest.raises(BoundOverflow):
        _up(float("inf"))


@given(finite, finite)
@settings(max_examples=200, deadline=None)
def test_add_mul_sound(a, b):
    bound = cu_add(cu(a), cu(b)).value
    assert mpmath.mpf(bound) >= mpmath.mpf(a) + mpmath.mpf(b)
    bound = cu_mul(cu(a), cu(b)).value
    assert mpmath.mpf(bound) >= mpmath.mpf(a) * mpmath.mpf(b)


@given(finite, st.floats(min_value=1e-100, max_value=1e100))
@settings(max_examples=200, deadline=None)
def test_div_sound(a, d):
    bound = cu_div(cu(a), d).value
    assert mpmath.mpf(bound) >= mpmath.mpf(a) / mpmath.mpf(d)


def test_div_rejects_nonpositive_denominator():
    with pytest.raises(InvalidInput):
        cu_div(CU_ONE, 0.0)
    with pytest.raises(InvalidInput):
        cu_div(CU_ONE, -1.0)


@given(small_complex)
@settings(max_examples=200, deadline=None)
def test_abs_sound(c):
    assert mpmath.mpf(cu_abs(c).value) >= abs(mpmath.mpc(c.real, c.imag))


def test_abs_rejects_nan():
    with pytest.raises(InvalidInput):
        cu_abs(complex(float("nan"), 0.0))


@given(st.lists(small_complex, max_size=30))
@settings(max_examples=200, deadline=None)
def test_sum_abs_sound(xs):
    assert mpmath.mpf(cu_sum_abs(xs).value) >= mp_abs_sum(xs)


@given(st.lists(finite, max_size=30))
@settings(max_examples=200, deadline=None)
def test_cu_sum_sound(xs):
    bound = cu_sum(cu(x) for x in xs).value
    assert mpmath.mpf(bound) >= mpmath.fsum(xs)


def test_sum_abs_deterministic():
    xs = [complex(0.1 * k, -0.07 * k) for k in range(50)]
    assert cu_sum_abs(xs).value == cu_sum_abs(list(xs)).value


def test_from_float_sum_sound(rng):
    for _ in range(200):
        n = int(rng.integers(1, 2000))
        terms = rng.random(n)
        total = float(np.sum(terms))
        bound = cu_from_float_sum(total, n).value
        assert mpmath.mpf(bound) >= mpmath.fsum(float(t) for t in terms)


def test_from_float_sum_rejects_bad_input():
    with pytest.raises(InvalidInput):
        cu_from_float_sum(-1.0, 5)
    with pytest.raises(InvalidInput):
        cu_from_float_sum(float("nan"), 5)
    with pytest.raises(InvalidInput):
        cu_from_float_sum(1.0, 10 ** 14)  # beyond the coarse policy


def test_max():
    assert cu_max(cu(2.0), cu(3.0)).value == 3.0
    assert cu_max(cu(3.0), cu(2.0)).value == 3.0


def test_monotone_inflation():
    # every op result strictly dominates the float computation
    a, b = 0.1, 0.2
    assert cu_add(cu(a), cu(b)).value > a + b
    assert cu_mul(cu(a), cu(b)).value > a * b
    assert math.isfinite(cu_add(cu(1e308), cu(0.0)).value)
