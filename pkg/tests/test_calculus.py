"""Algebra-valued calculus: certified integration, exp, resolvents."""

import cmath
import math

import mpmath
import pytest

from wiener import calculus, l1z
from wiener.calculus import (
    BanachCurve,
    circle_loop,
    constant_curve,
    lipschitz_curve,
    polynomial_map,
)
from wiener.certs import cu
from wiener.errors import HypothesisFailure, InvalidInput, ToleranceUnreachable
from wiener.l1z import L1ZSeq, delta

from conftest import mpc


def scalar_curve(fn, lip):
    """Scalar-valued curve embedded along the unit coefficient."""
    return lipschitz_curve(lambda t: delta(0, fn(t)), lip)


def test_path_loop_rejects_open_loop():
    with pytest.raises(InvalidInput):
        calculus.PathLoop(lambda t: t, lambda t: 1.0, cu(0.0), True)


def test_circle_loop_geometry():
    loop = circle_loop(2.0)
    assert abs(loop.point(0.25) - 2j) <= 1e-12
    assert abs(loop.derivative(0.0) - 4j * math.pi) <= 1e-12
    speed = loop.speed_upper().value
    assert speed >= 4.0 * math.pi
    assert speed <= 4.0 * math.pi * 1.02


def test_integrate_constant_exact():
    a = L1ZSeq({0: 2.0, 3: -1j})
    value, err = calculus.integrate(constant_curve(a), 0.0, 1.0, panels=4)
    assert abs(value.coeffs[0] - 2.0) <= 1e-12
    assert abs(value.coeffs[3] + 1j) <= 1e-12
    assert err.value <= 1e-9


def test_integrate_oracle():
    # integral of t*exp(it) over [0, 2] against 128-bit quadrature
    fn = lambda t: t * cmath.exp(1j * t)
    curve = scalar_curve(fn, lip=3.5)
    value, err = calculus.integrate(curve, 0.0, 2.0, tol=1e-3)
    want = mpmath.quad(lambda t: t * mpmath.exp(mpmath.mpc(0, 1) * t), [0, 2])
    assert abs(mpc(value.coeffs.get(0, 0j)) - want) <= err.value
    assert err.value <= 1e-3


def test_integrate_err_halves_with_panels():
    curve = scalar_curve(lambda t: cmath.exp(2j * t), lip=2.0)
    _, e1 = calculus.integrate(curve, 0.0, 1.0, panels=256)
    _, e2 = calculus.integrate(curve, 0.0, 1.0, panels=512)
    assert e1.value / e2.value >= 1.9


def test_integrate_validates():
    curve = constant_curve(delta(0))
    with pytest.raises(InvalidInput):
        calculus.integrate(curve, 1.0, 0.0, panels=2)
    with pytest.raises(InvalidInput):
        calculus.integrate(curve, 0.0, 1.0)
    value, err = calculus.integrate(curve, 1.0, 1.0, panels=2)
    assert value == l1z.zero() and err.value == 0.0


def test_integrate_unreachable_tolerance():
    curve = BanachCurve(lambda t: delta(0), lambda d: cu(1.0))  # modulus never decays
    with pytest.raises(ToleranceUnreachable):
        calculus.integrate(curve, 0.0, 1.0, tol=1e-3)


def test_banach_exp_scalar_oracle():
    for c in (0.3, -1.2, 0.5j, 0.4 - 0.7j):
        e = calculus.banach_exp(delta(0, c), 1e-12)
        want = mpmath.exp(mpc(complex(c)))
        assert abs(mpc(e.coeffs[0]) - want) <= 1e-11
        assert e.tail.value <= 1e-12


def test_banach_exp_shift_coefficients():
    # exp(d1) has coefficients 1/n!
    e = calculus.banach_exp(delta(1), 1e-12)
    for n in range(8):
        assert abs(e.coeffs.get(n, 0j) - 1.0 / math.factorial(n)) <= 1e-11


def test_banach_exp_rejects_bad_tol():
    with pytest.raises(InvalidInput):
        calculus.banach_exp(delta(0), 0.0)


def test_exp_flow_property():
    a = l1z.scale(0.3, L1ZSeq({1: 1.0, -1: 0.5}))
    dev = calculus.exp_flow_check(a, 0.4, 0.7, 1e-10)
    assert dev.value <= 1e-8


def test_polynomial_map_eval_and_bounds():
    pm = polynomial_map([1.0, 0.0, -2.0], radius=2.0)  # 1 - 2 z^2
    v = pm.fn(1.5).coeffs[0]
    assert abs(v - (1.0 - 2.0 * 2.25)) <= 1e-12
    assert pm.sup_norm.value >= 9.0
    assert pm.modulus(0.1).value >= 8.0 * 0.1


def test_loop_integral_of_polynomial_vanishes():
    pm = polynomial_map([0.5, 1.0, -0.25, 0.125j], radius=1.0)
    value, err = calculus.loop_integral(pm, circle_loop(1.0), steps=4096)
    assert l1z.norm_upper(value).value <= err.value


def test_resolvent_eval_scalar_oracle():
    # resolvent of c*unit at z is the scalar 1/(z - c)
    for c, z in ((0.5, 2.0), (0.3j, 1.5 + 1.5j), (-0.7, -3.0)):
        r = calculus.resolvent_eval(delta(0, c), z, 1e-12)
        want = 1.0 / (mpc(complex(z)) - mpc(complex(c)))
        assert abs(mpc(r.coeffs[0]) - want) <= 1e-10 + r.tail.value


def test_resolvent_eval_outside_region_raises():
    with pytest.raises(HypothesisFailure):
        calculus.resolvent_eval(delta(0, 2.0), 1.0, 1e-6)


def test_resolvent_loop_integral_is_2pii_unit():
    value, err = calculus.resolvent_loop_integral(delta(1), 2.0, 4096, 1e-8)
    dev = l1z.norm_upper(l1z.sub(value, delta(0, 2j * math.pi))).value
    assert dev <= err.value
    assert err.value <= 0.05


def test_resolvent_loop_integral_rejects_small_radius():
    with pytest.raises(HypothesisFailure):
        calculus.resolvent_loop_integral(delta(1), 0.5, 64, 1e-6)


def test_mean_value_bound_check():
    curve = scalar_curve(lambda t: cmath.exp(1j * t), lip=1.0)
    assert calculus.mean_value_bound_check(curve, cu(1.0), 0.0, 1.0)
    fast = scalar_curve(lambda t: 10.0 * t, lip=10.0)
    assert not calculus.mean_value_bound_check(fast, cu(1.0), 0.0, 1.0)
