"""Tests for the quadrature engine."""

import math

import numpy as np
import pytest

from gaussloop import quad
from gaussloop.quad import QuadratureConfig, QuadratureResult

from known_integrals import KNOWN_INTEGRALS


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=-1.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_evals=0)
    with pytest.raises(ValueError):
        QuadratureConfig(scheme="monte_carlo")


def test_result_arithmetic():
    r = QuadratureResult(2.0, 0.1, 10, True) + QuadratureResult(1.0, 0.2, 5, False)
    assert r.value == 3.0
    assert r.error_estimate == pytest.approx(0.3)
    assert r.evals == 15
    assert not r.converged
    s = QuadratureResult(2.0, 0.1, 10, True).scaled(-3.0)
    assert s.value == -6.0
    assert s.error_estimate == pytest.approx(0.3)


def test_polynomial():
    res = quad.integrate_1d(lambda x: 2.0 * x, 0.0, 1.0)
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_gaussian_moment_semi_infinite():
    res = quad.integrate_1d(
        lambda u: u * math.exp(-u * u), 0.0, math.inf, decay="exponential"
    )
    assert res.value == pytest.approx(0.5, abs=1e-10)


def test_tadpole_kernel_small_c():
    # c = 0 reduces to the plain third moment; c = 1e-6 must agree closely
    base = quad.integrate_1d(
        lambda u: u**3 * math.exp(-u * u) / (u * u), 1e-12, math.inf,
        decay="exponential",
    )
    small = quad.integrate_1d(
        lambda u: u**3 * math.exp(-u * u) / (u * u + 1e-6), 0.0, math.inf,
        decay="exponential",
    )
    assert base.value == pytest.approx(0.5, abs=1e-6)
    assert small.value == pytest.approx(0.5, abs=1e-4)


def test_invalid_bounds():
    with pytest.raises(ValueError):
        quad.integrate_1d(lambda x: x, -math.inf, 0.0)
    with pytest.raises(ValueError):
        quad.integrate_1d(lambda x: x, 0.0, math.inf, decay="bogus")


def test_complex_integrand():
    res = quad.integrate_1d(lambda t: np.exp(1j * t), 0.0, math.pi, complex_valued=True)
    assert res.value == pytest.approx(2j, abs=1e-10)
    auto = quad.integrate_1d(lambda t: np.exp(1j * t), 0.0, math.pi)
    assert auto.value == pytest.approx(2j, abs=1e-10)


def test_radial4_gaussian():
    res = quad.integrate_radial4(lambda k: math.exp(-k * k))
    assert res.value == pytest.approx(math.pi**2, rel=1e-9)


def test_radial4_indicator():
    res = quad.integrate_radial4(
        lambda k: 1.0 / k**3 if 0 < k < 1 else 0.0, decay="algebraic"
    )
    assert res.value == pytest.approx(quad.TWO_PI_SQ, rel=1e-6)


def test_radial4_vs_angular_cubature():
    """Radial shortcut against explicit 4-D spherical cubature.

    Full measure: k^3 sin^2(theta1) sin(theta2) dk dtheta1 dtheta2 dphi.
    """
    radial_fns = [
        lambda k: math.exp(-k * k),
        lambda k: math.exp(-0.5 * k * k) / (k * k + 1.0),
        lambda k: k * math.exp(-k * k),
    ]
    for f in radial_fns:
        direct = quad.integrate_radial4(f)

        def full(k, t1, t2, phi):
            return (
                k**3
                * np.sin(t1) ** 2
                * np.sin(t2)
                * np.vectorize(f)(k)
            )

        box = [(0.0, 10.0), (0.0, math.pi), (0.0, math.pi), (0.0, 2.0 * math.pi)]
        angular = quad.integrate_nd(full, box, QuadratureConfig(abs_tol=1e-9, rel_tol=1e-7))
        assert float(np.real(angular.value)) == pytest.approx(
            float(direct.value), rel=1e-6
        )


def test_nd_unit_square():
    res = quad.integrate_nd(lambda x, y: np.ones_like(x + y), [(0, 1), (0, 1)])
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_nd_gaussian_4d():
    res = quad.integrate_nd(
        lambda *cs: np.exp(-sum(np.asarray(c) ** 2 for c in cs)),
        [(-6, 6)] * 4,
    )
    assert res.converged
    assert float(np.real(res.value)) == pytest.approx(math.pi**2, rel=1e-8)


def test_nd_bad_box():
    with pytest.raises(ValueError):
        quad.integrate_nd(lambda x: x, [(0, 1)])
    with pytest.raises(ValueError):
        quad.integrate_nd(lambda x, y: x, [(0, 1), (1, 0)])


def test_max_evals_flags_nonconvergence():
    cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14, max_evals=30)
    res = quad.integrate_nd(lambda x, y: np.sin(40 * x) * np.cos(30 * y), [(0, 1)] * 2, cfg)
    assert not res.converged


def test_linearity():
    f = lambda x: math.exp(-x * x)  # noqa: E731
    g = lambda x: 1.0 / (1.0 + x * x)  # noqa: E731
    a, b = 2.5, -1.5
    rf = quad.integrate_1d(f, 0.0, 3.0)
    rg = quad.integrate_1d(g, 0.0, 3.0)
    rc = quad.integrate_1d(lambda x: a * f(x) + b * g(x), 0.0, 3.0)
    combined_err = abs(a) * rf.error_estimate + abs(b) * rg.error_estimate + rc.error_estimate
    assert abs(rc.value - (a * rf.value + b * rg.value)) <= combined_err + 1e-12


def test_determinism():
    vals = [
        quad.integrate_1d(lambda x: math.sin(x) / (1 + x), 0.0, 10.0).value
        for _ in range(3)
    ]
    assert vals[0] == vals[1] == vals[2]


@pytest.mark.parametrize("label,f,a,b,truth,decay", KNOWN_INTEGRALS)
def test_known_integrals_values(label, f, a, b, truth, decay):
    kwargs = {"decay": decay} if decay else {}
    res = quad.integrate_1d(f, a, b, **kwargs)
    assert res.value == pytest.approx(truth, rel=1e-6, abs=1e-9), label


def test_error_honesty():
    honest = 0
    for label, f, a, b, truth, decay in KNOWN_INTEGRALS:
        kwargs = {"decay": decay} if decay else {}
        res = quad.integrate_1d(f, a, b, **kwargs)
        if abs(res.value - truth) <= 3.0 * res.error_estimate + 1e-15:
            honest += 1
    assert honest >= math.ceil(0.95 * len(KNOWN_INTEGRALS))


def test_derivative_examples():
    assert quad.derivative(lambda x: x**3, 2.0, order=1) == pytest.approx(12.0, rel=1e-10)
    assert quad.derivative(lambda X: X / (X + 1.0), 0.0, order=1, step=0.05) == pytest.approx(
        1.0, rel=1e-8
    )
    assert quad.derivative(math.exp, 0.0, order=3) == pytest.approx(1.0, abs=1e-7)


def test_derivative_orders():
    for order, truth in [(1, 1.0), (2, 1.0), (4, 1.0), (5, 1.0)]:
        assert quad.derivative(math.exp, 0.0, order=order) == pytest.approx(
            truth, rel=1e-4
        )


def test_derivative_errors():
    with pytest.raises(ValueError):
        quad.derivative(math.exp, 0.0, order=6)
    with pytest.raises(ValueError):
        quad.derivative(lambda x: math.log(x), 0.01, order=1, step=0.5)
