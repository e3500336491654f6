"""Tests for the Taylor-Lagrange regularization machinery."""

import math

import numpy as np
import pytest

from gaussloop import quad, tlr
from gaussloop.tlr import (
    TlrConfig,
    bump,
    extend_distribution,
    partition_of_unity,
    smooth_bump,
    t_integral,
    taylor_remainder_extension,
)


def test_config_validation():
    with pytest.raises(ValueError):
        TlrConfig(k=-1)
    with pytest.raises(ValueError):
        TlrConfig(eta=1.0)
    with pytest.raises(ValueError):
        TlrConfig(lam=0.0)
    cfg = TlrConfig().with_lambda(500.0)
    assert cfg.lam == 500.0
    assert cfg.k == 0


def test_bump_support_and_symmetry():
    assert bump(1.5) == 0.0
    assert bump(-1.5) == 0.0
    assert bump(0.3) == bump(-0.3)
    assert bump(0.0) > 0.0


def test_bump_normalization():
    res = quad.integrate_1d(bump, -1.0, 1.0)
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_smooth_bump_normalization():
    res = quad.integrate_1d(smooth_bump, -1.0, 1.0)
    assert res.value == pytest.approx(1.0, abs=1e-4)
    assert smooth_bump(1.0) == 0.0
    assert smooth_bump(2.0) == 0.0


def test_partition_plateau_and_support():
    f = partition_of_unity(-1.0, 1.0, 0.25)
    assert f(0.0) == pytest.approx(1.0, abs=1e-10)
    assert f(1.0 + 0.5) == 0.0
    assert f(-(1.0 + 0.5)) == 0.0
    assert f.support_upper == pytest.approx(1.25)
    lo, hi = f.plateau
    assert f(lo) == pytest.approx(1.0, abs=1e-10)
    assert f(hi) == pytest.approx(1.0, abs=1e-10)


def test_partition_bounds_random():
    f = partition_of_unity(0.0, 3.0, 0.5)
    rng = np.random.default_rng(11)
    xs = rng.uniform(-2.0, 5.0, size=10_000)
    vals = f(xs)
    assert np.all(vals >= 0.0)
    assert np.all(vals <= 1.0)
    assert np.all(vals[np.abs(xs - 1.5) < 1.0 - 1e-9] == pytest.approx(1.0, abs=1e-10))
    assert np.all(vals[(xs < -0.5) | (xs > 3.5)] == 0.0)


def test_partition_mirrored_edges():
    f = partition_of_unity(-2.0, 2.0, 0.5)
    for t in np.linspace(0.0, 1.0, 11):
        left = f(-2.0 - 0.5 + t)
        right = f(2.0 + 0.5 - t)
        assert left + right == pytest.approx(2.0 * left, abs=1e-12)
        # roll-off symmetry: rising edge mirrors the falling edge
        assert f(-2.0 + t) == pytest.approx(f(2.0 - t), abs=1e-12)


def test_partition_rolloff_sums_to_one():
    # complementary points across one edge: f(a - u) + f(a + u) = 1
    f = partition_of_unity(-2.0, 2.0, 0.5)
    for u in np.linspace(0.0, 0.5, 6):
        assert f(-2.0 - u) + f(-2.0 + u) == pytest.approx(1.0, abs=1e-12)


def test_partition_degenerate_rejected():
    with pytest.raises(ValueError):
        partition_of_unity(0.0, 1.0, 0.6)
    with pytest.raises(ValueError):
        partition_of_unity(0.0, 1.0, -0.1)
    with pytest.raises(ValueError):
        partition_of_unity(0.0, 1.0, 0.2, kind="triangle")


def test_partition_smooth_kind():
    f = partition_of_unity(-1.0, 1.0, 0.25, kind="smooth")
    assert f(0.0) == pytest.approx(1.0, abs=1e-6)
    assert f(2.0) == 0.0


def test_t_integral_closed_forms():
    eta = math.sqrt(2.0)
    assert t_integral(0, eta) == pytest.approx(math.log(2.0), abs=1e-14)
    assert t_integral(1, eta) == pytest.approx(math.log(2.0) - 1.0, abs=1e-14)
    assert t_integral(2, 1.0) == 0.0
    # k = 5 goes through the quadrature fallback; check against the
    # binomial closed form computed by hand
    eta2 = 2.0
    truth = math.log(eta2)
    for j in range(1, 6):
        truth += math.comb(5, j) * (-1.0) ** j * (eta2**j - 1.0) / j
    assert t_integral(5, eta) == pytest.approx(truth, rel=1e-10)
    with pytest.raises(ValueError):
        t_integral(-1, eta)
    with pytest.raises(ValueError):
        t_integral(0, 0.5)


def test_extend_pole_distribution():
    cfg = TlrConfig(k=0, eta=math.sqrt(2.0))
    ext = extend_distribution(lambda X: 1.0 / (X + 1.0), cfg)
    ln2 = math.log(2.0)
    for X in (0.0, 0.5, 1.0, 3.0):
        assert ext(X) == pytest.approx(ln2 / (X + 1.0) ** 2, rel=1e-6)
    # with the analytic derivative registered
    ext2 = extend_distribution(
        lambda X: 1.0 / (X + 1.0), cfg, xt_derivative=lambda X: 1.0 / (X + 1.0) ** 2
    )
    assert ext2(2.0) == pytest.approx(ln2 / 9.0, rel=1e-14)


def test_extended_amplitude_is_log_eta_sq():
    cfg = TlrConfig(k=0, eta=math.sqrt(2.0))
    ext = extend_distribution(
        lambda X: 1.0 / (X + 1.0), cfg, xt_derivative=lambda X: 1.0 / (X + 1.0) ** 2
    )
    res = quad.integrate_1d(ext, 0.0, math.inf)
    assert res.value == pytest.approx(math.log(2.0), abs=1e-10)


def test_extension_finiteness_ladder():
    # T = (X+1)^-n, n in {1,2,3}: extended amplitude finite and stable
    cfg = TlrConfig(k=0, eta=math.sqrt(2.0))
    for n in (1, 2, 3):
        ext = extend_distribution(lambda X, n=n: 1.0 / (X + 1.0) ** n, cfg)
        base = quad.integrate_1d(ext, 0.0, 200.0)
        dense = quad.integrate_1d(
            ext, 0.0, 200.0, quad.QuadratureConfig(abs_tol=1e-12, rel_tol=1e-10)
        )
        assert math.isfinite(float(base.value))
        assert abs(float(dense.value) - float(base.value)) <= 1e-3 * abs(float(base.value))


def test_log_capture_slope():
    # rescaled pole distribution: amplitude tracks ln(Lam^2/M^2) with slope 1
    cfg = TlrConfig(k=0, eta=math.sqrt(2.0))
    from gaussloop.loops import lagrange_kernel

    m_sq = 1.0
    vals = []
    lams = [1e2, 1e3, 1e4]
    f = partition_of_unity(-1.0, 1.0, 0.25)
    for lam in lams:
        s = m_sq / lam**2
        vals.append(float(lagrange_kernel(s, f).value))
    logs = np.log(np.asarray(lams) ** 2)
    slope = np.polyfit(logs, vals, 1)[0]
    assert slope == pytest.approx(1.0, rel=0.01)


def test_taylor_remainder_basics():
    cfg = TlrConfig(k=0, eta=math.sqrt(2.0))
    f = partition_of_unity(-1.0, 1.0, 0.25)
    g = taylor_remainder_extension(f, cfg)
    assert g(0.0) == 0.0
    tiny = taylor_remainder_extension(f, TlrConfig(k=0, eta=1.0 + 1e-12))
    assert abs(tiny(0.7)) < 1e-9


def test_order_consistency():
    # k = 0 vs k = 1 extensions of a convergent distribution move together
    # as the plateau grows: the difference shrinks monotonically
    diffs = []
    for plateau in (4.0, 16.0, 64.0):
        f = partition_of_unity(-plateau, plateau, 1.0)
        a0 = tlr.amplitude(
            lambda X: 1.0 / (X + 1.0) ** 3,
            f,
            TlrConfig(k=0, eta=math.sqrt(2.0)),
        )
        a1 = tlr.amplitude(
            lambda X: 1.0 / (X + 1.0) ** 3,
            f,
            TlrConfig(k=1, eta=math.sqrt(2.0)),
        )
        diffs.append(abs(float(a0.value) - float(a1.value)))
    assert diffs[0] >= diffs[1] >= diffs[2] or diffs[2] < 1e-6


def test_amplitude_direct_vs_extended():
    # convergent distribution: the direct f-weighted amplitude is finite and
    # both pipelines produce stable finite values on a large plateau
    f = partition_of_unity(-50.0, 50.0, 1.0)
    direct = tlr.amplitude_direct(lambda X: 1.0 / (X + 1.0) ** 3, f)
    assert float(direct.value) == pytest.approx(0.5, rel=1e-3)
    ext = tlr.amplitude(
        lambda X: 1.0 / (X + 1.0) ** 3, f, TlrConfig(k=0, eta=math.sqrt(2.0))
    )
    assert math.isfinite(float(ext.value))
    assert ext.converged


def test_amplitude_zero_distribution():
    f = partition_of_unity(-1.0, 1.0, 0.25)
    res = tlr.amplitude(lambda X: 0.0, f, TlrConfig(), xt_derivative=lambda X: 0.0)
    assert res.value == 0.0
