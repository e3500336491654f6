"""Taylor-Lagrange regularization machinery.

A truncated-Gaussian bump convolved with an indicator yields a partition
of unity; replacing a test function by its Taylor remainder turns singular
distributions on (0, inf) into finite UV extensions.  The key closed form:
the order-k extension multiplies ``(-X)^k/k! d^{k+1}_X (X T(X))`` by
``int_1^{eta^2} dt/t (1-t)^k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.special import erf

from . import quad
from .quad import QuadratureConfig, QuadratureResult, DEFAULT_CONFIG


@dataclass(frozen=True)
class TlrConfig:
    k: int = 0
    eta: float = math.sqrt(2.0)
    lam: float = 100.0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"Taylor order must be >= 0, got {self.k}")
        if not self.eta > 1.0:
            raise ValueError(f"running-support scale eta must be > 1, got {self.eta}")
        if not self.lam > 0:
            raise ValueError(f"scale lambda must be > 0, got {self.lam}")

    def with_lambda(self, lam: float) -> "TlrConfig":
        return replace(self, lam=lam)


_BUMP_NORM = 1.0 / (math.sqrt(math.pi) * erf(1.0))


def bump(x):
    """Normalized truncated-Gaussian bump: N*exp(-x^2) on |x|<1, else 0."""
    x = np.asarray(x, dtype=float)
    out = np.where(np.abs(x) < 1.0, _BUMP_NORM * np.exp(-(x**2)), 0.0)
    return out if out.ndim else float(out)


def smooth_bump(x):
    """C-infinity bump exp(-1/(1-x^2)) on |x|<1, normalized to unit area."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1.0
    arg = np.where(inside, 1.0 - x**2, 1.0)
    out = np.where(inside, np.exp(-1.0 / arg), 0.0) / _SMOOTH_NORM
    return out if out.ndim else float(out)


def _smooth_area():
    grid = np.linspace(-1.0, 1.0, 4001)
    with np.errstate(divide="ignore"):
        vals = np.where(np.abs(grid) < 1.0, np.exp(-1.0 / np.where(np.abs(grid) < 1.0, 1.0 - grid**2, 1.0)), 0.0)
    return float(getattr(np, "trapezoid", np.trapz)(vals, grid))


_SMOOTH_NORM = _smooth_area()


def _bump_cdf(u):
    """CDF of the truncated-Gaussian bump (closed form via erf)."""
    uc = np.clip(u, -1.0, 1.0)
    return (erf(uc) + erf(1.0)) / (2.0 * erf(1.0))


# Cached cumulative samples for the smooth-bump convolution.
_SMOOTH_GRID = np.linspace(-1.0, 1.0, 4001)
_SMOOTH_CDF = np.concatenate(
    [[0.0], np.cumsum(0.5 * (smooth_bump(_SMOOTH_GRID[1:]) + smooth_bump(_SMOOTH_GRID[:-1])) * np.diff(_SMOOTH_GRID))]
)
_SMOOTH_CDF /= _SMOOTH_CDF[-1]


def _smooth_cdf(u):
    return np.interp(np.clip(u, -1.0, 1.0), _SMOOTH_GRID, _SMOOTH_CDF)


@dataclass(frozen=True)
class PartitionOfUnity:
    """Mollified indicator: 1 on [a+width, b-width], 0 outside [a-width, b+width]."""

    a: float
    b: float
    width: float
    kind: str = "truncated_gaussian"

    def __call__(self, x):
        cdf = _bump_cdf if self.kind == "truncated_gaussian" else _smooth_cdf
        x = np.asarray(x, dtype=float)
        out = cdf((x - self.a) / self.width) - cdf((x - self.b) / self.width)
        return out if out.ndim else float(out)

    @property
    def support_upper(self) -> float:
        return self.b + self.width

    @property
    def plateau(self) -> tuple[float, float]:
        return (self.a + self.width, self.b - self.width)


def partition_of_unity(
    a: float, b: float, width: float, kind: str = "truncated_gaussian"
) -> PartitionOfUnity:
    """Convolve the indicator of [a, b] with a bump of half-width ``width``."""
    if width <= 0:
        raise ValueError(f"width must be > 0, got {width}")
    if b - a <= 2.0 * width:
        raise ValueError(f"degenerate plateau: b - a = {b - a:g} <= 2*width = {2 * width:g}")
    if kind not in ("truncated_gaussian", "smooth"):
        raise ValueError(f"unknown bump kind {kind!r}")
    return PartitionOfUnity(a=float(a), b=float(b), width=float(width), kind=kind)


def t_integral(k: int, eta: float) -> float:
    """Closed form of ``int_1^{eta^2} dt/t (1-t)^k`` (quadrature for k > 4)."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if not eta > 1.0:
        if eta == 1.0:
            return 0.0
        raise ValueError(f"eta must be >= 1, got {eta}")
    eta2 = eta * eta
    if k <= 4:
        total = math.log(eta2)
        for j in range(1, k + 1):
            total += math.comb(k, j) * (-1.0) ** j * (eta2**j - 1.0) / j
        return total
    res = quad.integrate_1d(lambda t: (1.0 - t) ** k / t, 1.0, eta2)
    return float(res.value)


def extend_distribution(
    T: Callable[[float], float],
    cfg: TlrConfig,
    xt_derivative: Callable[[float], float] | None = None,
) -> Callable[[float], float]:
    """UV extension of a singular distribution on (0, inf).

    Returns ``X -> (-X)^k/k! * d^{k+1}_X (X T(X)) * int_1^{eta^2} dt/t (1-t)^k``.
    Supply ``xt_derivative`` (the analytic (k+1)-th derivative of X*T(X))
    when available; otherwise Richardson finite differences are used.
    """
    k = cfg.k
    ti = t_integral(k, cfg.eta)
    kfact = math.factorial(k)

    if xt_derivative is None:

        def xt_derivative(X):
            return quad.derivative(lambda u: u * T(u), X, order=k + 1, step=0.2 * max(0.05, X))

    def extended(X: float) -> float:
        return (-X) ** k / kfact * xt_derivative(X) * ti

    return extended


def taylor_remainder_extension(
    f: PartitionOfUnity,
    cfg: TlrConfig,
    support_fn: Callable[[float], float] | None = None,
    quad_cfg: QuadratureConfig | None = None,
) -> Callable[[float], float]:
    """Taylor-remainder form of the test function in the UV domain.

    ``g>(X) = -(X/k!) int_1^{eta^2 G(|X|)} dt/t (1-t)^k d^{k+1}_X (X^k f(X t))``.
    The running-support map G defaults to 1, reducing the bound to eta^2.
    """
    k = cfg.k
    kfact = math.factorial(k)
    quad_cfg = quad_cfg or DEFAULT_CONFIG

    def g_ext(X: float) -> float:
        if X == 0.0:
            return 0.0
        upper = cfg.eta**2 * (support_fn(abs(X)) if support_fn is not None else 1.0)
        if upper <= 1.0:
            return 0.0

        def integrand(t):
            d = quad.derivative(
                lambda u: u**k * f(u * t), X, order=k + 1, step=0.1 * max(0.05, abs(X))
            )
            return (1.0 - t) ** k / t * d

        res = quad.integrate_1d(integrand, 1.0, upper, quad_cfg)
        return -X / kfact * float(res.value)

    return g_ext


def amplitude(
    T: Callable[[float], float],
    f: PartitionOfUnity,
    cfg: TlrConfig,
    xt_derivative: Callable[[float], float] | None = None,
    quad_cfg: QuadratureConfig | None = None,
) -> QuadratureResult:
    """Regularized amplitude ``int_0^inf T~>(X) f(X) dX`` (canonical form)."""
    quad_cfg = quad_cfg or DEFAULT_CONFIG
    ext = extend_distribution(T, cfg, xt_derivative)
    return quad.integrate_1d(
        lambda X: ext(X) * f(X), 0.0, f.support_upper, quad_cfg
    )


def amplitude_direct(
    T: Callable[[float], float],
    f: PartitionOfUnity,
    quad_cfg: QuadratureConfig | None = None,
) -> QuadratureResult:
    """Direct f-weighted amplitude ``int_0^inf T(X) f(X) dX`` on the support."""
    quad_cfg = quad_cfg or DEFAULT_CONFIG
    return quad.integrate_1d(lambda X: T(X) * f(X), 0.0, f.support_upper, quad_cfg)
