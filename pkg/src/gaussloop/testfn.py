"""Harmonic Hermite-Gaussian test functions on 3+1 dimensional space.

The ground state is a normalized Gaussian wave packet with prescribed mean
position ``X``, mean momentum ``P`` and dispersion tensors ``(A, B)``
satisfying the uncertainty constraint ``A B = I/4``.  Excited states carry
a product of physicists' Hermite polynomials (uncorrelated/diagonal
dispersions only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quad import QuadratureConfig, DEFAULT_CONFIG

DIM = 4
UNCERTAINTY_TOL = 1e-12


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence."""
    if n < 0:
        raise ValueError(f"Hermite order must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * k * h_prev, h
    return h if h.ndim else float(h)


@dataclass(frozen=True)
class DispersionTensors:
    """Coordinate (a) and momentum (b) dispersion matrices with a*b = I/4."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        prod = self.a @ self.b
        if np.max(np.abs(prod - 0.25 * np.eye(DIM))) > UNCERTAINTY_TOL:
            raise ValueError("dispersion tensors violate a*b = I/4")

    @property
    def is_diagonal(self) -> bool:
        off = self.a - np.diag(np.diag(self.a))
        return bool(np.max(np.abs(off)) < 1e-14)


def _check_spd(a: np.ndarray, name: str) -> None:
    if a.shape != (DIM, DIM):
        raise ValueError(f"{name} must be 4x4, got shape {a.shape}")
    if np.max(np.abs(a - a.T)) > 1e-12:
        raise ValueError(f"{name} must be symmetric")
    eigvals = np.linalg.eigvalsh(a)
    if eigvals[0] <= 0:
        raise ValueError(f"{name} is not positive definite (eigenvalue {eigvals[0]:g})")


def dispersion_from_a(a) -> DispersionTensors:
    """Build dispersion tensors from the coordinate dispersion matrix.

    The momentum dispersion is fixed by the uncertainty constraint:
    ``b = inv(a)/4``.
    """
    a = np.asarray(a, dtype=float)
    _check_spd(a, "coordinate dispersion")
    b = 0.25 * np.linalg.inv(a)
    b = 0.5 * (b + b.T)
    return DispersionTensors(a=a, b=b)


@dataclass(frozen=True)
class TestFunctionParams:
    n: tuple[int, int, int, int] = (0, 0, 0, 0)
    mean_x: np.ndarray = field(default_factory=lambda: np.zeros(DIM))
    mean_p: np.ndarray = field(default_factory=lambda: np.zeros(DIM))
    disp: DispersionTensors = field(
        default_factory=lambda: dispersion_from_a(0.5 * np.eye(DIM))
    )
    diagonal_only: bool = True

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(k) for k in self.n))
        object.__setattr__(self, "mean_x", np.asarray(self.mean_x, dtype=float))
        object.__setattr__(self, "mean_p", np.asarray(self.mean_p, dtype=float))
        if len(self.n) != DIM or any(k < 0 for k in self.n):
            raise ValueError(f"multi-index must be 4 non-negative integers, got {self.n}")
        if any(self.n) and not self.diagonal_only:
            raise ValueError("excited states require diagonal dispersions")
        if self.diagonal_only and not self.disp.is_diagonal:
            raise ValueError("diagonal_only set but dispersion matrix has off-diagonals")

    @property
    def is_ground_state(self) -> bool:
        return not any(self.n)


@dataclass(frozen=True)
class FourMomentum:
    """Minkowski four-vector with signature (1, 3)."""

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float)
        if c.shape != (DIM,):
            raise ValueError(f"four-momentum needs 4 components, got shape {c.shape}")
        object.__setattr__(self, "components", c)

    @property
    def minkowski_square(self) -> float:
        c = self.components
        return float(c[0] ** 2 - np.sum(c[1:] ** 2))

    @property
    def euclidean_square(self) -> float:
        return float(np.sum(self.components**2))


def _norm_x(disp: DispersionTensors) -> float:
    # 1/sqrt((2 pi)^2 * sqrt(det A)); reduces to the product of sqrt(A_mumu)
    # in the diagonal case.
    return 1.0 / math.sqrt((2.0 * math.pi) ** 2 * math.sqrt(np.linalg.det(disp.a)))


def _norm_p(disp: DispersionTensors) -> float:
    return 1.0 / math.sqrt((2.0 * math.pi) ** 2 * math.sqrt(np.linalg.det(disp.b)))


def eval_g0_x(params: TestFunctionParams, x):
    """Ground-state test function in configuration space.

    Accepts a single 4-vector or an array with the last axis of length 4.
    """
    if not params.is_ground_state:
        raise ValueError("eval_g0_x requires the ground state; use eval_gn_x")
    x = np.asarray(x, dtype=float)
    dx = x - params.mean_x
    quad_form = np.einsum("...i,ij,...j->...", dx, params.disp.b, dx)
    phase = np.einsum("...i,i->...", x, params.mean_p)
    out = _norm_x(params.disp) * np.exp(-quad_form - 1j * phase)
    return out if out.ndim else complex(out)


def eval_g0_p(params: TestFunctionParams, p):
    """Ground-state test function in momentum space (Fourier transform)."""
    if not params.is_ground_state:
        raise ValueError("eval_g0_p requires the ground state; use eval_gn_p")
    p = np.asarray(p, dtype=float)
    dp = p - params.mean_p
    quad_form = np.einsum("...i,ij,...j->...", dp, params.disp.a, dp)
    phase = np.einsum("i,...i->...", params.mean_x, dp)
    out = _norm_p(params.disp) * np.exp(-quad_form + 1j * phase)
    return out if out.ndim else complex(out)


def _hermite_product(n, centered, diag):
    prod = 1.0
    for mu in range(DIM):
        if n[mu] == 0:
            continue
        arg = centered[..., mu] / math.sqrt(2.0 * diag[mu])
        prod = prod * hermite(n[mu], arg) / math.sqrt(
            2.0 ** n[mu] * math.factorial(n[mu])
        )
    return prod


def eval_gn_x(params: TestFunctionParams, x):
    """Hermite-Gaussian test function in configuration space (diagonal case)."""
    if not params.diagonal_only:
        raise ValueError("Hermite-weighted evaluation requires diagonal dispersions")
    x = np.asarray(x, dtype=float)
    g0 = eval_g0_x(_ground(params), x)
    return _hermite_product(params.n, x - params.mean_x, np.diag(params.disp.a)) * g0


def eval_gn_p(params: TestFunctionParams, p):
    """Hermite-Gaussian test function in momentum space (diagonal case)."""
    if not params.diagonal_only:
        raise ValueError("Hermite-weighted evaluation requires diagonal dispersions")
    p = np.asarray(p, dtype=float)
    g0 = eval_g0_p(_ground(params), p)
    return _hermite_product(params.n, p - params.mean_p, np.diag(params.disp.b)) * g0


def _ground(params: TestFunctionParams) -> TestFunctionParams:
    if params.is_ground_state:
        return params
    return TestFunctionParams(
        n=(0, 0, 0, 0),
        mean_x=params.mean_x,
        mean_p=params.mean_p,
        disp=params.disp,
        diagonal_only=params.diagonal_only,
    )


@dataclass(frozen=True)
class MomentReport:
    norm_x_residual: float
    norm_p_residual: float
    mean_x_residuals: np.ndarray
    mean_p_residuals: np.ndarray
    dispersion_a_residuals: np.ndarray | None
    dispersion_b_residuals: np.ndarray | None
    converged: bool

    @property
    def max_residual(self) -> float:
        parts = [
            abs(self.norm_x_residual),
            abs(self.norm_p_residual),
            float(np.max(np.abs(self.mean_x_residuals))),
            float(np.max(np.abs(self.mean_p_residuals))),
        ]
        if self.dispersion_a_residuals is not None:
            parts.append(float(np.max(np.abs(self.dispersion_a_residuals))))
        if self.dispersion_b_residuals is not None:
            parts.append(float(np.max(np.abs(self.dispersion_b_residuals))))
        return max(parts)


def _axis_grids(mean, sigma, n_nodes, half_widths=8.0):
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    axes, wgts = [], []
    for mu in range(DIM):
        half = half_widths * sigma[mu]
        axes.append(mean[mu] + half * nodes)
        wgts.append(half * weights)
    return axes, wgts


def _tensor_moments(density_axes_fn, mean, sigma, n_nodes):
    """Norm, means and second moments of a separable 4-D density."""
    axes, wgts = _axis_grids(mean, sigma, n_nodes)
    dens = density_axes_fn(axes)  # list of per-axis 1-D densities
    z = [np.sum(w * d) for w, d in zip(wgts, dens)]
    m1 = [np.sum(w * t * d) for w, t, d in zip(wgts, axes, dens)]
    norm = float(np.prod(z))
    means = np.array(
        [m1[mu] * np.prod([z[nu] for nu in range(DIM) if nu != mu]) for mu in range(DIM)]
    )
    m2 = []
    for mu in range(DIM):
        c2 = np.sum(wgts[mu] * (axes[mu] - mean[mu]) ** 2 * dens[mu])
        m2.append(c2 * np.prod([z[nu] for nu in range(DIM) if nu != mu]))
    return norm, means, np.array(m2)


def check_moments(
    params: TestFunctionParams, cfg: QuadratureConfig | None = None
) -> MomentReport:
    """Quadrature check of normalization, means and second moments.

    Integration runs over mean +/- 8 standard deviations per axis; the
    Gaussian tail beyond that is below 1e-14.  Second moments are only
    checked for the ground state, where they must reproduce the dispersion
    tensors.
    """
    cfg = cfg or DEFAULT_CONFIG
    disp = params.disp

    if params.diagonal_only:
        a_diag = np.diag(disp.a)
        b_diag = np.diag(disp.b)
        spread = np.sqrt(1.0 + np.asarray(params.n, dtype=float))
        sig_x = np.sqrt(a_diag) * spread
        sig_p = np.sqrt(b_diag) * spread
        n_nodes = 80

        def dens_x(axes):
            out = []
            for mu in range(DIM):
                u = axes[mu] - params.mean_x[mu]
                h = hermite(params.n[mu], u / math.sqrt(2.0 * a_diag[mu]))
                w = h**2 / (2.0 ** params.n[mu] * math.factorial(params.n[mu]))
                out.append(w * np.exp(-2.0 * b_diag[mu] * u**2) / math.sqrt(2.0 * math.pi * a_diag[mu]))
            return out

        def dens_p(axes):
            out = []
            for mu in range(DIM):
                u = axes[mu] - params.mean_p[mu]
                h = hermite(params.n[mu], u / math.sqrt(2.0 * b_diag[mu]))
                w = h**2 / (2.0 ** params.n[mu] * math.factorial(params.n[mu]))
                out.append(w * np.exp(-2.0 * a_diag[mu] * u**2) / math.sqrt(2.0 * math.pi * b_diag[mu]))
            return out

        norm_x, mean_x, m2_x = _tensor_moments(dens_x, params.mean_x, sig_x, n_nodes)
        norm_p, mean_p, m2_p = _tensor_moments(dens_p, params.mean_p, sig_p, n_nodes)
        disp_a_res = m2_x - a_diag if params.is_ground_state else None
        disp_b_res = m2_p - b_diag if params.is_ground_state else None
        converged = True
    else:
        # Correlated ground state: moments of exp(-2 x.B.x) are analytic in
        # terms of the covariance A; still verified here by 4-D cubature.
        from .quad import integrate_nd

        sig_x = np.sqrt(np.diag(disp.a))
        sig_p = np.sqrt(np.diag(disp.b))
        box_x = [
            (params.mean_x[mu] - 8 * sig_x[mu], params.mean_x[mu] + 8 * sig_x[mu])
            for mu in range(DIM)
        ]
        box_p = [
            (params.mean_p[mu] - 8 * sig_p[mu], params.mean_p[mu] + 8 * sig_p[mu])
            for mu in range(DIM)
        ]

        def dens_x4(*coords):
            pts = np.stack(np.broadcast_arrays(*coords), axis=-1)
            return np.abs(eval_g0_x(params, pts)) ** 2

        def dens_p4(*coords):
            pts = np.stack(np.broadcast_arrays(*coords), axis=-1)
            return np.abs(eval_g0_p(params, pts)) ** 2

        r_nx = integrate_nd(dens_x4, box_x, cfg)
        r_np = integrate_nd(dens_p4, box_p, cfg)
        norm_x, norm_p = float(np.real(r_nx.value)), float(np.real(r_np.value))
        converged = r_nx.converged and r_np.converged
        mean_x = np.empty(DIM)
        mean_p = np.empty(DIM)
        m2_x = np.empty(DIM)
        m2_p = np.empty(DIM)
        for mu in range(DIM):
            def mom_x(*coords, mu=mu, power=1):
                pts = np.stack(np.broadcast_arrays(*coords), axis=-1)
                w = np.abs(eval_g0_x(params, pts)) ** 2
                return (pts[..., mu] - params.mean_x[mu] * (power == 2)) ** power * w

            def mom_p(*coords, mu=mu, power=1):
                pts = np.stack(np.broadcast_arrays(*coords), axis=-1)
                w = np.abs(eval_g0_p(params, pts)) ** 2
                return (pts[..., mu] - params.mean_p[mu] * (power == 2)) ** power * w

            mean_x[mu] = float(np.real(integrate_nd(mom_x, box_x, cfg).value))
            mean_p[mu] = float(np.real(integrate_nd(mom_p, box_p, cfg).value))
            m2_x[mu] = float(
                np.real(integrate_nd(lambda *c, mu=mu: mom_x(*c, mu=mu, power=2), box_x, cfg).value)
            )
            m2_p[mu] = float(
                np.real(integrate_nd(lambda *c, mu=mu: mom_p(*c, mu=mu, power=2), box_p, cfg).value)
            )
        disp_a_res = m2_x - np.diag(disp.a)
        disp_b_res = m2_p - np.diag(disp.b)
        a_diag = np.diag(disp.a)
        b_diag = np.diag(disp.b)

    return MomentReport(
        norm_x_residual=norm_x - 1.0,
        norm_p_residual=norm_p - 1.0,
        mean_x_residuals=np.asarray(mean_x) - params.mean_x,
        mean_p_residuals=np.asarray(mean_p) - params.mean_p,
        dispersion_a_residuals=disp_a_res,
        dispersion_b_residuals=disp_b_res,
        converged=converged,
    )
