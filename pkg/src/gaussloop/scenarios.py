"""Scenario runners behind the service and the CLI.

Each scenario maps a flat, strictly-validated parameter dictionary to a
list of result rows.  Rows are plain dicts ending in the standard result
columns (value_re, value_im, error_estimate, evals, converged) so they
serialize uniformly to CSV and JSON.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import __version__, loops, propagator, testfn, tlr
from .quad import QuadratureConfig, QuadratureResult

COMMANDS = (
    "testfn-check",
    "propagator-grid",
    "tadpole",
    "anomaly",
    "self-energy",
    "vertex",
    "wt-check",
    "tlr-demo",
)


class ScenarioError(ValueError):
    """Invalid scenario name or parameter set."""


@dataclass(frozen=True)
class ParamSpec:
    kind: type
    default: Any = None
    required: bool = False
    check: Callable[[Any], bool] | None = None
    describe: str = ""


def _float_list(raw):
    if isinstance(raw, (list, tuple)):
        return [float(v) for v in raw]
    return [float(v) for v in str(raw).split(",") if v != ""]


def _int_list(raw):
    if isinstance(raw, (list, tuple)):
        return [int(v) for v in raw]
    return [int(v) for v in str(raw).split(",") if v != ""]


_SCHEMAS: dict[str, dict[str, ParamSpec]] = {
    "tadpole": {
        "e": ParamSpec(float, 1.0),
        "b": ParamSpec(float, 1.0, check=lambda v: v > 0, describe="dispersion B > 0"),
        "m": ParamSpec(float, 1e-3, check=lambda v: v > 0, describe="mass > 0"),
        "mode": ParamSpec(str, "regularized", check=lambda v: v in ("regularized", "divergent")),
        "k_max": ParamSpec(float, 10.0, check=lambda v: v >= 0, describe="cutoff >= 0"),
    },
    "testfn-check": {
        "a_diag": ParamSpec(list, [0.5, 0.5, 0.5, 0.5]),
        "mean_x": ParamSpec(list, [0.0, 0.0, 0.0, 0.0]),
        "mean_p": ParamSpec(list, [0.0, 0.0, 0.0, 0.0]),
        "n": ParamSpec(list, [0, 0, 0, 0]),
    },
    "propagator-grid": {
        "m": ParamSpec(float, 1.0, check=lambda v: v > 0),
        "epsilon": ParamSpec(float, 1e-3, check=lambda v: v > 0),
        "a_value": ParamSpec(float, 0.5, check=lambda v: v > 0, describe="diagonal dispersion A"),
        "kind": ParamSpec(str, "vacuum", check=lambda v: v in ("vacuum", "feynman")),
        "n_t": ParamSpec(int, 5, check=lambda v: v >= 1),
        "n_x": ParamSpec(int, 5, check=lambda v: v >= 1),
        "half_width": ParamSpec(float, 0.5, check=lambda v: v > 0),
    },
    "anomaly": {
        "b": ParamSpec(float, 1.0, check=lambda v: v > 0),
        "ratio": ParamSpec(float, 1e-3, check=lambda v: v >= 0, describe="p^2/(2B)"),
        "quantity": ParamSpec(str, "deltag", check=lambda v: v in ("deltag", "norm")),
    },
    "self-energy": {
        "p_sq": ParamSpec(float, 1.0),
        "e": ParamSpec(float, 1.0),
        "m": ParamSpec(float, 1.0, check=lambda v: v > 0),
        "mu": ParamSpec(float, 0.01, check=lambda v: v > 0),
        "eta_sq": ParamSpec(float, 2.0, check=lambda v: v > 1),
        "lam": ParamSpec(float, 100.0, check=lambda v: v > 0),
        "route": ParamSpec(str, "closed", check=lambda v: v in ("closed", "direct")),
    },
    "vertex": {
        "e": ParamSpec(float, 1.0),
        "m": ParamSpec(float, 1.0, check=lambda v: v > 0),
        "mu": ParamSpec(float, 0.01, check=lambda v: v > 0),
        "eta_sq": ParamSpec(float, 2.0, check=lambda v: v > 1),
        "lam": ParamSpec(float, 100.0, check=lambda v: v > 0),
    },
    "wt-check": {
        "e": ParamSpec(float, 1.0),
        "m": ParamSpec(float, 1.0, check=lambda v: v > 0),
        "mu": ParamSpec(float, 0.01, check=lambda v: v > 0),
        "eta_sq": ParamSpec(float, 2.0, check=lambda v: v > 1),
        "lambdas": ParamSpec(list, [1e2, 1e3, 1e4]),
    },
    "tlr-demo": {
        "k": ParamSpec(int, 0, check=lambda v: v >= 0),
        "eta_sq": ParamSpec(float, 2.0, check=lambda v: v > 1),
    },
}

_LIST_PARSERS = {
    ("testfn-check", "n"): _int_list,
}


def resolve_params(command: str, params: dict[str, Any]) -> dict[str, Any]:
    """Validate a raw parameter map against the scenario schema (strict)."""
    if command not in COMMANDS:
        raise ScenarioError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    schema = _SCHEMAS[command]
    unknown = set(params) - set(schema)
    if unknown:
        raise ScenarioError(
            f"unknown parameter(s) for {command}: {', '.join(sorted(unknown))}"
        )
    resolved = {}
    for name, spec in schema.items():
        if name in params:
            raw = params[name]
            try:
                if spec.kind is list:
                    parser = _LIST_PARSERS.get((command, name), _float_list)
                    val = parser(raw)
                elif spec.kind is int:
                    val = int(raw)
                elif spec.kind is float:
                    val = float(raw)
                else:
                    val = str(raw)
            except (TypeError, ValueError) as exc:
                raise ScenarioError(f"parameter {name}: cannot parse {raw!r}") from exc
        elif spec.required:
            raise ScenarioError(f"missing required parameter {name} for {command}")
        else:
            val = spec.default
        if spec.check is not None and not isinstance(val, list) and not spec.check(val):
            hint = f" ({spec.describe})" if spec.describe else ""
            raise ScenarioError(f"parameter {name}={val!r} out of range{hint}")
        resolved[name] = val
    return resolved


def _result_cols(value, err=0.0, evals=0, converged=True):
    v = complex(value)
    return {
        "value_re": v.real,
        "value_im": v.imag,
        "error_estimate": float(err),
        "evals": int(evals),
        "converged": bool(converged),
    }


def _from_qr(res: QuadratureResult):
    return _result_cols(res.value, res.error_estimate, res.evals, res.converged)


def _run_tadpole(p, cfg):
    coupling = loops.CouplingParams(e=p["e"], m=p["m"], photon_mass=1e-2 * max(p["m"], 1e-30))
    if p["mode"] == "divergent":
        val = loops.tadpole_divergent_partial(p["k_max"], p["m"], p["e"])
        row = {"mode": "divergent", "k_max": p["k_max"], "b": p["b"], "m": p["m"], "e": p["e"]}
        row.update(_result_cols(val))
        return [row], None
    res = loops.tadpole_regularized(loops.TadpoleParams(B=p["b"], coupling=coupling), cfg)
    row = {"mode": "regularized", "k_max": p["k_max"], "b": p["b"], "m": p["m"], "e": p["e"]}
    row.update(_from_qr(res))
    return [row], {"limit_value": coupling.e**2 * p["b"] / (4.0 * math.pi**2)}


def _run_testfn_check(p, cfg):
    a = np.diag(p["a_diag"])
    disp = testfn.dispersion_from_a(a)
    params = testfn.TestFunctionParams(
        n=tuple(p["n"]), mean_x=np.asarray(p["mean_x"]), mean_p=np.asarray(p["mean_p"]), disp=disp
    )
    rep = testfn.check_moments(params, cfg)
    rows = []
    checks = [
        ("norm_x", rep.norm_x_residual),
        ("norm_p", rep.norm_p_residual),
        ("mean_x", float(np.max(np.abs(rep.mean_x_residuals)))),
        ("mean_p", float(np.max(np.abs(rep.mean_p_residuals)))),
    ]
    if rep.dispersion_a_residuals is not None:
        checks.append(("dispersion_a", float(np.max(np.abs(rep.dispersion_a_residuals)))))
        checks.append(("dispersion_b", float(np.max(np.abs(rep.dispersion_b_residuals)))))
    uncert = float(np.max(np.abs(disp.a @ disp.b - 0.25 * np.eye(4))))
    checks.append(("uncertainty_product", uncert))
    for name, resid in checks:
        row = {"check": name}
        row.update(_result_cols(resid, converged=rep.converged))
        rows.append(row)
    return rows, {"max_residual": rep.max_residual}


def _run_propagator_grid(p, cfg):
    disp = testfn.dispersion_from_a(p["a_value"] * np.eye(4))
    tf = testfn.TestFunctionParams(disp=disp)
    pp = propagator.PropagatorParams(
        m=p["m"], epsilon=p["epsilon"], testfn=tf, reduced_dims=1
    )
    ts = np.linspace(-p["half_width"], p["half_width"], p["n_t"])
    xs = np.linspace(-p["half_width"], p["half_width"], p["n_x"])
    rows = []
    for t in ts:
        for x in xs:
            if p["kind"] == "vacuum":
                res = propagator.vacuum_fluctuation(
                    np.array([t, x, 0.0, 0.0]), np.zeros(4), pp, cfg
                )
            else:
                res = propagator.feynman_propagator_x(np.array([t, x]), pp, cfg)
            row = {"t": float(t), "x": float(x)}
            row.update(_from_qr(res))
            rows.append(row)
    return rows, None


def _run_anomaly(p, cfg):
    B, r = p["b"], p["ratio"]
    if p["quantity"] == "deltag":
        mag = loops.anomaly_limit_scan(B, [r])[0] if r > 0 else 0.0
        row = {"b": B, "ratio": r, "quantity": "deltag"}
        row.update(_result_cols(mag))
        return [row], None
    pmag = math.sqrt(r * 2.0 * B)
    p1 = np.array([pmag, 0.0, 0.0, 0.0])
    p2 = np.array([0.0, pmag, 0.0, 0.0])
    norm = loops.anomaly_divergence_norm(p1, p2, B, cfg)
    row = {"b": B, "ratio": r, "quantity": "norm"}
    row.update(_result_cols(norm))
    return [row], None


def _loop_inputs(p):
    coupling = loops.CouplingParams(e=p["e"], m=p["m"], photon_mass=p["mu"])
    tlr_cfg = tlr.TlrConfig(k=0, eta=math.sqrt(p["eta_sq"]), lam=p["lam"])
    return coupling, tlr_cfg


def _run_self_energy(p, cfg):
    coupling, tlr_cfg = _loop_inputs(p)
    if p["route"] == "direct":
        se = loops.self_energy_direct(p["p_sq"], coupling, tlr_cfg, loops.default_partition(), cfg)
    else:
        se = loops.self_energy(p["p_sq"], coupling, tlr_cfg, cfg)
    rows = []
    for name, val in (("gamma_p", se.a_coeff), ("identity", se.b_coeff)):
        row = {"coeff": name, "route": p["route"], "p_sq": p["p_sq"], "lam": p["lam"]}
        row.update(_result_cols(val, se.error_estimate, 0, se.converged))
        rows.append(row)
    return rows, None


def _run_vertex(p, cfg):
    coupling, tlr_cfg = _loop_inputs({**p, "p_sq": None})
    res = loops.vertex(coupling, tlr_cfg, loops.default_partition(), cfg)
    row = {"lam": p["lam"], "m": p["m"], "mu": p["mu"]}
    row.update(_from_qr(res))
    return [row], None


def _run_wt_check(p, cfg):
    coupling = loops.CouplingParams(e=p["e"], m=p["m"], photon_mass=p["mu"])
    tlr_cfg = tlr.TlrConfig(k=0, eta=math.sqrt(p["eta_sq"]), lam=1.0)
    ladder = [lam * p["m"] for lam in p["lambdas"]]
    rep = loops.ward_takahashi_check(coupling, tlr_cfg, ladder, cfg=cfg)
    rows = []
    for lam, dg, sp in zip(rep.lambdas, rep.dgamma, rep.sigma_prime):
        row = {"lam": float(lam), "dgamma": dg, "sigma_prime": sp}
        row.update(_result_cols(dg + sp, converged=rep.converged))
        rows.append(row)
    summary = {
        "slope_dgamma": rep.slope_dgamma,
        "slope_sigma_prime": rep.slope_sigma_prime,
        "slope_residual": rep.slope_residual,
        "constant_offset": rep.constant_offset,
        "offset_variation": rep.offset_variation,
        "alpha_over_4pi": coupling.alpha / (4.0 * math.pi),
    }
    return rows, summary


def _run_tlr_demo(p, cfg):
    eta = math.sqrt(p["eta_sq"])
    tcfg = tlr.TlrConfig(k=p["k"], eta=eta)
    rows = []
    row = {"item": "t_integral", "k": p["k"], "eta_sq": p["eta_sq"]}
    row.update(_result_cols(tlr.t_integral(p["k"], eta)))
    rows.append(row)
    if p["k"] == 0:
        ext = tlr.extend_distribution(
            lambda X: 1.0 / (X + 1.0), tcfg, xt_derivative=lambda X: 1.0 / (X + 1.0) ** 2
        )
        from .quad import integrate_1d

        res = integrate_1d(ext, 0.0, math.inf, cfg)
        row = {"item": "extended_pole_amplitude", "k": p["k"], "eta_sq": p["eta_sq"]}
        row.update(_from_qr(res))
        rows.append(row)
    return rows, None


_RUNNERS = {
    "tadpole": _run_tadpole,
    "testfn-check": _run_testfn_check,
    "propagator-grid": _run_propagator_grid,
    "anomaly": _run_anomaly,
    "self-energy": _run_self_energy,
    "vertex": _run_vertex,
    "wt-check": _run_wt_check,
    "tlr-demo": _run_tlr_demo,
}


def run_scenario(command: str, params: dict[str, Any], quad_cfg: QuadratureConfig | None = None):
    """Execute one scenario; returns (resolved_params, rows, summary)."""
    resolved = resolve_params(command, params)
    try:
        rows, summary = _RUNNERS[command](resolved, quad_cfg)
    except (ValueError, ArithmeticError) as exc:
        raise ScenarioError(str(exc)) from exc
    return resolved, rows, summary or {}


def run_sweep(
    command: str,
    params: dict[str, Any],
    axis: str,
    values,
    quad_cfg: QuadratureConfig | None = None,
):
    """Run a scenario once per ladder value of one swept parameter.

    Per-point failures are recorded in-row; the sweep continues.
    """
    base = resolve_params(command, params)  # validates the non-swept keys early
    if axis not in base:
        raise ScenarioError(f"swept parameter {axis!r} does not exist for {command}")
    all_rows = []
    summaries = []
    for v in values:
        try:
            resolved, rows, summary = run_scenario(
                command, {**params, axis: v}, quad_cfg
            )
        except ScenarioError as exc:
            all_rows.append(
                {axis: v, "error": str(exc), **_result_cols(float("nan"), converged=False)}
            )
            summaries.append({})
            continue
        for row in rows:
            row = {axis: resolved[axis], **row}
            all_rows.append(row)
        summaries.append(summary)
    return all_rows, summaries


def provenance(command: str, resolved: dict[str, Any]) -> dict[str, Any]:
    return {
        "tool": "gaussloop",
        "version": __version__,
        "command": command,
        "params": {k: resolved[k] for k in sorted(resolved)},
    }
