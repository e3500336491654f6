"""FastAPI application exposing the scenario runners.

Invalid scenario parameters map to HTTP 422 so clients can distinguish
bad requests from numerical failures (which come back in-row with
``converged = false``).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__, scenarios
from ..quad import QuadratureConfig
from ..scenarios import ScenarioError
from .schemas import (
    HealthResponse,
    Provenance,
    RunRequest,
    RunResponse,
    SweepRequest,
)


def _quad_cfg(req: RunRequest) -> QuadratureConfig:
    q = req.quadrature
    return QuadratureConfig(abs_tol=q.abs_tol, rel_tol=q.rel_tol, max_evals=q.max_evals)


def create_app() -> FastAPI:
    app = FastAPI(title="gaussloop", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(
            status="ok", version=__version__, commands=list(scenarios.COMMANDS)
        )

    @app.post("/run", response_model=RunResponse)
    def run(req: RunRequest):
        try:
            resolved, rows, summary = scenarios.run_scenario(
                req.command, req.params, _quad_cfg(req)
            )
        except ScenarioError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return RunResponse(
            provenance=Provenance(**scenarios.provenance(req.command, resolved)),
            rows=rows,
            summary=summary,
        )

    @app.post("/sweep", response_model=RunResponse)
    def sweep(req: SweepRequest):
        try:
            resolved = scenarios.resolve_params(req.command, req.params)
            rows, summaries = scenarios.run_sweep(
                req.command, req.params, req.sweep.param, req.sweep.values, _quad_cfg(req)
            )
        except ScenarioError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        prov = scenarios.provenance(req.command, resolved)
        prov["params"]["sweep"] = {"param": req.sweep.param, "values": req.sweep.values}
        merged = {}
        for s in summaries:
            merged.update(s)
        return RunResponse(provenance=Provenance(**prov), rows=rows, summary=merged)

    return app
