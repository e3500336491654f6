"""Request and response models for the computation service."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field, field_validator

from ..scenarios import COMMANDS


class QuadratureSettings(BaseModel):
    abs_tol: float = Field(1e-10, gt=0)
    rel_tol: float = Field(1e-8, ge=0)
    max_evals: int = Field(10_000_000, gt=0)


class RunRequest(BaseModel):
    command: str
    params: dict[str, Any] = Field(default_factory=dict)
    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)

    @field_validator("command")
    @classmethod
    def _known_command(cls, v: str) -> str:
        if v not in COMMANDS:
            raise ValueError(f"unknown command {v!r}; choose from {', '.join(COMMANDS)}")
        return v


class SweepAxis(BaseModel):
    param: str
    values: list[float] = Field(min_length=1)


class SweepRequest(RunRequest):
    sweep: SweepAxis


class Provenance(BaseModel):
    tool: str
    version: str
    command: str
    params: dict[str, Any]


class RunResponse(BaseModel):
    provenance: Provenance
    rows: list[dict[str, Any]]
    summary: dict[str, Any] = Field(default_factory=dict)


class HealthResponse(BaseModel):
    status: str
    version: str
    commands: list[str]
