"""Request and response models for the HTTP service.

Run requests reuse RunConfig directly, so the wire format equals the CLI's
JSON config format.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from ..config import ParamsCfg, TargetCfg


class HealthResponse(BaseModel):
    status: str
    version: str


class PresetListResponse(BaseModel):
    presets: list[str]


class Table(BaseModel):
    columns: list[str]
    rows: list[list[float]]


class RunResponse(BaseModel):
    columns: list[str]
    rows: list[list[float]]
    manifest: dict


class PresetResponse(BaseModel):
    name: str
    curves: dict[str, Table]


class SweepRequest(BaseModel):
    target: TargetCfg
    params: ParamsCfg = ParamsCfg()
    cycles: int = Field(default=20, ge=1)
    l_values: list[int] = [1, 2, 3]
    q_values: list[int] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
    switch_values: Optional[list[int]] = None


class SweepBest(BaseModel):
    l: int
    q: int
    switch_round: Optional[int]
    fidelity: float
    success: float


class SweepResponse(BaseModel):
    best: SweepBest
    table: Table
