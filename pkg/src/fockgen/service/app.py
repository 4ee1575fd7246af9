"""FastAPI application exposing runs, presets and strategy sweeps.

All endpoints are stateless and deterministic; results are returned inline
rather than written to disk. Configuration errors map to 422, numerical
failures to 400.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import RunConfig
from ..errors import (
    DegenerateTarget,
    InconsistentStrategy,
    SchemaError,
    TailMassExceeded,
    TruncationTooLarge,
    VanishingBranch,
)
from ..presets import list_presets, run_preset
from ..runner import execute, run_sweep
from .schemas import (
    HealthResponse,
    PresetListResponse,
    PresetResponse,
    RunResponse,
    SweepBest,
    SweepRequest,
    SweepResponse,
    Table,
)

_NUMERICAL_ERRORS = (VanishingBranch, TailMassExceeded, TruncationTooLarge, DegenerateTarget)

app = FastAPI(
    title="fockgen",
    version=__version__,
    description="Measurement-based steering of resonator modes into Fock, "
                "superposed-Fock and two-mode Bell states.",
)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/presets", response_model=PresetListResponse)
def presets() -> PresetListResponse:
    return PresetListResponse(presets=list_presets())


@app.get("/presets/{name}", response_model=PresetResponse)
def preset(name: str) -> PresetResponse:
    try:
        tables = run_preset(name)
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    curves = {stem: Table(columns=cols, rows=[list(map(float, r)) for r in rows])
              for stem, (cols, rows) in tables.items()}
    return PresetResponse(name=name, curves=curves)


@app.post("/run", response_model=RunResponse)
def run(config: RunConfig) -> RunResponse:
    try:
        result = execute(config)
    except (SchemaError, InconsistentStrategy) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except _NUMERICAL_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return RunResponse(columns=result.columns,
                       rows=[list(map(float, row)) for row in result.rows],
                       manifest=result.manifest)


@app.post("/sweep", response_model=SweepResponse)
def sweep(request: SweepRequest) -> SweepResponse:
    config = RunConfig(target=request.target, params=request.params, cycles=request.cycles)
    try:
        outcome = run_sweep(config, request.l_values, request.q_values, request.switch_values)
    except (SchemaError, InconsistentStrategy, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except _NUMERICAL_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    best = SweepBest(l=outcome.best.l, q=outcome.best.q,
                     switch_round=outcome.best.switch_round,
                     fidelity=outcome.fidelity, success=outcome.success)
    table = Table(columns=outcome.columns,
                  rows=[list(map(float, row)) for row in outcome.rows])
    return SweepResponse(best=best, table=table)
