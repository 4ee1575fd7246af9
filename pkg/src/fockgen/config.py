"""Run configuration: JSON schema, validation and conversion to domain objects.

Configs are strict: unknown keys are rejected and every numeric field is
validated. `parse_config` / `serialize_config` round-trip losslessly.
"""

from __future__ import annotations

import json
import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import SchemaError
from .kraus import SystemParams, TwoModeParams
from .schedules import StrategySpec, TargetSpec

_SIGNS = {"+": 1, "-": -1}
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SuperposedTargetCfg(_StrictModel):
    n: int = Field(ge=1)
    c0: float = _INV_SQRT2
    cn: float = _INV_SQRT2
    sign: Literal["+", "-"] = "+"

    @model_validator(mode="after")
    def _normalized(self):
        norm = self.c0**2 + self.cn**2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"|c0|^2 + |cn|^2 = {norm}, expected 1")
        return self


class BellTargetCfg(_StrictModel):
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    c00: float = _INV_SQRT2
    cmn: float = _INV_SQRT2
    sign: Literal["+", "-"] = "+"

    @model_validator(mode="after")
    def _normalized(self):
        norm = self.c00**2 + self.cmn**2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"|c00|^2 + |cmn|^2 = {norm}, expected 1")
        return self


class TargetCfg(_StrictModel):
    fock: Optional[int] = Field(default=None, ge=1)
    superposed: Optional[SuperposedTargetCfg] = None
    bell: Optional[BellTargetCfg] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [name for name in ("fock", "superposed", "bell") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"exactly one of fock/superposed/bell required, got {given or 'none'}")
        return self

    @property
    def kind(self) -> str:
        if self.fock is not None:
            return "fock"
        return "superposed" if self.superposed is not None else "bell"


class StrategyCfg(_StrictModel):
    kind: Literal["uniform", "hybrid_single", "hybrid_two_mode"] = "uniform"
    l: int = Field(default=1, ge=1)
    q: int = Field(default=0, ge=0)
    switch_round: Optional[int] = Field(default=None, ge=1)


class ParamsCfg(_StrictModel):
    g: float = Field(default=0.05, gt=0)
    delta: float = 0.0
    g_a: float = Field(default=0.05, gt=0)
    g_b: float = Field(default=0.03, gt=0)
    g_a_after: Optional[float] = Field(default=None, gt=0)
    g_b_after: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _finite(self):
        for name in ("g", "delta", "g_a", "g_b"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        return self


class TrajectoriesCfg(_StrictModel):
    n_traj: int = Field(default=1000, ge=1)
    seed: int = 0
    max_restarts: int = Field(default=1_000_000, ge=0)


class RunConfig(_StrictModel):
    target: TargetCfg
    strategy: StrategyCfg = StrategyCfg()
    params: ParamsCfg = ParamsCfg()
    cycles: int = Field(default=20, ge=1)
    truncation: Optional[int] = Field(default=None, ge=2)
    mode: Literal["postselected", "closed_form", "trajectories"] = "postselected"
    trajectories: TrajectoriesCfg = TrajectoriesCfg()
    out: Optional[str] = None

    @model_validator(mode="after")
    def _consistent(self):
        if self.strategy.q > self.cycles:
            raise ValueError(f"strategy.q = {self.strategy.q} exceeds cycles = {self.cycles}")
        if self.strategy.kind == "hybrid_two_mode":
            if self.target.kind != "bell":
                raise ValueError("hybrid_two_mode strategy requires a bell target")
            if self.strategy.switch_round is None:
                raise ValueError("hybrid_two_mode strategy requires switch_round")
            if not self.strategy.q <= self.strategy.switch_round <= self.cycles:
                raise ValueError("switch_round must satisfy q <= switch_round <= cycles")
        if self.strategy.kind == "hybrid_single" and self.target.kind == "bell":
            raise ValueError("bell targets take uniform or hybrid_two_mode strategies")
        if self.mode == "closed_form" and self.strategy.kind != "uniform":
            raise ValueError("closed_form mode applies to uniform strategies only")
        return self


def _format_path(loc) -> str:
    parts = []
    for item in loc:
        parts.append(f"[{item}]" if isinstance(item, int) else str(item))
    return ".".join(parts).replace(".[", "[")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run configuration.

    Raises SchemaError carrying the path of the first offending field.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    try:
        return RunConfig.model_validate(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise SchemaError(first["msg"], path=_format_path(first["loc"])) from exc


def serialize_config(config: RunConfig) -> str:
    """Canonical JSON form; parse_config(serialize_config(c)) == c."""
    return config.model_dump_json(indent=2)


def to_target(config: RunConfig) -> TargetSpec:
    tgt = config.target
    if tgt.fock is not None:
        return TargetSpec.fock(tgt.fock)
    if tgt.superposed is not None:
        s = tgt.superposed
        return TargetSpec.superposed(s.n, c_low=s.c0, c_high=s.cn, sign=_SIGNS[s.sign])
    b = tgt.bell
    return TargetSpec.bell(b.m, b.n, c_low=b.c00, c_high=b.cmn, sign=_SIGNS[b.sign])


def to_params(config: RunConfig) -> SystemParams | TwoModeParams:
    p = config.params
    if config.target.kind == "bell":
        return TwoModeParams(g_a=p.g_a, g_b=p.g_b, delta=p.delta)
    return SystemParams(g=p.g, delta=p.delta)


def to_strategy(config: RunConfig) -> StrategySpec:
    s = config.strategy
    if s.kind == "uniform":
        return StrategySpec.uniform(config.cycles)
    if s.kind == "hybrid_single":
        return StrategySpec.hybrid(l=s.l, q=s.q, cycles=config.cycles)
    p = config.params
    before = TwoModeParams(g_a=p.g_a, g_b=p.g_b, delta=p.delta)
    if p.g_a_after is not None or p.g_b_after is not None:
        after = TwoModeParams(g_a=p.g_a_after if p.g_a_after is not None else p.g_b,
                              g_b=p.g_b_after if p.g_b_after is not None else p.g_a,
                              delta=p.delta)
    else:
        after = before.swapped()
    return StrategySpec.hybrid_two_mode(l=s.l, q=s.q, switch_round=s.switch_round,
                                        cycles=config.cycles,
                                        params_before=before, params_after=after)
