"""Drive a validated configuration to curves, CSV files and a run manifest.

This is the single execution layer shared by the CLI and the HTTP service:
both hand a RunConfig here and receive columns + rows back. File output is
deterministic: a fixed config and seed give byte-identical CSVs; the manifest
additionally records wall time and is therefore not byte-stable.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__, metrics
from .config import RunConfig, serialize_config, to_params, to_strategy, to_target
from .protocol import run_postselected, trajectory_ensemble
from .schedules import (
    BELL,
    FOCK,
    StrategySpec,
    TargetSpec,
    build_schedule,
    default_dims,
    initial_amplitude,
    initial_state,
    optimize_schedule,
)
from .hilbert import fidelity

SINGLE_COLUMNS = ["N", "fidelity", "success_prob"]
PAIR_COLUMNS = ["N", "fidelity_plus", "fidelity_minus", "success_prob"]


@dataclass(frozen=True)
class RunResult:
    columns: list[str]
    rows: list[tuple]
    manifest: dict


def _resolved_dims(target: TargetSpec, truncation: int | None):
    if truncation is None:
        return default_dims(target)
    if target.kind == BELL:
        return truncation, truncation
    return truncation


def _format_value(value) -> str:
    if isinstance(value, (int,)):
        return str(value)
    return f"{value:.12g}"


def rows_to_csv(columns: list[str], rows: list[tuple]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def _pair_rows(record, target: TargetSpec, dims) -> list[tuple]:
    """F_plus / F_minus per cycle from the snapshots of one engine pass."""
    minus_state = target.with_sign(-target.sign).state(dims)
    rows = []
    for i, state in enumerate(record.states):
        f_here = float(record.fidelity[i])
        f_other = fidelity(state, minus_state)
        f_plus, f_minus = (f_here, f_other) if target.sign == 1 else (f_other, f_here)
        rows.append((i, f_plus, f_minus, float(record.success[i])))
    return rows


def execute(config: RunConfig) -> RunResult:
    """Run one configuration and return its table plus manifest metadata."""
    started = time.perf_counter()
    target = to_target(config)
    params = to_params(config)
    strategy = to_strategy(config)
    dims = _resolved_dims(target, config.truncation)
    extra: dict = {}

    if config.mode == "closed_form":
        columns, rows = _closed_form_rows(config, target, params, dims)
    elif config.mode == "trajectories":
        columns, rows, extra = _trajectory_rows(config, target, params, strategy, dims)
    else:
        columns, rows = _postselected_rows(target, params, strategy, dims)

    manifest = {
        "config": json.loads(serialize_config(config)),
        "version": __version__,
        "mode": config.mode,
        "seed": config.trajectories.seed if config.mode == "trajectories" else None,
        "wall_time_s": time.perf_counter() - started,
    }
    manifest.update(extra)
    return RunResult(columns=columns, rows=rows, manifest=manifest)


def _postselected_rows(target, params, strategy, dims):
    start = initial_state(target, dims)
    schedule = build_schedule(target, strategy, params)
    if target.kind == FOCK:
        record = run_postselected(start, schedule, target.state(dims))
        rows = [(int(n), float(f), float(p))
                for n, f, p in zip(record.cycles, record.fidelity, record.success)]
        return SINGLE_COLUMNS, rows
    record = run_postselected(start, schedule, target.state(dims), keep_states=True)
    return PAIR_COLUMNS, _pair_rows(record, target, dims)


def _closed_form_rows(config, target, params, dims):
    schedule = build_schedule(target, to_strategy(config), params)
    tau = schedule[0].tau
    if target.kind == FOCK:
        curve = metrics.fock_curve(target.n, config.cycles, tau, params,
                                   initial_amplitude(target), dim=dims)
        rows = [(int(n), float(f), float(p))
                for n, f, p in zip(curve.cycles, curve.fidelity, curve.success)]
        return SINGLE_COLUMNS, rows
    if target.kind == BELL:
        curve = metrics.bell_curve(target, config.cycles, tau, params, dims=dims)
    else:
        curve = metrics.superposed_curve(target, config.cycles, tau, params, dim=dims)
    rows = [(int(n), float(fp), float(fm), float(p))
            for n, fp, fm, p in zip(curve.cycles, curve.fidelity_plus,
                                    curve.fidelity_minus, curve.success)]
    return PAIR_COLUMNS, rows


def _trajectory_rows(config, target, params, strategy, dims):
    start = initial_state(target, dims)
    schedule = build_schedule(target, strategy, params)
    traj = config.trajectories
    ensemble = trajectory_ensemble(start, schedule, traj.n_traj, traj.seed,
                                   target=target.state(dims),
                                   max_restarts=traj.max_restarts)
    stats = ensemble.stats
    survival = [stats.survivors_past(n) / stats.attempts for n in range(len(schedule) + 1)]

    if target.kind == FOCK:
        record = run_postselected(start, schedule, target.state(dims))
        rows = [(int(n), float(f), float(s))
                for n, f, s in zip(record.cycles, record.fidelity, survival)]
        columns = SINGLE_COLUMNS
    else:
        record = run_postselected(start, schedule, target.state(dims), keep_states=True)
        pair = _pair_rows(record, target, dims)
        rows = [(n, fp, fm, float(s)) for (n, fp, fm, _), s in zip(pair, survival)]
        columns = PAIR_COLUMNS
    extra = {
        "trajectory_stats": {
            "n_traj": traj.n_traj,
            "attempts": stats.attempts,
            "accepted_full_runs": stats.accepted_full_runs,
            "total_cycles": stats.total_cycles,
            "acceptance_rate": ensemble.acceptance_rate,
            "mean_final_fidelity": ensemble.mean_final_fidelity,
            "failure_counts": stats.failure_counts.tolist(),
        }
    }
    return columns, rows, extra


def write_run(config: RunConfig, out_dir: str | Path, stem: str = "results") -> dict:
    """Execute a config and write `<stem>.csv` plus `manifest.json` into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = execute(config)
    csv_path = out / f"{stem}.csv"
    csv_path.write_text(rows_to_csv(result.columns, result.rows))
    manifest = dict(result.manifest)
    manifest["outputs"] = [csv_path.name]
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


@dataclass(frozen=True)
class SweepOutcome:
    best: StrategySpec
    fidelity: float
    success: float
    columns: list[str]
    rows: list[tuple]


def run_sweep(config: RunConfig, l_values, q_values, switch_values=None) -> SweepOutcome:
    """Exhaustive strategy search for the config's target within its cycle budget."""
    target = to_target(config)
    params = to_params(config)
    result = optimize_schedule(target, params, config.cycles, l_values, q_values,
                               switch_values=switch_values)
    two_mode = target.kind == BELL
    columns = (["l", "q", "switch_round", "final_fidelity", "final_success"]
               if two_mode else ["l", "q", "final_fidelity", "final_success"])
    rows = []
    for strat, fid, succ in result.evaluations:
        if two_mode:
            rows.append((strat.l, strat.q, strat.switch_round, fid, succ))
        else:
            rows.append((strat.l, strat.q, fid, succ))
    return SweepOutcome(best=result.strategy, fidelity=result.fidelity,
                        success=result.success, columns=columns, rows=rows)
