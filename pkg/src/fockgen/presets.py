"""Named preset runs reproducing the reference protocol curves.

Each preset expands to one or more CSV tables. Curve presets reuse the
runner; the two profile presets emit reduction-factor profiles
|lambda_k|^(2N) against the Fock index for several period multiples.
All presets use g = 0.05 (single mode), g_a/g_b = 0.05/0.03 (two modes)
and zero detuning.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    BellTargetCfg,
    ParamsCfg,
    RunConfig,
    StrategyCfg,
    SuperposedTargetCfg,
    TargetCfg,
)
from .kraus import SystemParams, kraus_diagonal
from .runner import execute, rows_to_csv
from .schedules import tau_excited

_PROFILE_SPECS = [("l1_N1", 1, 1), ("l1_N5", 1, 5), ("l2_N5", 2, 5), ("l3_N5", 3, 5)]
_PROFILE_DIM = 61


def _fock_cfg(n: int, strategy: StrategyCfg, cycles: int) -> RunConfig:
    return RunConfig(target=TargetCfg(fock=n), strategy=strategy, cycles=cycles)


def _superposed_cfg(n: int, strategy: StrategyCfg, cycles: int) -> RunConfig:
    return RunConfig(target=TargetCfg(superposed=SuperposedTargetCfg(n=n)),
                     strategy=strategy, cycles=cycles)


def _bell_cfg(n: int, strategy: StrategyCfg, cycles: int) -> RunConfig:
    return RunConfig(target=TargetCfg(bell=BellTargetCfg(m=n, n=n)),
                     strategy=strategy, cycles=cycles,
                     params=ParamsCfg(g_a=0.05, g_b=0.03))


_UNIFORM = StrategyCfg(kind="uniform")


def _hybrid(l: int, q: int = 5) -> StrategyCfg:
    return StrategyCfg(kind="hybrid_single", l=l, q=q)


def _hybrid2(l: int, q: int, switch: int) -> StrategyCfg:
    return StrategyCfg(kind="hybrid_two_mode", l=l, q=q, switch_round=switch)


def _reduction_profile(n: int) -> tuple[list[str], list[tuple]]:
    """|lambda_k|^(2N) on the excited branch for period multiples of tau_n."""
    params = SystemParams(g=0.05)
    base = tau_excited(n, 1, params)
    ks = np.arange(_PROFILE_DIM)
    profiles = []
    for _, l, cycles in _PROFILE_SPECS:
        coeffs = kraus_diagonal("e", l * base, params, _PROFILE_DIM).coeffs
        profiles.append(np.abs(coeffs) ** (2 * cycles))
    columns = ["k"] + [name for name, _, _ in _PROFILE_SPECS]
    rows = [tuple([int(k)] + [float(prof[k]) for prof in profiles]) for k in ks]
    return columns, rows


def _curve_runs(name: str) -> dict[str, RunConfig]:
    if name == "fig3":
        runs = {}
        for n, cycles in ((5, 20), (10, 30)):
            runs[f"fock{n}_uniform"] = _fock_cfg(n, _UNIFORM, cycles)
            runs[f"fock{n}_hybrid_l2_q5"] = _fock_cfg(n, _hybrid(2), cycles)
            runs[f"fock{n}_hybrid_l3_q5"] = _fock_cfg(n, _hybrid(3), cycles)
        return runs
    if name == "fig4":
        return {f"fock{n}_hybrid_l3_q5": _fock_cfg(n, _hybrid(3), 30) for n in (2, 4, 6, 8)}
    if name == "fig5":
        return {
            "superposed5_uniform": _superposed_cfg(5, _UNIFORM, 20),
            "superposed5_hybrid_l3_q5": _superposed_cfg(5, _hybrid(3), 20),
        }
    if name == "fig7":
        return {f"superposed{n}_hybrid_l3_q5": _superposed_cfg(n, _hybrid(3), 25)
                for n in (2, 4, 6, 8)}
    if name == "fig8":
        return {
            "bell44_uniform": _bell_cfg(4, _UNIFORM, 30),
            "bell44_hybrid_l3_q5_L15": _bell_cfg(4, _hybrid2(3, 5, 15), 30),
        }
    if name == "fig9":
        return {
            "bell11_hybrid_l3_q5_L8": _bell_cfg(1, _hybrid2(3, 5, 8), 20),
            "bell33_hybrid_l3_q5_L8": _bell_cfg(3, _hybrid2(3, 5, 8), 25),
            "bell55_hybrid_l3_q5_L8": _bell_cfg(5, _hybrid2(3, 5, 8), 35),
            "bell55_hybrid_l3_q5_L15": _bell_cfg(5, _hybrid2(3, 5, 15), 35),
        }
    raise KeyError(name)


PRESET_NAMES = ["fig2a", "fig2b", "fig3", "fig4", "fig5", "fig7", "fig8", "fig9"]


def list_presets() -> list[str]:
    """Available preset names, one per reproduced figure."""
    return list(PRESET_NAMES)


def run_preset(name: str) -> dict[str, tuple[list[str], list[tuple]]]:
    """Compute every table of a preset; returns {stem: (columns, rows)}."""
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
    if name == "fig2a":
        return {"reduction_profile_n5": _reduction_profile(5)}
    if name == "fig2b":
        return {"reduction_profile_n10": _reduction_profile(10)}
    tables = {}
    for stem, cfg in _curve_runs(name).items():
        result = execute(cfg)
        tables[stem] = (result.columns, result.rows)
    return tables


def write_preset(name: str, out_dir: str | Path) -> dict:
    """Run a preset and write its CSVs plus a manifest into out_dir."""
    started = time.perf_counter()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for stem, (columns, rows) in run_preset(name).items():
        path = out / f"{stem}.csv"
        path.write_text(rows_to_csv(columns, rows))
        files.append(path.name)
    manifest = {
        "preset": name,
        "version": __version__,
        "outputs": sorted(files),
        "wall_time_s": time.perf_counter() - started,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
