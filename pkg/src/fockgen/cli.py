"""Command-line front end.

Thin client over the runner layer (the same layer the HTTP service exposes).
Exit codes: 0 success, 2 configuration error, 3 numerical failure.

Units: couplings and detunings are quoted in units of the reference
frequency (the ancilla splitting for one mode, the b-mode frequency for
two); periods are in inverse units of the same; hbar = 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import RunConfig, TrajectoriesCfg, parse_config
from .errors import (
    DegenerateTarget,
    InconsistentStrategy,
    SchemaError,
    TailMassExceeded,
    TruncationTooLarge,
    VanishingBranch,
)
from .presets import list_presets, write_preset
from .runner import rows_to_csv, run_sweep, write_run

_CONFIG_ERRORS = (SchemaError, InconsistentStrategy)
_NUMERICAL_ERRORS = (VanishingBranch, TailMassExceeded, TruncationTooLarge, DegenerateTarget)

_UNITS_NOTE = (
    "Frequencies are in units of the reference frequency (qubit splitting for "
    "single-mode runs, b-mode frequency for two-mode runs); time in inverse "
    "units; hbar = 1."
)


def _load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    updates = {}
    if getattr(args, "truncation", None) is not None:
        updates["truncation"] = args.truncation
    traj_updates = {}
    if getattr(args, "seed", None) is not None:
        traj_updates["seed"] = args.seed
    if getattr(args, "trajectories", None) is not None:
        traj_updates["n_traj"] = args.trajectories
        updates["mode"] = "trajectories"
    if traj_updates:
        updates["trajectories"] = TrajectoriesCfg(
            **{**config.trajectories.model_dump(), **traj_updates}
        )
    return config.model_copy(update=updates) if updates else config


def _values(spec: str) -> list[int]:
    """Parse '1,2,3' or inclusive ranges '0:10'."""
    out = []
    for chunk in spec.split(","):
        if ":" in chunk:
            lo, hi = chunk.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    return out


def _cmd_run(args) -> int:
    config = _apply_overrides(_load_config(args.config), args)
    out_dir = args.out or config.out or "out"
    manifest = write_run(config, out_dir)
    print(f"wrote {', '.join(manifest['outputs'])} and manifest.json to {out_dir}")
    return 0


def _cmd_preset(args) -> int:
    manifest = write_preset(args.name, args.out)
    print(f"preset {args.name}: wrote {len(manifest['outputs'])} file(s) to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    config = _apply_overrides(_load_config(args.config), args)
    switch_values = _values(args.switch) if args.switch else None
    outcome = run_sweep(config, _values(args.l), _values(args.q), switch_values)
    best = outcome.best
    label = f"l={best.l} q={best.q}"
    if best.switch_round is not None:
        label += f" L={best.switch_round}"
    print(f"best strategy: {label}  fidelity={outcome.fidelity:.6f}  "
          f"success={outcome.success:.6f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.csv").write_text(rows_to_csv(outcome.columns, outcome.rows))
        best_payload = {"l": best.l, "q": best.q, "switch_round": best.switch_round,
                        "fidelity": outcome.fidelity, "success": outcome.success}
        (out / "sweep_best.json").write_text(json.dumps(best_payload, indent=2) + "\n")
        print(f"wrote sweep.csv and sweep_best.json to {args.out}")
    return 0


def _cmd_list_presets(_args) -> int:
    for name in list_presets():
        print(name)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockgen",
        description="Steer a resonator from a coherent state into Fock, "
                    "superposed-Fock or two-mode Bell states by repeated "
                    "ancilla measurements.",
        epilog=_UNITS_NOTE,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a JSON run configuration")
    run_p.add_argument("config", help="path to the JSON configuration")
    run_p.add_argument("--out", help="output directory (default: config.out or ./out)")
    run_p.add_argument("--seed", type=int, help="override the trajectory seed")
    run_p.add_argument("--trajectories", type=int,
                       help="run this many stochastic trajectories (switches mode)")
    run_p.add_argument("--truncation", type=int, help="override the Fock truncation")
    run_p.set_defaults(func=_cmd_run)

    preset_p = sub.add_parser("preset", help="reproduce a reference curve set")
    preset_p.add_argument("name", help="preset name (see list-presets)")
    preset_p.add_argument("--out", required=True, help="output directory")
    preset_p.set_defaults(func=_cmd_preset)

    sweep_p = sub.add_parser("sweep", help="exhaustive strategy search for a config")
    sweep_p.add_argument("config", help="path to the JSON configuration")
    sweep_p.add_argument("--l", default="1,2,3", help="period multiples, e.g. 1,2,3")
    sweep_p.add_argument("--q", default="1:10", help="short-period rounds, e.g. 1:10")
    sweep_p.add_argument("--switch", help="two-mode switch rounds, e.g. 8,15")
    sweep_p.add_argument("--out", help="write the evaluation table here")
    sweep_p.add_argument("--truncation", type=int, help="override the Fock truncation")
    sweep_p.set_defaults(func=_cmd_sweep)

    list_p = sub.add_parser("list-presets", help="print available preset names")
    list_p.set_defaults(func=_cmd_list_presets)

    serve_p = sub.add_parser("serve", help="start the HTTP service")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
