"""Runner layer: tables, CSV formatting, manifests, determinism."""

import json
import math

import numpy as np
import pytest

from fockgen.config import parse_config
from fockgen.errors import TailMassExceeded
from fockgen.runner import execute, rows_to_csv, run_sweep, write_run


def cfg(payload):
    return parse_config(json.dumps(payload))


def test_fock_run_columns_and_first_row():
    result = execute(cfg({"target": {"fock": 5}}))
    assert result.columns == ["N", "fidelity", "success_prob"]
    n0, f0, p0 = result.rows[0]
    assert n0 == 0 and p0 == 1.0
    assert np.isclose(f0, math.exp(-5) * 5**5 / 120, rtol=1e-12)
    assert len(result.rows) == 21


def test_superposed_run_has_pair_columns():
    result = execute(cfg({"target": {"superposed": {"n": 5}},
                          "strategy": {"kind": "hybrid_single", "l": 3, "q": 5},
                          "cycles": 10}))
    assert result.columns == ["N", "fidelity_plus", "fidelity_minus", "success_prob"]
    _, f_plus, f_minus, _ = result.rows[10]
    assert f_plus >= 0.99
    assert f_minus < 0.01


def test_negative_sign_target_swaps_pair():
    plus = execute(cfg({"target": {"superposed": {"n": 5}}, "cycles": 7}))
    minus = execute(cfg({"target": {"superposed": {"n": 5, "sign": "-"}}, "cycles": 7}))
    for row_p, row_m in zip(plus.rows, minus.rows):
        assert np.isclose(row_p[1], row_m[1], atol=1e-12)
        assert np.isclose(row_p[2], row_m[2], atol=1e-12)


def test_closed_form_agrees_with_postselected():
    base = {"target": {"fock": 5}, "cycles": 25}
    sim = execute(cfg(base))
    closed = execute(cfg({**base, "mode": "closed_form"}))
    assert closed.columns == sim.columns
    for row_sim, row_closed in zip(sim.rows, closed.rows):
        assert abs(row_sim[1] - row_closed[1]) < 1e-10
        assert abs(row_sim[2] - row_closed[2]) < 1e-10


def test_closed_form_pair_agrees_with_postselected():
    base = {"target": {"bell": {"m": 4, "n": 4}}, "cycles": 12}
    sim = execute(cfg(base))
    closed = execute(cfg({**base, "mode": "closed_form"}))
    for row_sim, row_closed in zip(sim.rows, closed.rows):
        for i in (1, 2, 3):
            assert abs(row_sim[i] - row_closed[i]) < 1e-10


def test_trajectories_mode_manifest_stats():
    result = execute(cfg({"target": {"fock": 5},
                          "strategy": {"kind": "hybrid_single", "l": 3, "q": 5},
                          "cycles": 8,
                          "mode": "trajectories",
                          "trajectories": {"n_traj": 200, "seed": 4}}))
    stats = result.manifest["trajectory_stats"]
    assert stats["accepted_full_runs"] <= stats["attempts"]
    assert stats["n_traj"] == 200
    assert result.manifest["seed"] == 4
    survival = [row[-1] for row in result.rows]
    assert survival[0] == 1.0
    assert all(a >= b for a, b in zip(survival, survival[1:]))


def test_csv_formatting_twelve_significant_digits():
    text = rows_to_csv(["N", "fidelity"], [(0, 0.6869173079462794), (1, 1.0)])
    lines = text.strip().split("\n")
    assert lines[0] == "N,fidelity"
    assert lines[1] == "0,0.686917307946"
    assert lines[2] == "1,1"


def test_write_run_outputs_and_manifest(tmp_path):
    manifest = write_run(cfg({"target": {"fock": 2}, "cycles": 6}), tmp_path)
    assert (tmp_path / "results.csv").exists()
    assert (tmp_path / "manifest.json").exists()
    assert manifest["outputs"] == ["results.csv"]
    stored = json.loads((tmp_path / "manifest.json").read_text())
    assert stored["config"]["target"]["fock"] == 2
    assert stored["version"]
    assert stored["wall_time_s"] >= 0


def test_reruns_byte_identical(tmp_path):
    payload = {"target": {"fock": 5},
               "strategy": {"kind": "hybrid_single", "l": 3, "q": 5},
               "cycles": 10,
               "mode": "trajectories",
               "trajectories": {"n_traj": 300, "seed": 12}}
    write_run(cfg(payload), tmp_path / "a")
    write_run(cfg(payload), tmp_path / "b")
    assert (tmp_path / "a/results.csv").read_bytes() == (tmp_path / "b/results.csv").read_bytes()


def test_different_seeds_differ(tmp_path):
    base = {"target": {"fock": 5}, "cycles": 10, "mode": "trajectories"}
    write_run(cfg({**base, "trajectories": {"n_traj": 300, "seed": 1}}), tmp_path / "a")
    write_run(cfg({**base, "trajectories": {"n_traj": 300, "seed": 2}}), tmp_path / "b")
    assert (tmp_path / "a/results.csv").read_bytes() != (tmp_path / "b/results.csv").read_bytes()


def test_truncation_override_too_small_raises():
    with pytest.raises(TailMassExceeded):
        execute(cfg({"target": {"fock": 10}, "truncation": 8}))


def test_sweep_outcome():
    outcome = run_sweep(cfg({"target": {"fock": 2}, "cycles": 6}),
                        l_values=(1, 2, 3), q_values=range(1, 7))
    assert outcome.columns == ["l", "q", "final_fidelity", "final_success"]
    assert outcome.fidelity >= 0.99
    assert len(outcome.rows) == 3 * 6
    best_row = max(outcome.rows, key=lambda r: r[2])
    assert np.isclose(best_row[2], outcome.fidelity, atol=1e-15)


def test_sweep_two_mode_columns():
    outcome = run_sweep(cfg({"target": {"bell": {"m": 1, "n": 1}}, "cycles": 10}),
                        l_values=(3,), q_values=(3, 5), switch_values=(6, 8))
    assert outcome.columns == ["l", "q", "switch_round", "final_fidelity", "final_success"]
    assert outcome.best.switch_round in (6, 8)
