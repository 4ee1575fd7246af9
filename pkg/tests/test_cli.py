"""CLI behavior: subcommands, exit codes, file outputs."""

import json

from fockgen.cli import main


def write_cfg(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_run_subcommand_writes_outputs(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"target": {"fock": 2}, "cycles": 6})
    code = main(["run", cfg, "--out", str(tmp_path / "out")])
    assert code == 0
    assert (tmp_path / "out/results.csv").exists()
    assert (tmp_path / "out/manifest.json").exists()
    assert "results.csv" in capsys.readouterr().out


def test_run_uses_config_out_field(tmp_path):
    out_dir = tmp_path / "from_config"
    cfg = write_cfg(tmp_path, {"target": {"fock": 2}, "cycles": 5, "out": str(out_dir)})
    assert main(["run", cfg]) == 0
    assert (out_dir / "results.csv").exists()


def test_run_seed_and_trajectories_flags(tmp_path):
    cfg = write_cfg(tmp_path, {"target": {"fock": 5}, "cycles": 8})
    a = main(["run", cfg, "--out", str(tmp_path / "a"), "--trajectories", "200", "--seed", "3"])
    b = main(["run", cfg, "--out", str(tmp_path / "b"), "--trajectories", "200", "--seed", "3"])
    assert a == b == 0
    assert (tmp_path / "a/results.csv").read_bytes() == (tmp_path / "b/results.csv").read_bytes()
    manifest = json.loads((tmp_path / "a/manifest.json").read_text())
    assert manifest["mode"] == "trajectories"
    assert manifest["seed"] == 3


def test_bad_config_exits_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"target": {"fock": 5}, "bogus": 1})
    assert main(["run", cfg]) == 2
    assert "config error" in capsys.readouterr().err


def test_missing_config_file_exits_2(tmp_path):
    assert main(["run", str(tmp_path / "nope.json")]) == 2


def test_numerical_failure_exits_3(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"target": {"fock": 10}, "truncation": 8})
    assert main(["run", cfg, "--out", str(tmp_path / "out")]) == 3
    assert "numerical failure" in capsys.readouterr().err


def test_list_presets_output(capsys):
    assert main(["list-presets"]) == 0
    names = capsys.readouterr().out.split()
    assert "fig3" in names
    assert "fig9" in names
    assert "fig6" not in names


def test_preset_subcommand(tmp_path):
    assert main(["preset", "fig2a", "--out", str(tmp_path / "p")]) == 0
    manifest = json.loads((tmp_path / "p/manifest.json").read_text())
    assert manifest["preset"] == "fig2a"
    assert (tmp_path / "p/reduction_profile_n5.csv").exists()


def test_unknown_preset_exits_2(tmp_path):
    assert main(["preset", "fig6", "--out", str(tmp_path / "p")]) == 2


def test_sweep_subcommand(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"target": {"fock": 2}, "cycles": 6})
    code = main(["sweep", cfg, "--l", "1,2,3", "--q", "1:6", "--out", str(tmp_path / "s")])
    assert code == 0
    out = capsys.readouterr().out
    assert "best strategy" in out
    assert (tmp_path / "s/sweep.csv").exists()
    best = json.loads((tmp_path / "s/sweep_best.json").read_text())
    assert best["fidelity"] >= 0.99
