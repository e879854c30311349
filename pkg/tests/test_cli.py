import json
import subprocess
import sys
from pathlib import Path

import pytest

from decolab import __version__, cli
from decolab.errors import ValidationError

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


def run(argv, tmp_path, name="out"):
    out = tmp_path / name
    code = cli.main(list(argv) + ["--output-dir", str(out)])
    return code, out


def manifest(out):
    return json.loads((out / "manifest.json").read_text())


def test_cat_wigner_example(tmp_path):
    code, out = run(["run", "cat-wigner", "--sigma", "1", "--L", "6", "--n", "256"], tmp_path)
    assert code == 0
    m = manifest(out)
    assert (out / "wigner_field.csv").exists()
    assert m["results"]["negativity_volume"] > 0
    assert m["params"] == {"sigma": 1.0, "L": 6.0, "n": 256, "x_min": None, "x_max": None, "L_sweep": None}


def test_manifest_fields(tmp_path):
    code, out = run(["run", "two-slit", "--demo", "--seed", "7", "--threads", "2"], tmp_path)
    assert code == 0
    m = manifest(out)
    assert set(m) == {"schema_version", "scenario", "library_version", "seed", "threads",
                      "params", "results", "outputs", "timing"}
    assert m["schema_version"] == 1 and m["library_version"] == __version__
    assert m["seed"] == 7 and m["threads"] == 2 and m["scenario"] == "two-slit"
    assert set(m["timing"]) == {"started_utc", "wall_time_s"} and m["timing"]["wall_time_s"] >= 0
    assert all((out / f).exists() for f in m["outputs"])


def test_two_slit_demo_sum_row(tmp_path):
    code, out = run(["run", "two-slit", "--demo"], tmp_path)
    rows = (out / "two_slit_table.csv").read_text().splitlines()
    total = [r for r in rows if r.startswith("sum")]
    assert code == 0 and len(total) == 1
    assert abs(float(total[0].split(",")[-1])) <= 1e-10
    assert (out / "defect_table.csv").exists()


def test_qbm_fast_preset(tmp_path):
    code, out = run(["run", "qbm-decoherence", "--preset", "fast-test"], tmp_path)
    res = manifest(out)["results"]
    assert code == 0 and (out / "timeseries.csv").exists()
    assert res["predicted_rate"] == pytest.approx(2 * 1 * 1e-3 * 50 * 4.0**2)
    assert res["relative_error"] <= 0.2


@pytest.mark.parametrize("config", sorted(p.name for p in CONFIGS.glob("*.json") if p.name != "qbm-realistic.json"))
def test_committed_configs_are_deterministic(config, tmp_path):
    args = ["run", "--config", str(CONFIGS / config)]
    assert cli.main(args + ["--output-dir", str(tmp_path / "a")]) == 0
    assert cli.main(args + ["--output-dir", str(tmp_path / "b")]) == 0
    a, b = manifest(tmp_path / "a"), manifest(tmp_path / "b")
    assert a["outputs"] and a["results"] == b["results"]
    for name in a["outputs"]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_flag_overrides_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scenario": "cat-wigner", "seed": 3, "params": {"L": 2.0}}))
    code, out = run(["run", "cat-wigner", "--config", str(cfg), "--L", "4"], tmp_path)
    m = manifest(out)
    assert code == 0 and m["params"]["L"] == 4.0 and m["seed"] == 3


def test_seed_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("DECOLAB_SEED", "11")
    assert cli.resolve_seed(None, {}) == 11
    assert cli.resolve_seed(None, {"seed": 4}) == 4
    assert cli.resolve_seed(9, {"seed": 4}) == 9
    code, out = run(["run", "two-slit", "--instances", "5"], tmp_path)
    assert code == 0 and manifest(out)["seed"] == 11
    monkeypatch.setenv("DECOLAB_SEED", "x")
    with pytest.raises(ValidationError):
        cli.resolve_seed(None, {})
    monkeypatch.delenv("DECOLAB_SEED")
    assert cli.resolve_seed(None, {}) == 0


def test_seed_changes_stochastic_output(tmp_path):
    base = ["run", "two-slit", "--instances", "20"]
    run(base + ["--seed", "1"], tmp_path, "a")
    run(base + ["--seed", "2"], tmp_path, "b")
    a = (tmp_path / "a" / "two_slit_instances.csv").read_text()
    b = (tmp_path / "b" / "two_slit_instances.csv").read_text()
    assert a.startswith("# seed=1") and a != b


def test_validation_errors_exit_2(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scenario": "cat-wigner", "params": {"bogus": 1}}))
    assert run(["run", "--config", str(cfg)], tmp_path)[0] == 2
    assert "bogus" in capsys.readouterr().err
    cfg.write_text(json.dumps({"scenario": "cat-wigner", "colour": "red"}))
    assert run(["run", "--config", str(cfg)], tmp_path)[0] == 2
    assert run(["run", "--config", str(tmp_path / "missing.json")], tmp_path)[0] == 2
    assert run(["run", "qbm-decoherence", "--preset", "nope"], tmp_path)[0] == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["run", "cat-wigner", "--n", "many"])
    assert info.value.code == 2


def test_physical_violation_blocks_run(tmp_path, capsys):
    code, out = run(["run", "qbm-decoherence", "--preset", "fast-test", "--dt", "1"], tmp_path)
    assert code == 2 and not out.exists()
    assert "stability bound" in capsys.readouterr().err


def test_guard_abort_exits_3(tmp_path, capsys):
    code, _ = run(["run", "recurrence", "--coupling-ratio", "6"], tmp_path)
    assert code == 3
    assert "'truncation'" in capsys.readouterr().err


def test_validate_preset_prints_hierarchy(capsys):
    assert cli.main(["validate", "--preset", "realistic"]) == 0
    text = capsys.readouterr().out
    assert "classicalisation_time" in text and "hierarchy ordered (factor 10): True" in text
    report = json.loads(text[text.index("{"):])
    assert report["violations"] == []


def test_validate_names_violations(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"scenario": "qbm-decoherence",
                               "params": {"preset": "fast-test", "dt": 0.1, "L": 30.0}}))
    assert cli.main(["validate", str(cfg)]) == 0
    text = capsys.readouterr().out
    violations = json.loads(text[text.index("{"):])["violations"]
    assert any("stability bound" in v for v in violations)
    assert any("grid" in v for v in violations)


def test_validate_unreadable_config_reports(tmp_path, capsys):
    assert cli.main(["validate", str(tmp_path / "none.json")]) == 0
    assert "cannot read config" in capsys.readouterr().out


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "decolab.cli", "run", "histories-check",
                           "--output-dir", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads((tmp_path / "manifest.json").read_text())["results"]["consistent"]
