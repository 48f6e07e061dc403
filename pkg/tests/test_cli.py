import json
import os

import numpy as np
import pytest

from greedyrat import make_synthetic
from greedyrat.cli import main, parse_config, ConfigError


@pytest.fixture
def synthetic_setup(tmp_path):
    sys = make_synthetic([2j, 8j, 30j, 70j], 0, m=2, p=2)
    prefix = str(tmp_path / "sys")
    sys.save_matrix_market(prefix)
    return tmp_path, prefix


def write_config(tmp_path, prefix, name="run.cfg", **overrides):
    values = {
        "system": prefix,
        "f_min": 1.0,
        "f_max": 100.0,
        "grid_size": 1000,
        "tol": 1e-3,
        "delta": 1e-8,
        "fitter": "loewner",
        "termination": "lookahead",
        "max_samples": 40,
        "seed": 0,
        "output_dir": str(tmp_path / "out"),
    }
    values.update(overrides)
    path = tmp_path / name
    path.write_text("# test configuration\n" + "".join(f"{k} = {v}\n" for k, v in values.items()))
    return str(path)


def read_csv_body(path):
    with open(path) as f:
        return [line for line in f if not line.startswith("#")]


def test_run_writes_artifacts(synthetic_setup):
    tmp_path, prefix = synthetic_setup
    cfg = write_config(tmp_path, prefix)
    assert main(["run", cfg]) == 0
    out = tmp_path / "out"
    assert (out / "samples.csv").exists()
    assert (out / "ledger.csv").exists()
    assert (out / "surrogate.json").exists()
    meta = json.loads((out / "surrogate.json").read_text())
    assert meta["termination_reason"] == "lookahead"
    sampled = set(meta["sampled_f"])
    support_f = {im for _, im in meta["support"]}
    assert support_f <= sampled


def test_run_exit_code_on_safety_cap(synthetic_setup):
    tmp_path, prefix = synthetic_setup
    cfg = write_config(tmp_path, prefix, tol=1e-15, max_samples=6)
    assert main(["run", cfg]) == 2


def test_invalid_termination_kind_names_key(tmp_path, synthetic_setup, capsys):
    tmp_path, prefix = synthetic_setup
    cfg = write_config(tmp_path, prefix, termination="bogus")
    assert main(["run", cfg]) == 1
    assert "bogus" in capsys.readouterr().err


def test_unknown_config_key_reports_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("system = x\nf_min = 1\nf_max = 2\nwat = 3\n")
    with pytest.raises(ConfigError, match=r"bad\.cfg:4.*'wat'"):
        parse_config(str(path))


def test_missing_files_exit_1(tmp_path, capsys):
    cfg = write_config(tmp_path, str(tmp_path / "nope"))
    assert main(["run", cfg]) == 1


def test_run_is_deterministic(synthetic_setup):
    tmp_path, prefix = synthetic_setup
    cfg_a = write_config(tmp_path, prefix, name="a.cfg", output_dir=str(tmp_path / "a"))
    cfg_b = write_config(tmp_path, prefix, name="b.cfg", output_dir=str(tmp_path / "b"))
    assert main(["run", cfg_a]) == 0
    assert main(["run", cfg_b]) == 0
    for name in ("samples.csv", "ledger.csv"):
        assert read_csv_body(tmp_path / "a" / name) == read_csv_body(tmp_path / "b" / name)
    ja = json.loads((tmp_path / "a" / "surrogate.json").read_text())
    jb = json.loads((tmp_path / "b" / "surrogate.json").read_text())
    assert ja == jb


def test_validate_exact_recovery(synthetic_setup):
    tmp_path, prefix = synthetic_setup
    cfg = write_config(tmp_path, prefix, termination="lookahead_memory", n_memory=2)
    assert main(["run", cfg]) == 0
    sur_path = str(tmp_path / "out" / "surrogate.json")
    assert main(["validate", cfg, sur_path]) == 0
    rows = read_csv_body(tmp_path / "out" / "validation.csv")
    header = rows[0].strip().split(",")
    assert header[:5] == ["f", "eps", "eta", "resonance", "H_norm"]
    eps = np.array([float(r.split(",")[1]) for r in rows[1:]])
    assert eps.max() <= 1e-3
    # 2x2 system: magnitude columns for every entry of H and the surrogate
    assert sum(c.startswith("absH_") for c in header) == 4
    assert sum(c.startswith("absHs_") for c in header) == 4


def test_validate_ledger_matches_rule(synthetic_setup):
    tmp_path, prefix = synthetic_setup
    cfg = write_config(tmp_path, prefix)
    main(["run", cfg])
    rows = read_csv_body(tmp_path / "out" / "ledger.csv")
    last = rows[-1].strip().split(",")
    samples, cumulative = int(last[1]), int(last[3])
    assert cumulative == samples + 1  # lookahead wastes exactly the final probe


def test_verify_subcommand(synthetic_setup, capsys):
    tmp_path, prefix = synthetic_setup
    # an order-8 system keeps the surrogate inexact, away from gamma ~ 0
    sys = make_synthetic([1j * f for f in (2, 5, 11, 19, 37, 53, 71, 90)], 1, m=2, p=2)
    prefix8 = str(tmp_path / "sys8")
    sys.save_matrix_market(prefix8)
    cfg = write_config(tmp_path, prefix8, termination="max_count", max_samples=7)
    assert main(["verify", cfg]) == 0
    assert (tmp_path / "out" / "verify.csv").exists()
    out = capsys.readouterr().out
    assert "gamma" in out and "Delta_max" in out
