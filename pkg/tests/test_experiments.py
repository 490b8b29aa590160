import json
import subprocess
import sys

import numpy as np
import pytest

from qcoh.experiments import (
    ConfigError,
    build_config,
    inspect_report,
    parse_int_list,
    read_config_file,
    resolve_state,
    run_additivity_table,
    run_dicke_curves,
    run_experiment,
    run_tradeoff_histograms,
    table_trend_violations,
)
from qcoh.states import save_state_file, ValidationError


# ------------------------------------------------------------- config handling

def test_parse_int_list():
    assert parse_int_list("3,4,5") == (3, 4, 5)
    assert parse_int_list("1-4") == (1, 2, 3, 4)
    assert parse_int_list("1,3-5,8") == (1, 3, 4, 5, 8)
    with pytest.raises(ConfigError):
        parse_int_list(",")


def test_build_config_presets_and_defaults():
    cfg = build_config("additivity_table")
    assert cfg.samples == 20000
    assert cfg.n_qubits == (3, 4, 5)
    assert cfg.ranks == (1, 2, 3, 4)
    ci = build_config("additivity_table", preset="ci", samples=None)
    assert ci.samples == 2000
    custom = build_config("additivity_table", preset="ci", samples=50)
    assert custom.samples == 50


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        build_config("mystery_experiment")
    with pytest.raises(ConfigError):
        build_config("additivity_table", ranks=(9,), n_qubits=(3,))
    with pytest.raises(ConfigError):
        build_config("additivity_table", n_qubits=(2,))
    with pytest.raises(ConfigError):
        build_config("tradeoff_histograms", bins=1)
    with pytest.raises(ConfigError):
        build_config("single_state")


def test_read_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment line\n"
        "qubits = 3,4\n"
        "ranks = 2-3\n"
        "samples = 64\n"
        "seed = 11\n"
        "plot = false\n"
        "out = run.csv\n")
    overrides = read_config_file(path)
    cfg = build_config("tradeoff_histograms", **overrides)
    assert cfg.n_qubits == (3, 4)
    assert cfg.ranks == (2, 3)
    assert cfg.samples == 64
    assert cfg.seed == 11
    assert cfg.out == "run.csv"
    bad = tmp_path / "bad.cfg"
    bad.write_text("mystery = 3\n")
    with pytest.raises(ConfigError):
        read_config_file(bad)


# ----------------------------------------------------------------- experiments

def test_histograms_mass_and_bounds():
    cfg = build_config("tradeoff_histograms", samples=150, seed=5,
                       n_qubits=(3,), ranks=(2, 3), bins=40)
    res = run_tradeoff_histograms(cfg)
    assert res.columns == ("panel", "rank", "n_qubits", "bin_lo", "bin_hi",
                           "rel_freq")
    for panel in "abcd":
        for rank in (2, 3):
            freqs = [r[5] for r in res.rows if r[0] == panel and r[1] == rank]
            assert len(freqs) == 40
            assert abs(sum(freqs) - 1.0) < 1e-9
    # panels (a), (b), (d) respect the trade-off; (c) may exceed 1 but not 2
    for panel in "abd":
        assert res.extras["exceed_fraction"][f"{panel}:rank2:n3"] == 0.0
    top_bin = max(r[4] for r in res.rows if r[0] == "c")
    assert top_bin <= 2.0


def test_histogram_rank3_violates_more_than_rank2():
    cfg = build_config("tradeoff_histograms", samples=400, seed=5,
                       n_qubits=(3,), ranks=(2, 3))
    res = run_tradeoff_histograms(cfg)
    exceed = res.extras["exceed_fraction"]
    assert exceed["c:rank3:n3"] >= exceed["c:rank2:n3"] > 0.0


def test_table_documented_measures_and_trends():
    cfg = build_config("additivity_table", samples=400, seed=7,
                       n_qubits=(3,), ranks=(1, 2, 3, 4))
    res = run_additivity_table(cfg)
    assert res.columns == ("rank", "n_qubits", "measure", "power",
                           "percent_satisfied", "samples", "seed")
    assert len(res.rows) == 4 * 5
    percent = res.extras["percent"]
    assert all(0.0 <= p <= 100.0 for p in percent.values())
    # trends hold up to Monte Carlo noise at this sample size
    assert not table_trend_violations(percent, slack=4.0)


def test_dicke_curves_match_closed_forms():
    cfg = build_config("dicke_curves", n_qubits=(3, 4, 5, 6, 7))
    res = run_dicke_curves(cfg)
    assert res.extras["max_gap"] < 1e-9
    for n, r, measure, normalized, closed, direct in res.rows:
        if normalized:
            assert closed <= 1e-12
        else:
            assert closed >= -1e-12


def test_csv_determinism_and_worker_independence(tmp_path):
    base = dict(samples=60, seed=123, n_qubits=(3,), ranks=(1, 2))
    runs = {}
    for name, workers in (("a", 1), ("b", 1), ("c", 2)):
        cfg = build_config("additivity_table", workers=workers, **base)
        out = tmp_path / f"{name}.csv"
        run_additivity_table(cfg).write(out)
        runs[name] = out.read_bytes()
    assert runs["a"] == runs["b"]
    assert runs["a"] == runs["c"]


def test_histogram_worker_independence():
    base = dict(samples=50, seed=9, n_qubits=(3,), ranks=(2,))
    single = run_tradeoff_histograms(
        build_config("tradeoff_histograms", workers=1, **base))
    double = run_tradeoff_histograms(
        build_config("tradeoff_histograms", workers=2, **base))
    assert single.csv_text() == double.csv_text()


def test_result_write_creates_sidecar(tmp_path):
    cfg = build_config("dicke_curves", n_qubits=(3, 4), out=None)
    res = run_dicke_curves(cfg)
    csv_path, sidecar = res.write(tmp_path / "dicke.csv")
    assert csv_path.exists()
    meta = json.loads(sidecar.read_text())
    assert {"seed", "version", "wall_time_s"} <= set(meta)


# ---------------------------------------------------------------- single state

def test_resolve_named_states():
    for name in ("eq11", "mcs:4", "dicke:3,1", "ghzx:3,0.5"):
        label, rho, _ = resolve_state(name, None)
        assert label == name
        assert abs(np.trace(rho) - 1.0) < 1e-10
    with pytest.raises(ConfigError):
        resolve_state("mystery", None)


def test_inspect_report_eq11():
    label, rho, atol = resolve_state("eq11", None)
    report = inspect_report(rho, label=label, atol=atol)
    assert abs(report["purity"] - 0.5539) < 5e-4
    assert abs(report["C_r_bits"] / 2 + report["M_l"] - 1.1282) < 3e-3
    assert report["n_qubits"] == 2
    assert "additivity" not in report


def test_inspect_report_three_qubits_has_additivity():
    label, rho, atol = resolve_state("dicke:3,1", None)
    report = inspect_report(rho, label=label, atol=atol)
    assert "additivity" in report and "theorem1" in report
    norm = report["additivity"]["C_l1 (normalized)"]
    assert abs(norm.delta - (-10.0 / 63.0)) < 1e-10


def test_inspect_rejects_invalid_state():
    with pytest.raises(ValidationError):
        inspect_report(np.diag([0.6, 0.5]), label="bad")


def test_run_experiment_dispatch():
    report = run_experiment(build_config("single_state", state="mcs:2"))
    assert abs(report["C_l1"] - 1.0) < 1e-12


# ------------------------------------------------------------------------- CLI

def _qcoh(*args):
    return subprocess.run([sys.executable, "-m", "qcoh.cli", *args],
                          capture_output=True, text=True, timeout=300)


def test_cli_inspect_eq11():
    proc = _qcoh("inspect", "--state", "eq11")
    assert proc.returncode == 0
    lines = dict(line.split(":", 1) for line in proc.stdout.splitlines()
                 if ":" in line and not line.startswith(" "))
    assert abs(float(lines["purity"]) - 0.5539) < 5e-4


def test_cli_inspect_state_file(tmp_path):
    path = tmp_path / "mixed.txt"
    save_state_file(path, np.eye(4) / 4)
    proc = _qcoh("inspect", "--state-file", str(path))
    assert proc.returncode == 0
    assert "C_l1: 0" in proc.stdout
    assert "M_l: 1" in proc.stdout


def test_cli_rejects_unknown_state():
    proc = _qcoh("inspect", "--state", "mystery")
    assert proc.returncode == 2
    assert "error" in proc.stderr


def test_cli_run_with_plot(tmp_path):
    out = tmp_path / "dicke.csv"
    proc = _qcoh("run", "dicke_curves", "--qubits", "3-5",
                 "--out", str(out), "--plot")
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    assert (tmp_path / "dicke.meta.json").exists()
    assert (tmp_path / "dicke_curves.png").exists()


def test_cli_run_table_with_config(tmp_path):
    cfg_file = tmp_path / "t.cfg"
    cfg_file.write_text("qubits = 3\nranks = 1,2\nsamples = 40\nseed = 3\n")
    out = tmp_path / "table.csv"
    proc = _qcoh("run", "additivity_table", "--config", str(cfg_file),
                 "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    header, *rows = out.read_text().splitlines()
    assert header == "rank,n_qubits,measure,power,percent_satisfied,samples,seed"
    assert len(rows) == 2 * 5
    assert all(row.endswith(",40,3") for row in rows)
