"""Config parsing, CSV plumbing, and end-to-end runs of the experiment driver."""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from qfiwb.cli import (
    EXIT_CONFIG,
    EXIT_PASS,
    EXIT_VIOLATION,
    EXPERIMENTS,
    THREADS_ENV,
    ConfigError,
    _cell,
    _coerce,
    _map_trials,
    build_config,
    main,
    parse_config_text,
    write_csv,
)


def cfg_file(tmp_path: Path, text: str, name: str = "run.cfg") -> str:
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# --- config parsing -----------------------------------------------------------

def test_parse_config_text():
    raw = parse_config_text(
        "# full-line comment\n"
        "\n"
        "n = 4   # trailing comment\n"
        "family = linear\n"
    )
    assert raw == {"n": "4", "family": "linear"}


def test_parse_config_text_rejects_malformed_lines():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("just words\n")
    with pytest.raises(ConfigError, match="duplicate key"):
        parse_config_text("n = 1\nn = 2\n")
    with pytest.raises(ConfigError, match="empty key or value"):
        parse_config_text("n =\n")


def test_build_config_defaults_and_unknown_keys():
    fields = {"n": ("int", 3), "tol": ("float", 1e-9)}
    cfg = build_config("demo", fields, {"n": "5"})
    assert cfg == {"n": 5, "tol": 1e-9}
    with pytest.raises(ConfigError, match="known keys: n, tol"):
        build_config("demo", fields, {"m": "5"})


def test_coerce_typed_values():
    assert _coerce("int", "12", "k") == 12
    assert _coerce("float", "1e3", "k") == 1000.0
    assert _coerce("bool", "true", "k") is True
    assert _coerce("bool", "0", "k") is False
    assert _coerce("str", "ring", "k") == "ring"
    with pytest.raises(ConfigError):
        _coerce("int", "12.5", "k")
    with pytest.raises(ConfigError):
        _coerce("float", "nan", "k")
    with pytest.raises(ConfigError):
        _coerce("float", "inf", "k")
    with pytest.raises(ConfigError):
        _coerce("bool", "yes", "k")


# --- CSV plumbing -------------------------------------------------------------

def test_cell_formats():
    assert _cell(True) == "true"
    assert _cell(np.bool_(False)) == "false"
    assert _cell(7) == "7"
    assert _cell(np.int64(-3)) == "-3"
    assert _cell(0.1) == format(0.1, ".17g")
    assert _cell(np.float64(2.0)) == "2"
    assert _cell("ring") == "ring"
    with pytest.raises(ArithmeticError):
        _cell(math.nan)
    with pytest.raises(ArithmeticError):
        _cell(math.inf)
    with pytest.raises(ValueError):
        _cell("a,b")
    with pytest.raises(ValueError):
        _cell("a\nb")
    with pytest.raises(TypeError):
        _cell([1])


def test_write_csv(tmp_path: Path):
    path = tmp_path / "out.csv"
    write_csv(path, ("a", "b"), [(1, True), (2, False)])
    assert path.read_text() == "a,b\n1,true\n2,false\n"
    with pytest.raises(ValueError, match="row width"):
        write_csv(path, ("a", "b"), [(1,)])


def test_map_trials_preserves_order():
    def worker(t: int) -> tuple:
        if t < 10:
            time.sleep(0.002 * (10 - t))  # finish later trials first
        return (t, t * t)

    expected = [(t, t * t) for t in range(20)]
    assert _map_trials(worker, 20, 1) == expected
    assert _map_trials(worker, 20, 4) == expected


# --- end-to-end runs ----------------------------------------------------------

def test_main_ghz_baseline(tmp_path: Path, capsys):
    cfg = cfg_file(tmp_path, "n_min = 3\nn_max = 4\n")
    rc = main(["ghz-baseline", "--config", cfg, "--out", str(tmp_path / "o")])
    assert rc == EXIT_PASS
    out = capsys.readouterr().out
    assert "ghz-baseline: pass (4 rows)" in out

    csv_lines = (tmp_path / "o" / "ghz-baseline.csv").read_text().splitlines()
    assert csv_lines[0] == "n,family,lam0,lam1,qfi,closed_form,abs_dev,pass"
    assert len(csv_lines) == 5
    assert csv_lines[1].startswith("3,computational,")
    assert csv_lines[2].startswith("3,plus_minus,")
    assert all(line.endswith(",true") for line in csv_lines[1:])

    summary = json.loads((tmp_path / "o" / "ghz-baseline.summary.json").read_text())
    assert summary["experiment"] == "ghz-baseline"
    assert summary["seed"] == 0
    assert summary["rows"] == 4
    assert summary["passed"] is True
    assert summary["config"]["n_max"] == 4
    assert set(summary) == {
        "experiment", "seed", "config", "rows", "passed",
        "worst_abs_dev", "tolerance",
    }


def test_main_unknown_experiment(tmp_path: Path, capsys):
    cfg = cfg_file(tmp_path, "n_min = 3\n")
    rc = main(["no-such-thing", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_CONFIG
    assert "unknown experiment" in capsys.readouterr().err


def test_main_unknown_config_key(tmp_path: Path, capsys):
    cfg = cfg_file(tmp_path, "bogus = 1\n")
    rc = main(["ghz-baseline", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_CONFIG
    assert "unknown config key" in capsys.readouterr().err


def test_main_missing_config_file(tmp_path: Path, capsys):
    rc = main(["ghz-baseline", "--config", str(tmp_path / "absent.cfg"),
               "--out", str(tmp_path)])
    assert rc == EXIT_CONFIG
    assert "cannot read config" in capsys.readouterr().err


def test_main_domain_error_maps_to_config_exit(tmp_path: Path, capsys):
    # The growth exponent fails the threshold's hypothesis at (n=4, c=1.2);
    # the library's ValueError must surface as a clean config failure.
    cfg = cfg_file(tmp_path, "n = 4\nc = 1.2\n")
    rc = main(["result2-verify", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_main_violation_exit(tmp_path: Path):
    # A flat growth budget never turns the symmetric-subspace bound over
    # inside the sweep window, which the runner reports as a failure.
    cfg = cfg_file(tmp_path, "which = thm7\nc = 2.0\n")
    rc = main(["bound-sweep", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_VIOLATION
    summary = json.loads((tmp_path / "bound-sweep.summary.json").read_text())
    assert summary["passed"] is False
    assert summary["turned_over"] is False


def test_main_threads_do_not_change_output(tmp_path: Path, monkeypatch):
    cfg = cfg_file(tmp_path, "trials = 2000\n")
    monkeypatch.delenv(THREADS_ENV, raising=False)
    for args, sub in (
        (["--threads", "1"], "t1"),
        (["--threads", "3"], "t3"),
        ([], "env"),
    ):
        if sub == "env":
            monkeypatch.setenv(THREADS_ENV, "3")
        rc = main(["lemma1-montecarlo", "--config", cfg,
                   "--out", str(tmp_path / sub), *args])
        assert rc == EXIT_PASS
    body = (tmp_path / "t1" / "lemma1-montecarlo.csv").read_bytes()
    assert (tmp_path / "t3" / "lemma1-montecarlo.csv").read_bytes() == body
    assert (tmp_path / "env" / "lemma1-montecarlo.csv").read_bytes() == body


def test_main_seed_override(tmp_path: Path):
    cfg = cfg_file(tmp_path, "trials = 500\n")
    for seed in (None, 1):
        args = ["lemma1-montecarlo", "--config", cfg, "--out",
                str(tmp_path / f"s{seed}")]
        if seed is not None:
            args += ["--seed", str(seed)]
        assert main(args) == EXIT_PASS
    base = (tmp_path / "sNone" / "lemma1-montecarlo.csv").read_text()
    moved = (tmp_path / "s1" / "lemma1-montecarlo.csv").read_text()
    assert base != moved
    summary = json.loads(
        (tmp_path / "s1" / "lemma1-montecarlo.summary.json").read_text()
    )
    assert summary["seed"] == 1


def test_main_invalid_thread_settings(tmp_path: Path, monkeypatch, capsys):
    cfg = cfg_file(tmp_path, "n_min = 3\nn_max = 3\n")
    monkeypatch.setenv(THREADS_ENV, "soup")
    assert main(["ghz-baseline", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG
    monkeypatch.setenv(THREADS_ENV, "0")
    assert main(["ghz-baseline", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG
    capsys.readouterr()


def test_main_net_audit_header_quirk(tmp_path: Path):
    # Deviation audits reuse the cover audit's CSV schema; the second column
    # keeps its name even though it then holds a functional deviation.
    cfg = cfg_file(tmp_path, "audit = prop8\ntrials = 20\neps = 1.0\n")
    rc = main(["net-audit", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_PASS
    lines = (tmp_path / "net-audit.csv").read_text().splitlines()
    assert lines[0] == "trial,distance_to_net,eps,pass"
    assert len(lines) == 21


def test_registry_fields_are_well_formed():
    kinds = {"int", "float", "bool", "str"}
    for name, (fields, runner) in EXPERIMENTS.items():
        assert "seed" in fields
        for key, (kind, default) in fields.items():
            assert kind in kinds, f"{name}.{key}"
            assert default is not None
        assert callable(runner)
