import json
import math
import subprocess
import sys

import numpy as np
import pytest

from strongdrive.cli import (RunConfig, format_complex, main, parse_args,
                             parse_complex, run)


def read_csv(path):
    return np.genfromtxt(path, delimiter=",", names=True)


def read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


# ---------------------------------------------------------------------------
# argument parsing


def test_parse_complex_accepts_both_imaginary_markers():
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("1+2j") == 1 + 2j
    assert parse_complex("-0.5i") == -0.5j
    assert parse_complex("2") == 2 + 0j
    assert parse_complex(" 0.6 - 0.8i ") == 0.6 - 0.8j
    with pytest.raises(ValueError):
        parse_complex("one+twoi")


def test_format_complex_round_trips():
    for z in (0.6 - 0.8j, 1 + 0j, -1j, 0.12345678901234567 + 1e-17j):
        assert parse_complex(format_complex(z)) == z


def test_parse_args_defaults():
    cfg = parse_args(["simulate"])
    assert cfg.command == "simulate"
    assert cfg.delta == (0.1,)
    assert cfg.g == 1.0
    assert cfg.omega == (1.0,)
    assert cfg.alpha == 1.0 + 0j
    assert cfg.beta == 0j
    assert cfg.t_max == 10.0
    assert cfg.samples is None
    assert cfg.order == 1
    assert not cfg.plot


def test_parse_args_flags_win():
    cfg = parse_args(["approx", "--delta", "0.3", "--g", "2.5", "--omega",
                      "0.8", "--t-max", "4.5", "--samples", "33",
                      "--rel-tol", "1e-9", "--quad-tol", "1e-11",
                      "--order", "2", "--out", "x.csv", "--plot"])
    assert cfg.delta == (0.3,)
    assert cfg.g == 2.5
    assert cfg.omega == (0.8,)
    assert cfg.t_max == 4.5
    assert cfg.samples == 33
    assert cfg.rel_tol == 1e-9
    assert cfg.quad_tol == 1e-11
    assert cfg.order == 2
    assert cfg.out == "x.csv"
    assert cfg.plot


def test_parse_args_usage_errors():
    for argv in (
        ["simulate", "--omega", "0"],
        ["simulate", "--omega", "-1"],
        ["simulate", "--delta", "-0.1"],
        ["simulate", "--g", "-1"],
        ["simulate", "--t-max", "0"],
        ["simulate", "--samples", "1"],
        ["simulate", "--rel-tol", "0.01"],
        ["simulate", "--order", "-1"],
        ["simulate", "--delta", "0.1,0.2"],  # list only for scan-delta
        ["approx", "--omega", "1,2"],        # list only for scan-rwa
        ["nonsense"],
    ):
        with pytest.raises(SystemExit) as exc:
            parse_args(argv)
        assert exc.value.code == 2


def test_amplitude_modes():
    cfg = parse_args(["approx", "--alpha", "0.6", "--beta", "0.8i"])
    assert cfg.alpha == 0.6 and cfg.beta == 0.8j

    cfg = parse_args(["approx", "--equal-superposition", "--theta", "0.5"])
    expected = np.exp(0.5j) / math.sqrt(2.0)
    assert np.isclose(cfg.alpha, expected) and np.isclose(cfg.beta, expected)

    # lab-frame initial state is rotated into (alpha, beta)
    cfg = parse_args(["approx", "--psi0", "1", "--psi1", "0"])
    r = 1.0 / math.sqrt(2.0)
    assert np.isclose(cfg.alpha, r) and np.isclose(cfg.beta, r)


def test_amplitude_conflicts_exit_2():
    for argv in (
        ["approx", "--alpha", "0.6", "--beta", "0.6"],      # not normalized
        ["approx", "--theta", "0.5"],                       # needs the mode
        ["approx", "--psi0", "1"],                          # missing psi1
        ["approx", "--psi0", "1", "--psi1", "1"],           # not normalized
        ["approx", "--psi0", "1", "--psi1", "0", "--theta", "1"],
        ["approx", "--psi0", "1", "--psi1", "0", "--alpha", "0.6",
         "--beta", "0.8i"],
        ["approx", "--equal-superposition", "--alpha", "0.6",
         "--beta", "0.8i"],
        # an explicit flag conflicts even when its value equals the default
        ["approx", "--equal-superposition", "--alpha", "1"],
        ["approx", "--psi0", "1", "--psi1", "0", "--beta", "0"],
    ):
        with pytest.raises(SystemExit) as exc:
            parse_args(argv)
        assert exc.value.code == 2


# ---------------------------------------------------------------------------
# config file handling


def test_config_file_overrides_defaults(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"g": 2.5, "tmax": 4.0, "order": 2}))
    cfg = parse_args(["simulate", "--config", str(path)])
    assert cfg.g == 2.5
    assert cfg.t_max == 4.0
    assert cfg.order == 2
    assert cfg.omega == (1.0,)  # untouched default


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"g": 2.5, "tmax": 4.0}))
    cfg = parse_args(["simulate", "--config", str(path), "--g", "3.5"])
    assert cfg.g == 3.5
    assert cfg.t_max == 4.0


def test_config_file_errors(tmp_path):
    bad_key = tmp_path / "a.json"
    bad_key.write_text(json.dumps({"gee": 1.0}))
    not_dict = tmp_path / "b.json"
    not_dict.write_text(json.dumps([1, 2]))
    not_json = tmp_path / "c.json"
    not_json.write_text("{not json")
    for path in (bad_key, not_dict, not_json, tmp_path / "missing.json"):
        with pytest.raises(SystemExit) as exc:
            parse_args(["simulate", "--config", str(path)])
        assert exc.value.code == 2


def test_config_round_trip(tmp_path):
    argvs = [
        ["approx", "--alpha", "0.6", "--beta", "0.8i", "--t-max", "3.0",
         "--samples", "11"],
        ["approx", "--equal-superposition", "--theta", "1.25"],
        ["approx", "--psi0", "0.6", "--psi1", "0.8i", "--g", "2.0"],
        ["scan-delta", "--delta", "0.05,0.1", "--out", "s.csv"],
    ]
    for k, argv in enumerate(argvs):
        first = parse_args(argv)
        path = tmp_path / f"roundtrip{k}.json"
        path.write_text(json.dumps(first.to_config_dict()))
        second = parse_args([argv[0], "--config", str(path)])
        assert first == second


# ---------------------------------------------------------------------------
# the six commands


def test_simulate_writes_csv(tmp_path, capsys):
    out = tmp_path / "sim.csv"
    code = main(["simulate", "--t-max", "3.0", "--samples", "13",
                 "--out", str(out)])
    assert code == 0
    lines = read_lines(out)
    assert lines[0] == "t,re_psi0,im_psi0,re_psi1,im_psi1,pop_excited,norm"
    assert len(lines) == 14
    data = read_csv(out)
    assert np.allclose(data["norm"], 1.0, atol=1e-8)
    assert np.isclose(data["t"][-1], 3.0)
    summary = capsys.readouterr().out
    assert "simulate: wrote 13 rows" in summary


def test_simulate_default_out_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["simulate", "--t-max", "2.0", "--samples", "5"]) == 0
    assert (tmp_path / "simulate.csv").exists()


def test_repeated_runs_are_byte_identical(tmp_path):
    argv = ["simulate", "--delta", "0.4", "--g", "1.5", "--t-max", "4.0",
            "--samples", "21"]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_approx_csv(tmp_path):
    out = tmp_path / "approx.csv"
    code = main(["approx", "--delta", "0.05", "--t-max", "3.0",
                 "--samples", "7", "--out", str(out)])
    assert code == 0
    data = read_csv(out)
    assert data["norm"].shape == (7,)
    assert np.all(np.abs(data["norm"] - 1.0) < 1e-2)


def test_approx_higher_order(tmp_path, capsys):
    out = tmp_path / "approx2.csv"
    code = main(["approx", "--delta", "0.2", "--order", "2", "--t-max",
                 "2.0", "--samples", "5", "--out", str(out)])
    assert code == 0
    assert "approx: wrote 5 rows" in capsys.readouterr().out


def test_compare_zero_delta_is_exact(tmp_path, capsys):
    out = tmp_path / "cmp.csv"
    code = main(["compare", "--delta", "0", "--t-max", "5.0",
                 "--samples", "11", "--out", str(out)])
    assert code == 0
    data = read_csv(out)
    assert np.all(data["fidelity_vs_exact"] >= 1.0 - 1e-10)
    summary = capsys.readouterr().out
    assert "max infidelity" in summary


def test_compare_header_has_fidelity_column(tmp_path):
    out = tmp_path / "cmp.csv"
    main(["compare", "--t-max", "2.0", "--samples", "5", "--out", str(out)])
    header = read_lines(out)[0]
    assert header == ("t,re_psi0,im_psi0,re_psi1,im_psi1,pop_excited,"
                      "fidelity_vs_exact,norm")


def test_scan_delta_csv(tmp_path):
    out = tmp_path / "scan.csv"
    code = main(["scan-delta", "--delta", "0.05,0.1", "--t-max", "4.0",
                 "--samples", "17", "--out", str(out)])
    assert code == 0
    lines = read_lines(out)
    assert lines[0] == "axis,metric,g,omega,horizon"
    assert len(lines) == 3
    data = read_csv(out)
    assert np.allclose(data["axis"], [0.05, 0.1])
    assert np.all(data["metric"] >= 0.0)


def test_scan_rwa_csv(tmp_path):
    out = tmp_path / "scan.csv"
    code = main(["scan-rwa", "--omega", "1.0,2.0", "--g", "0.2",
                 "--delta", "1.0", "--t-max", "5.0", "--samples", "33",
                 "--out", str(out)])
    assert code == 0
    lines = read_lines(out)
    assert lines[0] == "axis,metric,delta,g,horizon"
    assert len(lines) == 3


def test_phase_integral_csv(tmp_path):
    out = tmp_path / "phase.csv"
    code = main(["phase-integral", "--g", "2.0", "--t-max", "10.0",
                 "--samples", "21", "--out", str(out)])
    assert code == 0
    data = read_csv(out)
    assert np.all(data["discrepancy"] < 1e-9)
    # both routes evaluate the same integral
    assert np.allclose(data["re_quadrature"], data["re_bessel"], atol=1e-9)
    assert np.allclose(data["im_quadrature"], data["im_bessel"], atol=1e-9)


def test_plot_writes_png(tmp_path):
    out = tmp_path / "sim.csv"
    code = main(["simulate", "--t-max", "2.0", "--samples", "5",
                 "--out", str(out), "--plot"])
    assert code == 0
    png = tmp_path / "sim.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_plot_for_scan(tmp_path):
    out = tmp_path / "scan.csv"
    code = main(["scan-delta", "--delta", "0.05,0.1", "--t-max", "3.0",
                 "--samples", "9", "--out", str(out), "--plot"])
    assert code == 0
    assert (tmp_path / "scan.png").exists()


# ---------------------------------------------------------------------------
# failure paths


def test_unwritable_output_exits_1(tmp_path, capsys):
    out = tmp_path / "no" / "such" / "dir" / "x.csv"
    code = main(["simulate", "--t-max", "1.0", "--samples", "3",
                 "--out", str(out)])
    assert code == 1
    assert "simulate" in capsys.readouterr().err


def test_invalid_params_exit_1(tmp_path, capsys):
    # Bypasses argv validation to hit the runtime failure path.
    cfg = RunConfig(command="scan-delta", delta=(-1.0,), t_max=2.0,
                    samples=5, out=str(tmp_path / "scan.csv"))
    assert run(cfg) == 1
    assert "delta" in capsys.readouterr().err


def test_partial_scan_failure_reports_and_continues(tmp_path, capsys):
    cfg = RunConfig(command="scan-delta", delta=(0.1, -1.0), t_max=2.0,
                    samples=5, out=str(tmp_path / "scan.csv"))
    assert run(cfg) == 0
    captured = capsys.readouterr()
    assert "scan point -1 failed" in captured.err
    assert len(read_lines(tmp_path / "scan.csv")) == 2  # header + one row


def test_console_script_entry(tmp_path):
    out = tmp_path / "cli.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "strongdrive.cli", "simulate", "--t-max",
         "2.0", "--samples", "5", "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert out.exists()
    assert "simulate: wrote 5 rows" in proc.stdout
