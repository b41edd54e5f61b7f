"""Command-line entry point."""

import json
import math

import numpy as np
import pytest

from movsource.cli import main


def _run(argv):
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


def test_shape_csv_endpoints(tmp_path):
    assert main(["shape", "--q", "2", "--kstar", "pi", "--out", str(tmp_path)]) == 0
    data = np.loadtxt(tmp_path / "F.csv", delimiter=",", skiprows=1)
    assert tuple(data[0]) == (0.0, 1.0)
    assert data[-1, 0] == pytest.approx(math.pi) and abs(data[-1, 1]) < 1e-15
    assert (tmp_path / "F.svg").exists()
    assert json.loads((tmp_path / "manifest.json").read_text())["command"] == "shape"


def test_shape_several_q(tmp_path):
    assert main(["shape", "--q", "2", "6", "14", "--kstar", "pi", "--out", str(tmp_path)]) == 0
    header = (tmp_path / "F.csv").read_text().splitlines()[0]
    assert header == "kappa,F_q2,F_q6,F_q14"


def test_q_zero_is_usage_error(tmp_path):
    assert _run(["shape", "--q", "0", "--out", str(tmp_path)]) == 2


def test_unknown_subcommand():
    assert _run(["frobnicate"]) == 2


def test_delta_sums_to_one(tmp_path):
    assert main(["delta", "--M", "64", "--L", "1", "--x0", str(0.5 + 1 / 29), "--out", str(tmp_path)]) == 0
    data = np.loadtxt(tmp_path / "delta.csv", delimiter=",", skiprows=1)
    h = data[1, 0] - data[0, 0]
    assert np.sum(data[:, 1]) * h == pytest.approx(1.0, abs=1e-12)
    j = np.argmax(data[:, 1])
    assert abs(data[j, 0] - (0.5 + 1 / 29)) < h


def test_delta_two_kstar_columns(tmp_path):
    assert main(["delta", "--kstar", "pi", "0.75pi", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "delta.csv").read_text().splitlines()[0].count(",") == 2


def test_kstar_value(tmp_path, capsys):
    assert main(["kstar", "-p", "2", "--v-ratio", str(2 / math.pi), "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "manifest.json").read_text())
    assert data["results"]["kappa_star"] == pytest.approx(math.pi / 2, abs=1e-14)


def test_supersonic_is_numerical_failure(tmp_path):
    assert main(["kstar", "--v-ratio", "1.5", "--out", str(tmp_path)]) == 3


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[kstar]\norder = 2\nv_ratio = 0.5\n")
    out = tmp_path / "a"
    assert main(["kstar", "--config", str(cfg), "--v-ratio", "0.3", "--out", str(out)]) == 0
    resolved = json.loads((out / "manifest.json").read_text())["config"]["resolved"]
    assert resolved["order"] == 2 and resolved["v_ratio"] == 0.3


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[kstar]\nspeed = 0.5\n")
    assert main(["kstar", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_config_unknown_section(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[nonsense]\na = 1\n")
    assert main(["kstar", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_empty_config_uses_defaults(tmp_path):
    cfg = tmp_path / "empty.ini"
    cfg.write_text("")
    assert main(["kstar", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    resolved = json.loads((tmp_path / "manifest.json").read_text())["config"]["resolved"]
    assert resolved == {"order": 4, "v_ratio": 0.0, "vmax_factor": 1.0}


def test_window_study_cell(tmp_path):
    assert main(["window-study", "--q", "4", "--w", "1/2", "--kstar", "pi", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "window_study_1pi.csv").exists()


def test_converge_advect(tmp_path):
    assert main(["converge-advect", "-p", "2", "--M", "100", "200", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "convergence_advect_p2.csv").read_text().splitlines()
    assert len(lines) == 3


def test_demo_wave1d(tmp_path):
    assert main(["demo-wave1d", "--M", "100", "--out", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "manifest.json").read_text())["results"]
    assert res["high_wavenumber_fraction"] < 1e-6


def test_converge_wave2d_small(tmp_path):
    argv = ["converge-wave2d", "-p", "4", "--N", "41", "81", "--N-ref", "161", "--out", str(tmp_path)]
    with pytest.warns(Warning):
        assert main(argv) == 0
    assert (tmp_path / "convergence_wave2d_p4.csv").exists()


def test_converge_wave2d_bad_nesting(tmp_path):
    argv = ["converge-wave2d", "--N", "41", "61", "--N-ref", "161", "--out", str(tmp_path)]
    assert main(argv) == 2
