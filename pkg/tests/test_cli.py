import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from polydit import cli
from polydit.shutter import density


def run(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# config: ")
    config = json.loads(lines[0][len("# config: "):])
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    return config, rows[0], np.array(rows[1:], dtype=float)


def test_time_profile_deterministic(capsys):
    argv = ["time-profile", "--mu", "10", "--rho", "0.3", "--tau-stop", "50"]
    a = run(argv, capsys)
    b = run(argv, capsys)
    assert a[0] == 0 and a[1] == b[1]


def test_time_profile_columns_and_round_trip(capsys):
    code, out, _ = run(["time-profile", "--mu", "10", "--rho", "2.5", "--tau-stop", "30", "--tau-step", "0.7"], capsys)
    assert code == 0
    config, header, data = parse_csv(out)
    assert header == ["tau", "density_polymer", "density_continuum_reference", "density_classical"]
    assert config["mu"] == 10
    np.testing.assert_allclose(data[:, 1], density(10, 2.5, data[:, 0]), rtol=1e-12, atol=1e-300)


def test_time_profile_max_difference(capsys):
    # lattice against continuum at mu = 10, rho = 0.3 over tau in [0, 400]
    _, out, _ = run(["time-profile", "--mu", "10", "--rho", "0.3", "--tau-stop", "400", "--tau-step", "0.5"], capsys)
    _, _, data = parse_csv(out)
    assert np.abs(data[:, 1] - data[:, 2]).max() == pytest.approx(0.0811, abs=5e-4)


def test_continuum_time_profile_shape(capsys):
    _, out, _ = run(["time-profile", "--dynamics", "continuum", "--mu", "10", "--rho", "2.5",
                     "--tau-stop", "4", "--tau-step", "0.001"], capsys)
    _, _, data = parse_csv(out)
    i = int(np.argmin(np.abs(data[:, 0] - 4.0)))
    assert data[i, 1] == pytest.approx(0.25, abs=1e-3)
    assert np.all(np.diff(data[1 : i + 1, 1]) >= 0)


def test_json_output(capsys):
    code, out, _ = run(["space-profile", "--tau", "20", "--rho", "0.5", "--mu-lo", "0", "--mu-hi", "5",
                        "--format", "json"], capsys)
    assert code == 0
    objs = json.loads(out)
    assert [o["mu"] for o in objs] == list(range(6))
    assert objs[3]["density_polymer"] == pytest.approx(density(3, 0.5, 20.0), rel=1e-10)


def test_empty_grid_exit_2(capsys):
    code, _, err = run(["time-profile", "--tau-start", "5", "--tau-stop", "5"], capsys)
    assert code == 2
    assert json.loads(err)["error"] == "ConfigError"


@pytest.mark.parametrize("argv", [
    ["spiral", "--kind", "helix"],
    ["time-profile", "--tol", "0.1"],
    ["wave", "--rho", "3.2"],
    ["time-profile", "--mu", "1.5"],
    ["verify", "--suite", "nope"],
])
def test_invalid_config_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert json.loads(err)["exit_code"] == 2


def test_numerical_failure_exit_3(capsys, monkeypatch):
    def boom(*a, **k):
        raise ArithmeticError("did not converge")
    monkeypatch.setattr(cli.shutter, "density", boom)
    code, _, err = run(["time-profile", "--tau-stop", "5"], capsys)
    assert code == 3
    assert json.loads(err)["error"] == "ArithmeticError"


def test_widths_high_energy(capsys):
    code, out, _ = run(["widths", "--mu", "10", "--rho", "2.5", "--tau-stop", "100", "--tau-step", "0.05"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "ok"
    assert rep["delta_tau_measured"] == pytest.approx(19.0, abs=1.0)
    assert rep["delta_xi_cornu"] == pytest.approx(0.838185, abs=1e-5)


def test_widths_no_crossings(capsys):
    code, out, _ = run(["widths", "--mu", "10", "--rho", "3.1", "--tau-stop", "400"], capsys)
    assert code == 0
    assert json.loads(out)["status"] == "no crossings"


def test_spiral_cornu_unit_speed(capsys):
    _, out, _ = run(["spiral", "--kind", "cornu", "--tau-start", "0", "--tau-stop", "5", "--tau-step", "0.001"], capsys)
    _, header, data = parse_csv(out)
    assert header == ["x", "y", "param"]
    chord = np.hypot(np.diff(data[:, 0]), np.diff(data[:, 1])) / np.diff(data[:, 2])
    assert np.abs(chord - 1).max() <= 1e-3


def test_like_spiral_matches_time_profile(capsys, tmp_path):
    common = ["--mu", "10", "--rho", "2.5", "--tau-stop", "120", "--tau-step", "0.05"]
    s, t = tmp_path / "s.csv", tmp_path / "t.csv"
    assert run(["spiral", "--kind", "like", "--out", str(s), *common], capsys)[0] == 0
    assert run(["time-profile", "--out", str(t), *common], capsys)[0] == 0
    _, _, sp = parse_csv(s.read_text())
    _, _, tp = parse_csv(t.read_text())
    np.testing.assert_allclose(sp[:, 2], tp[:, 0])
    assert np.abs(sp[:, 0] ** 2 + sp[:, 1] ** 2 - tp[:, 1]).max() < 1e-9


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("mu = 4\nrho = 1.1\ntau_stop = 10\ntau_step = 1\n")
    _, out, _ = run(["time-profile", "--config", str(cfg)], capsys)
    config, _, data = parse_csv(out)
    assert config["mu"] == 4 and config["rho"] == 1.1 and data.shape[0] == 11
    _, out, _ = run(["time-profile", "--config", str(cfg), "--mu", "7"], capsys)
    config, _, _ = parse_csv(out)
    assert config["mu"] == 7 and config["rho"] == 1.1


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    assert run(["time-profile", "--config", str(cfg)], capsys)[0] == 2


def test_verify_wave_suite(capsys):
    code, out, _ = run(["verify", "--suite", "wave"], capsys)
    lines = [json.loads(l) for l in out.splitlines()]
    names = {l["name"] for l in lines[:-1]}
    assert code == 0
    assert {"closed_form_vs_pv", "closed_form_vs_leapfrog"} <= names
    assert lines[-1]["failed"] == 0


def test_verify_fail_path(capsys):
    code, out, _ = run(["verify", "--suite", "specfun", "--tol-scale", "1e-12"], capsys)
    assert code == 4
    assert json.loads(out.splitlines()[-1])["failed"] > 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "polydit", "widths", "--rho", "3.1", "--tau-stop", "50"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["status"] == "no crossings"
