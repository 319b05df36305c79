import io
import subprocess
import sys

import numpy as np
import pytest

from fermibath.analytics import TransportParams, initial_current, steady_current
from fermibath.cli import main, parse_args, read_config


def run(argv, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, (out.read_text() if out.exists() else "")


def table(text, header):
    lines = text.splitlines()
    start = lines.index(header) + 1
    rows = []
    for line in lines[start:]:
        if line.startswith("#") or not line[0].isdigit() and line[0] != "-":
            break
        rows.append([float(v) for v in line.split(",")])
    return np.array(rows)


def test_trace_defaults(tmp_path):
    code, text = run(["trace"], tmp_path)
    assert code == 0
    assert text.startswith("# params: ")
    rows = table(text, "t_s,n_analytic,n_numeric,current_analytic")
    assert rows[0, 1] == rows[0, 2] == 1.0
    assert np.max(np.abs(rows[:, 1] - rows[:, 2])) <= 1e-8


def test_trace_single_bath_limit(tmp_path):
    ge = 1e9
    code, text = run(["trace", "--gamma-c", "0", "--gamma-e", str(ge), "--t-max", str(20 / ge)], tmp_path)
    assert code == 0
    p = TransportParams.from_temperatures(1e12, 300.0, 150.0, ge, 0.0)
    rows = table(text, "t_s,n_analytic,n_numeric,current_analytic")
    assert abs(rows[-1, 2] - p.nbar_e) < 1e-6


def test_trace_paper_literal_differs(tmp_path):
    _, ref = run(["trace", "--gamma-e", "2e9"], tmp_path, "a.csv")
    _, lit = run(["trace", "--gamma-e", "2e9", "--variant", "paper-literal"], tmp_path, "b.csv")
    r = table(ref, "t_s,n_analytic,n_numeric,current_analytic")
    q = table(lit, "t_s,n_analytic,n_numeric,current_analytic")
    assert np.max(np.abs(r[:, 2] - q[:, 2])) > 1e-2


def test_transport_columns_and_rows(tmp_path):
    code, text = run(["transport", "--temp-c", "76.383,100,150"], tmp_path)
    assert code == 0
    rows = table(text, "T_c_K,x_c,eta_carnot,eta_fermi,eta_bose")
    assert np.all(rows[:, 2] == 0.5)
    assert np.all((rows[:, 3:] > 0) & (rows[:, 3:] < 1))


def test_transport_default_grid_covers_range(tmp_path):
    code, text = run(["transport"], tmp_path)
    rows = table(text, "T_c_K,x_c,eta_carnot,eta_fermi,eta_bose")
    assert rows[0, 1] == pytest.approx(30.0) and rows[-1, 1] == pytest.approx(1e-3)
    assert np.all(np.diff(rows[:, 0]) > 0)


def test_spectrum_default_blocks(tmp_path):
    code, text = run(["spectrum"], tmp_path)
    assert code == 0
    assert text.count("# dc_weight=") == 4
    assert "temp_e=300" in text and "omega=1000000000000" in text
    assert "gamma_e=1000000000,gamma_c=1000000000" in text


def test_spectrum_zero_frequency_value(tmp_path):
    code, text = run(["spectrum", "--gamma-c", "5e8", "--temp-c", "150"], tmp_path)
    rows = table(text, "omega_rad_s,S_continuous")
    p = TransportParams.from_temperatures(1e12, 300.0, 150.0, 1e9, 5e8, 1.0)
    I0, Is = initial_current(p), steady_current(p)
    mid = np.flatnonzero(rows[:, 0] == 0.0)[0]
    assert rows[mid, 1] == pytest.approx(2 * (I0 - Is) * (I0 + 2 * Is) / 1.5e9, rel=1e-12)
    assert np.array_equal(rows[:, 1], rows[::-1, 1])


def test_validation_exit_code(tmp_path, capsys):
    assert main(["trace", "--temp-e", "-3"]) == 2
    assert main(["transport", "--ratio", "0.5"]) == 2
    assert main(["trace", "--n0", "1.5"]) == 2
    assert main(["trace", "--dt", "1"]) == 2


def test_numerical_exit_code(tmp_path):
    # x is tiny, so the Bose occupation (about 40) overflows a 20-level cut-off
    assert main(["trace", "--stats", "bose", "--n-max", "20", "--out", str(tmp_path / "x")]) == 3


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ngamma-e = 3e9\ntemp_c = 120\nn0 = 0\n")
    args = parse_args(["trace", "--config", str(cfg), "--n0", "0.5"])
    assert args.gamma_e == 3e9 and args.temp_c == [120.0] and args.n0 == 0.5
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense\n")
    assert main(["trace", "--config", str(bad)]) == 2
    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("colour = blue\n")
    assert main(["trace", "--config", str(unknown)]) == 2
    assert read_config(str(cfg))["gamma_e"] == "3e9"


def test_svg_written(tmp_path):
    svg = tmp_path / "plot.svg"
    code, _ = run(["transport", "--points", "11", "--svg", str(svg)], tmp_path)
    assert code == 0
    body = svg.read_text()
    assert body.startswith("<svg") and body.count("<polyline") == 3


def test_grassmann_verify(capsys):
    assert main(["grassmann-verify"]) == 0
    out = capsys.readouterr().out
    assert "0 failed" in out and "FAIL " not in out


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "fermibath", "transport", "--points", "3"],
                         capture_output=True, text=True, check=True)
    assert "T_c_K,x_c,eta_carnot,eta_fermi,eta_bose" in res.stdout
