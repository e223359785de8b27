import csv
import io
import json

import numpy as np
import pytest
from scipy import stats

from airsea_owc import __version__
from airsea_owc.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, SWEEP_COLUMNS, main
from airsea_owc.config import DEFAULTS, ResultTable
from airsea_owc.empirical import EmpiricalPdf, format_empirical_csv


def _read(path):
    text = path.read_text(encoding="utf-8")
    header = [ln for ln in text.splitlines() if ln.startswith("#")]
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return header, list(csv.DictReader(io.StringIO("\n".join(body))))


def _run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_slope_pdf_mw_peak(tmp_path):
    code, out = _run(tmp_path, "slope-pdf", "--model", "MW", "--wind", "6", "--grid", "0", "60", "0.1")
    assert code == EXIT_OK
    header, rows = _read(out)
    assert header[0] == f"# tool: airsea-owc {__version__}"
    angles = np.array([float(r["angle_deg"]) for r in rows])
    dens = np.array([float(r["density_per_deg"]) for r in rows])
    assert 9.0 <= angles[np.argmax(dens)] <= 10.0


def test_slope_pdf_cox_munk_tail_mass(tmp_path):
    code, out = _run(tmp_path, "slope-pdf", "--model", "CM", "--wind", "14", "--grid", "30", "89.9", "0.01")
    assert code == EXIT_OK
    _, rows = _read(out)
    angles = np.array([float(r["angle_deg"]) for r in rows])
    dens = np.array([float(r["density_per_deg"]) for r in rows])
    assert np.trapezoid(dens, angles) == pytest.approx(0.107, abs=0.003)


def test_slope_pdf_single_point_grid(tmp_path):
    code, out = _run(tmp_path, "slope-pdf", "--model", "MW", "--wind", "10", "--grid", "12", "12", "1")
    assert code == EXIT_OK
    assert len(_read(out)[1]) == 1


def test_slope_pdf_bad_grid_and_model(tmp_path):
    assert _run(tmp_path, "slope-pdf", "--grid", "10", "0", "1")[0] == EXIT_CONFIG
    assert _run(tmp_path, "slope-pdf", "--model", "XYZ")[0] == EXIT_CONFIG


def _write_pdf(path, dist):
    x = np.arange(0.0, 90.5, 0.5)
    path.write_text(format_empirical_csv(EmpiricalPdf(x, dist.pdf(x))), encoding="utf-8")


def test_fit_ranks_weibull_first(tmp_path):
    src = tmp_path / "pdf.csv"
    _write_pdf(src, stats.weibull_min(c=1.84, scale=15.61))
    code, out = _run(tmp_path, "fit", str(src))
    assert code == EXIT_OK
    _, rows = _read(out)
    assert rows[0]["family"] == "Weibull" and rows[0]["rank"] == "1"
    assert float(rows[0]["param1"]) == pytest.approx(1.84, rel=5e-3)
    exp_row = next(r for r in rows if r["family"] == "Exponential")
    assert exp_row["param2"] == ""


def test_fit_subset_and_normalize(tmp_path):
    src = tmp_path / "pdf.csv"
    _write_pdf(src, stats.gamma(a=4.0, scale=3.5))
    code, out = _run(tmp_path, "fit", str(src), "--families", "Gamma", "Weibull", "--normalize")
    assert code == EXIT_OK
    assert [r["family"] for r in _read(out)[1]] == ["Gamma", "Weibull"]


def test_fit_malformed_csv_reports_line(tmp_path, capsys):
    src = tmp_path / "bad.csv"
    src.write_text("angle_deg,density_per_deg\n0,0.1\n1,oops\n", encoding="utf-8")
    assert _run(tmp_path, "fit", str(src))[0] == EXIT_CONFIG
    assert "line 3" in capsys.readouterr().err


def test_fit_point_mass_is_numeric_failure(tmp_path):
    x = np.arange(0.0, 20.5, 0.5)
    d = np.where(x == 10.0, 2.0, 0.0)
    src = tmp_path / "spike.csv"
    src.write_text("angle_deg,density_per_deg\n" + "".join(f"{a},{v}\n" for a, v in zip(x, d)), encoding="utf-8")
    assert _run(tmp_path, "fit", str(src), "--families", "Weibull")[0] == EXIT_NUMERIC


def test_missing_input_file(tmp_path):
    assert _run(tmp_path, "fit", str(tmp_path / "nope.csv"))[0] == EXIT_CONFIG


def test_regress_builtin_and_file(tmp_path):
    code, out = _run(tmp_path, "regress")
    assert code == EXIT_OK
    rows = {(r["parameter"], r["law"]): r for r in _read(out)[1]}
    assert float(rows[("k", "linear")]["a"]) == pytest.approx(1.7454, abs=5e-5)
    assert float(rows[("lambda", "power")]["b"]) == pytest.approx(0.1499, abs=5e-5)
    src = tmp_path / "pts.csv"
    src.write_text("U,k,lambda\n1,1,2\n2,2,4\n4,4,8\n", encoding="utf-8")
    code, out = _run(tmp_path, "regress", str(src), "--power-space", "log", name="r2.csv")
    assert code == EXIT_OK
    rows = {(r["parameter"], r["law"]): r for r in _read(out)[1]}
    assert float(rows[("lambda", "power")]["a"]) == pytest.approx(2.0)
    assert float(rows[("k", "linear")]["mae"]) == pytest.approx(0.0, abs=1e-12)


def test_regress_bad_rows(tmp_path, capsys):
    src = tmp_path / "pts.csv"
    src.write_text("U,k,lambda\n1,1,2\n2,x,4\n", encoding="utf-8")
    assert _run(tmp_path, "regress", str(src))[0] == EXIT_CONFIG
    assert "line 3" in capsys.readouterr().err


def test_link_budget_rows(tmp_path):
    code, out = _run(tmp_path, "link-budget")
    assert code == EXIT_OK
    header, rows = _read(out)
    values = {r["quantity"]: float(r["value"]) for r in rows}
    assert values["I_b_A"] == pytest.approx(0.085, rel=0.01)
    assert values["Omega_sr"] == pytest.approx(0.2141, rel=5e-3)
    assert any(h.startswith("# config_sha256:") for h in header)
    assert not any(h.startswith("# seed:") for h in header)


def _config(tmp_path, **over):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(over), encoding="utf-8")
    return str(path)


def test_capacity_default_and_config(tmp_path):
    code, out = _run(tmp_path, "capacity")
    assert code == EXIT_OK
    row = _read(out)[1][0]
    assert row["method"] == "angle_quadrature" and row["seed"] == ""
    cfg = _config(tmp_path, Z=60, phi_FoV=15)
    code, out = _run(tmp_path, "capacity", "--config", cfg, "--method", "gain", name="c2.csv")
    assert code == EXIT_OK
    assert float(_read(out)[1][0]["c_erg_bpshz"]) == pytest.approx(5.0, abs=0.75)


@pytest.mark.parametrize("over", [{"Z": 0}, {"U": "fast"}, {"bogus": 1}, {"Z_w": 10}, {"slope_model": "empirical"}])
def test_bad_config_exits_2(tmp_path, over):
    assert _run(tmp_path, "capacity", "--config", _config(tmp_path, **over))[0] == EXIT_CONFIG


def test_unknown_method_and_small_samples(tmp_path):
    assert _run(tmp_path, "capacity", "--method", "magic")[0] == EXIT_CONFIG
    assert _run(tmp_path, "mc", "--samples", "10")[0] == EXIT_CONFIG


def test_sweep_over_range(tmp_path):
    code, out = _run(tmp_path, "sweep", "--axis", "Z", "--range", "20", "100", "10")
    assert code == EXIT_OK
    header, rows = _read(out)
    assert list(rows[0]) == SWEEP_COLUMNS
    assert len(rows) == 9
    c = [float(r["c_erg_bpshz"]) for r in rows]
    assert all(a > b for a, b in zip(c, c[1:]))


def test_sweep_argument_conflicts(tmp_path):
    assert _run(tmp_path, "sweep", "--axis", "U")[0] == EXIT_CONFIG
    assert _run(tmp_path, "sweep", "--values", "20", "--range", "1", "2", "1")[0] == EXIT_CONFIG
    assert _run(tmp_path, "sweep", "--axis", "depth")[0] == EXIT_CONFIG


def test_sweep_partial_failure_keeps_rows(tmp_path):
    code, out = _run(tmp_path, "sweep", "--axis", "FoV", "--values", "15,0,30")
    assert code == EXIT_NUMERIC
    rows = _read(out)[1]
    assert len(rows) == 3
    assert rows[1]["c_erg_bpshz"] == "" and rows[1]["error"]
    assert rows[0]["error"] == "" and rows[2]["error"] == ""


def test_monte_carlo_rerun_is_byte_identical(tmp_path):
    argv = ["mc", "--axis", "Z", "--values", "30,60", "--samples", "20000", "--seed", "5"]
    code1, a = _run(tmp_path, *argv, "--workers", "2", name="a.csv")
    code2, b = _run(tmp_path, *argv, "--workers", "2", name="b.csv")
    assert code1 == code2 == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    header, rows = _read(a)
    assert "# seed: 5" in header
    assert all(r["seed"] == "5" and float(r["std_err"]) > 0 for r in rows)


def test_monte_carlo_single_point(tmp_path):
    code, out = _run(tmp_path, "mc", "--samples", "20000")
    assert code == EXIT_OK
    assert _read(out)[1][0]["method"] == "monte_carlo"


def test_eckv_mss(tmp_path):
    code, out = _run(tmp_path, "eckv-mss")
    assert code == EXIT_OK
    rows = _read(out)[1]
    assert [float(r["U10"]) for r in rows] == [5.0, 8.0, 12.0]
    assert all(0.75 < float(r["ratio"]) < 1.25 for r in rows)
    assert _run(tmp_path, "eckv-mss", "--inverse-wave-age", "0.1")[0] == EXIT_CONFIG


def test_reproduce_figures_radiance(tmp_path):
    outdir = tmp_path / "figs"
    code, index = _run(tmp_path, "reproduce-figures", "--outdir", str(outdir), "--figures", "radiance")
    assert code == EXIT_OK
    assert _read(index)[1][0]["file"] == "capacity_radiance.csv"
    _, rows = _read(outdir / "capacity_radiance.csv")
    curves = {}
    for r in rows:
        curves.setdefault(r["curve"], []).append(float(r["c_erg_bpshz"]))
    assert len(curves) == 4
    assert all(len(v) == 10 for v in curves.values())
    low = [k for k in curves if "L_t=0.025" in k]
    high = [k for k in curves if "L_t=0.25" in k]
    assert len(low) == len(high) == 2
    for lo, hi in zip(sorted(low), sorted(high)):
        assert all(h < lo_ for h, lo_ in zip(curves[hi], curves[lo]))


def test_stdout_output(capsys):
    assert main(["link-budget"]) == EXIT_OK
    assert "I_b_A" in capsys.readouterr().out


def test_defaults_are_complete():
    assert DEFAULTS["phi_FoV"] == 30 and DEFAULTS["slope_model"] == "MW"


def test_result_table_writes_numpy_scalars_plainly():
    table = ResultTable(["a", "b"])
    table.add(np.float64(0.5), None)
    assert table.to_csv().splitlines()[-1] == "0.5,"
