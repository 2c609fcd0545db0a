import io
import json
import math

import numpy as np
import pytest

from summa.catalog import SIGNAL_NAMES, catalog_signal, jumps_of, parse_signal_spec
from summa.cli import (CSV_HEADER, CsvRecord, ExperimentConfig, Result, main, read_csv,
                       run_experiment, write_csv)
from summa.errors import ConfigurationError


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    buf = io.StringIO()
    code = main([*argv, "-o", str(out)], stdout=buf)
    return code, out, buf.getvalue()


def test_demo_grandi_is_byte_identical(tmp_path):
    c1, a, _ = run(tmp_path, "demo", "grandi", name="a.csv")
    c2, b, _ = run(tmp_path, "demo", "grandi", name="b.csv")
    assert c1 == c2 == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" not in a.read_bytes()


def test_demo_grandi_content(tmp_path):
    code, out, summary = run(tmp_path, "demo", "grandi")
    assert code == 0
    with open(out, newline="") as fh:
        rows = read_csv(fh)
    gamma = [r.value for r in rows if r.method == "gamma"]
    assert gamma[0] == 1.0 and all(v == 0.0 for v in gamma[1:])
    sigma = {r.n: r.value for r in rows if r.method == "sigma"}
    assert abs(sigma[99] - 0.5) < 5e-3
    rho0 = [r for r in rows if r.method == "rho" and r.n == 0]
    assert rho0[0].value is None
    assert "K = 1" in summary and "M = 1" in summary


def test_csv_header_and_undefined_token(tmp_path):
    code, out, _ = run(tmp_path, "demo", "grandi")
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert any(",undefined," in line for line in lines)


def test_csv_round_trip():
    records = [CsvRecord("e", 0, None, "sigma", 0.1), CsvRecord("e", 1, 2.5, "rho", None, "note"),
               CsvRecord("e", 2, -1.0, "theta", 1 / 3)]
    buf = io.StringIO()
    write_csv(records, buf)
    buf.seek(0)
    assert read_csv(buf) == records


def test_read_csv_rejects_bad_header():
    with pytest.raises(ConfigurationError):
        read_csv(io.StringIO("a,b\n"))


def test_nonfinite_values_become_undefined():
    rec = CsvRecord("e", 0, None, "theta", math.nan)
    assert rec.row()[4] == "undefined"
    assert rec.row()[2] == ""


@pytest.mark.parametrize("argv", [
    ["means", "--signal", "nonsense"],
    ["means", "--methods", "sigma,median"],
    ["means", "--n-max", "0"],
    ["bogus"],
    ["demo", "unknown"],
])
def test_configuration_errors_exit_1(tmp_path, argv):
    code, _, _ = run(tmp_path, *argv)
    assert code == 1


def test_domain_error_exits_2(tmp_path):
    code, _, _ = run(tmp_path, "dynamics", "--terms", "1,-1,1,-1", "--n-max", "3")
    assert code == 2


def test_strict_mode_marks_undefined(tmp_path):
    code, out, _ = run(tmp_path, "means", "--terms", "1,-1,1,-1", "--methods", "theta")
    assert code == 0
    with open(out, newline="") as fh:
        rows = read_csv(fh)
    assert [r.value for r in rows] == [1.0, None, None, None]


def test_means_on_constant_signal(tmp_path):
    code, out, summary = run(tmp_path, "means", "--signal", "constant:3", "--n-max", "5",
                             "--grid-points", "32")
    assert code == 0
    with open(out, newline="") as fh:
        rows = read_csv(fh)
    values = [r.value for r in rows if r.value is not None]
    np.testing.assert_allclose(values, 3.0, rtol=1e-12)


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_max": 7, "methods": ["sigma"], "terms": "1,2,3,4,5,6,7,8"}))
    code, out, _ = run(tmp_path, "means", "--config", str(cfg), "--n-max", "3")
    assert code == 0
    with open(out, newline="") as fh:
        rows = read_csv(fh)
    assert {r.method for r in rows} == {"sigma"}
    assert len(rows) == 8


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    code, _, _ = run(tmp_path, "means", "--config", str(cfg))
    assert code == 1


@pytest.mark.parametrize("command", ["coeffs", "sums", "diagnose", "dynamics", "regularize"])
def test_subcommands_run(tmp_path, command):
    code, out, summary = run(tmp_path, command, "--n-max", "24", "--grid-points", "64")
    assert code == 0
    assert out.read_text().startswith("experiment,")
    assert summary.startswith("# ")


def test_demo_fejer_and_golden(tmp_path):
    code, _, summary = run(tmp_path, "demo", "fejer", "--n-max", "50")
    assert code == 0 and "Gibbs" in summary
    code, out, summary = run(tmp_path, "demo", "golden")
    assert code == 0 and "1.618033988750" in summary


def test_gnuplot_script(tmp_path):
    code, out, _ = run(tmp_path, "demo", "golden", "--gnuplot")
    assert code == 0
    assert (tmp_path / "out.csv.gp").read_text().startswith("set datafile separator")


def test_run_experiment_orders_records():
    cfg = ExperimentConfig(terms="1,2,3", n_max=2, methods=("theta", "sigma"))
    res = run_experiment(cfg, "means")
    assert isinstance(res, Result)
    keys = [(r.method, r.n) for r in res.records]
    assert keys == [("theta", 0), ("theta", 1), ("theta", 2),
                    ("sigma", 0), ("sigma", 1), ("sigma", 2)]


def test_experiment_config_validation():
    with pytest.raises(ConfigurationError):
        ExperimentConfig(grid_points=4).validate()
    with pytest.raises(ConfigurationError):
        ExperimentConfig(beta=0.0).validate()
    assert ExperimentConfig().quadrature.panels == 64


@pytest.mark.parametrize("name", SIGNAL_NAMES)
def test_catalog_coefficients_match_evaluators(name):
    sig = catalog_signal(name, kmax=16)
    assert sig.check_consistency(tol=1e-8) <= 1e-8


def test_parse_signal_spec():
    assert parse_signal_spec("offset-square:offset=3").coeffs.a0 == pytest.approx(6.0)
    assert parse_signal_spec("constant:2.5")(0.3) == pytest.approx(2.5)
    sig = parse_signal_spec("coeffs:1,0,2", kmax=4)
    assert sig.kmax == 4
    assert sig(np.pi / 2) == pytest.approx(0.5 + 2.0)
    with pytest.raises(ConfigurationError):
        parse_signal_spec("coeffs:1,x")
    with pytest.raises(ConfigurationError):
        parse_signal_spec("square:k=abc")


def test_jumps_scale_with_half_period():
    assert jumps_of(catalog_signal("square", L=2.0)) == (0.0, 2.0)
    assert jumps_of(catalog_signal("triangle")) == ()
