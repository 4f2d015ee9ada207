import json
import os

import pytest

from idcalc.cli import run


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def gaussian(tmp_path):
    return write(tmp_path, "gaussian.json",
                 {"dim": 1, "A": 1.0, "gamma": [0.0], "nu": {"type": "zero"}})


@pytest.fixture
def stable05(tmp_path):
    return write(tmp_path, "stable05.json",
                 {"dim": 1, "A": 0.0, "gamma": [0.0],
                  "nu": {"type": "stable", "alpha": 0.5,
                         "directions": [{"xi": [1.0], "weight": 1.0}]}})


@pytest.fixture
def cp(tmp_path):
    return write(tmp_path, "cp.json",
                 {"dim": 1, "A": 0.0, "gamma": [0.5],
                  "nu": {"type": "atomic",
                         "atoms": [{"x": [1.0], "mass": 1.0}]}})


@pytest.fixture
def expk(tmp_path):
    return write(tmp_path, "expk.json", {"type": "exp"})


@pytest.fixture
def ind01(tmp_path):
    return write(tmp_path, "ind01.json",
                 {"type": "indicator", "interval": [0, 1], "height": 1.0})


def report(tmp_path):
    with open(tmp_path / "report.json") as fh:
        return json.load(fh)


def test_transform_exp_gaussian(tmp_path, gaussian, expk, capsys):
    rc = run(["--out", str(tmp_path), "transform", "--kernel", expk,
              "--dist", gaussian])
    assert rc == 0
    rep = report(tmp_path)
    assert rep["status"] == "completed"
    res = rep["results"]
    assert res["definable"] is True
    assert res["triplet"]["A"] == [[pytest.approx(0.5, abs=1e-9)]]
    assert res["triplet"]["gamma"] == [pytest.approx(0.0, abs=1e-9)]


def test_dual_stable(tmp_path, stable05, capsys):
    rc = run(["--out", str(tmp_path), "dual", "--dist", stable05])
    assert rc == 0
    rep = report(tmp_path)
    assert rep["results"]["dual"]["nu"]["alpha"] == pytest.approx(1.5)


def test_largeness_indicator(tmp_path, ind01, capsys):
    rc = run(["--out", str(tmp_path), "largeness", "--kernel", ind01])
    assert rc == 0
    rep = report(tmp_path)
    assert rep["results"]["class"] == "all-id"
    assert rep["results"]["measure_transform"]["class"] == "all-levy-measures"


def test_domain_reports_reasons(tmp_path, stable05, capsys):
    kern = write(tmp_path, "power.json", {"type": "power", "alpha": 1.5})
    rc = run(["--out", str(tmp_path), "domain", "--kernel", kern,
              "--dist", stable05])
    assert rc == 0
    rep = report(tmp_path)
    verdicts = rep["results"]["verdicts"]
    assert verdicts["essential"]["value"] == "no"
    # every verdict carries its reason tag
    assert all(v["reason"] for v in verdicts.values())


def test_classify_and_moments(tmp_path, cp, capsys):
    rc = run(["--out", str(tmp_path), "classify", "--dist", cp])
    assert rc == 0
    rep = report(tmp_path)
    assert rep["results"]["type"] == "A"
    assert rep["results"]["drift"] == [pytest.approx(0.0)]


def test_tau_summary(tmp_path, expk, capsys):
    rc = run(["--out", str(tmp_path), "tau", "--kernel", expk])
    assert rc == 0
    rep = report(tmp_path)
    assert rep["results"]["support"] == [0.0, 1.0]
    assert rep["results"]["realizable_as_decreasing_kernel"] is True


def test_psi_report(tmp_path, stable05, expk, capsys):
    rc = run(["--out", str(tmp_path), "psi", "--kernel", expk,
              "--dist", stable05])
    assert rc == 0
    rep = report(tmp_path)
    assert rep["results"]["in_domain"] is True
    # stable(0.5) tail mass beyond 1 is 2; the transform shrinks it by 1/alpha
    assert rep["results"]["tail_masses"]["1.0"] == pytest.approx(4.0, rel=1e-6)


def test_simulate_with_csv(tmp_path, cp, ind01, capsys):
    rc = run(["--out", str(tmp_path), "simulate", "--kernel", ind01,
              "--dist", cp, "--window", "0", "2", "--paths", "4000",
              "--mesh", "8", "--seed", "5", "--emit", "csv"])
    assert rc == 0
    rep = report(tmp_path)
    assert rep["results"]["max_sigma_deviation"] < 6.0
    csv_path = tmp_path / "ecf.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert header.split(",") == ["z", "re_empirical", "im_empirical",
                                 "re_analytic", "im_analytic", "stderr"]


def test_determinism_modulo_timestamp(tmp_path, cp, ind01, capsys):
    args = ["--out", str(tmp_path), "simulate", "--kernel", ind01,
            "--dist", cp, "--window", "0", "2", "--paths", "2000",
            "--mesh", "8", "--seed", "5"]
    run(args)
    rep1 = report(tmp_path)
    run(args)
    rep2 = report(tmp_path)
    rep1.pop("generated_at")
    rep2.pop("generated_at")
    assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)


def test_schema_error_exit_code(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"dim": 1})  # missing gamma/nu
    rc = run(["--out", str(tmp_path), "classify", "--dist", bad])
    assert rc == 3
    rep = report(tmp_path)
    assert rep["status"] == "error"


def test_unknown_kernel_type_rejected(tmp_path, gaussian, capsys):
    bad = write(tmp_path, "badk.json", {"type": "mystery"})
    rc = run(["--out", str(tmp_path), "transform", "--kernel", bad,
              "--dist", gaussian])
    assert rc == 3


def test_inconclusive_exit_code(tmp_path, capsys):
    # borderline-index kernel without the exact-coefficient metadata path:
    # an asymmetric law whose compensation trace cannot be certified
    dist = write(tmp_path, "skewstable.json",
                 {"dim": 1, "A": 0.0, "gamma": [0.3],
                  "nu": {"type": "stable", "alpha": 1.2,
                         "directions": [{"xi": [1.0], "weight": 1.0}]}})
    kern = write(tmp_path, "power12.json", {"type": "power", "alpha": 1.2})
    rc = run(["--out", str(tmp_path), "transform", "--kernel", kern,
              "--dist", dist, "--variant", "phi"])
    rep = report(tmp_path)
    assert rc in (0, 2)
    assert rep["status"] in ("completed", "inconclusive")


def test_gamma_and_sum_distributions_parse(tmp_path, expk, capsys):
    dist = write(tmp_path, "mix.json", {
        "dim": 1, "A": 0.0, "gamma": [0.0],
        "nu": {"type": "sum", "parts": [
            {"type": "gamma", "shape": 1.0, "rate": 1.0, "direction": [1.0]},
            {"type": "compound_poisson_empirical", "rate": 2.0,
             "jumps": [[1.0], [0.5]]},
        ]}})
    rc = run(["--out", str(tmp_path), "classify", "--dist", dist])
    assert rc == 0
    assert report(tmp_path)["results"]["type"] == "B"


def test_domain_inconclusive_exit_code(tmp_path, capsys):
    dist = write(tmp_path, "stable18.json",
                 {"dim": 1, "A": 0.0, "gamma": [0.0],
                  "nu": {"type": "stable", "alpha": 1.8,
                         "directions": [{"xi": [1.0], "weight": 0.5},
                                        {"xi": [-1.0], "weight": 0.5}]}})
    rc = run(["--out", str(tmp_path), "domain", "--kernel", "sinc",
              "--dist", dist])
    rep = report(tmp_path)
    assert rc == 2
    assert rep["status"] == "inconclusive"


def test_simulate_samples_csv(tmp_path, cp, ind01, capsys):
    rc = run(["--out", str(tmp_path), "simulate", "--kernel", ind01,
              "--dist", cp, "--window", "0", "1", "--paths", "2000",
              "--mesh", "8", "--seed", "5", "--emit", "csv"])
    assert rc == 0
    lines = (tmp_path / "samples.csv").read_text().splitlines()
    assert lines[0] == "x0"
    assert len(lines) == 2001


def test_env_var_output_dir(tmp_path, gaussian, expk, capsys, monkeypatch):
    out = tmp_path / "envout"
    monkeypatch.setenv("IDCALC_OUT", str(out))
    rc = run(["transform", "--kernel", expk, "--dist", gaussian])
    assert rc == 0
    assert (out / "report.json").exists()
