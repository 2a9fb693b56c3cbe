import json
import math
import subprocess
import sys

import pytest

from jacobi_threshold.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_classify_examples(capsys):
    doc = run_json(capsys, "classify", "--mu", "0.5")
    s = doc["spectral"]
    assert (s["k_left"], s["l_right"], s["critical_left"], s["critical_right"]) == (0, 1, False, False)

    s = run_json(capsys, "classify", "--mu", "0,0,0")["spectral"]
    assert (s["k_left"], s["l_right"], s["critical_left"], s["critical_right"]) == (0, 0, True, True)
    assert s["guaranteed"] is False

    doc = run_json(capsys, "classify", "--mu", "-10,-10")
    assert doc["spectral"]["k_left"] == 2
    assert doc["jost_left"] == "80"


def test_classify_exact_decimal(capsys):
    doc = run_json(capsys, "classify", "--mu", "1,-1/2")
    assert doc["jost_left"] == "0" and doc["spectral"]["critical_left"]


def test_spectrum_examples(capsys):
    doc = run_json(capsys, "spectrum", "--mu", "-0.5", "--method", "sturm")
    assert doc["k"] == 1 and doc["eigenvalues_below"][0] == pytest.approx(2 - math.sqrt(5), abs=1e-10)

    doc = run_json(capsys, "spectrum", "--mu", "0", "--method", "inertia")
    assert doc["eigenvalues_below"] == [] and doc["eigenvalues_above"] == []

    a = run_json(capsys, "spectrum", "--mu", "-5,0,5", "--method", "sturm")
    b = run_json(capsys, "spectrum", "--mu", "-5,0,5", "--method", "inertia")
    assert (a["k"], a["l"]) == (b["k"], b["l"])

    doc = run_json(capsys, "spectrum", "--mu", "1/3,-2,1", "--method", "linsys-check")
    assert doc["residuals"]["within_tolerance"]


def test_det_examples(capsys):
    assert run_json(capsys, "det", "--mu", "1", "--theta", "0.5")["det"] == "7/3"
    assert run_json(capsys, "det", "--mu", "0", "--theta", "0.9")["det"] == "1"
    doc = run_json(capsys, "det", "--mu", "1", "--scaled-limit", "left")
    assert doc["limit"] == "1"
    errs = [abs(r["scaled_det"] - 1) for r in doc["ladder"]]
    assert errs == sorted(errs, reverse=True) and errs[-1] < 1e-4


def test_det_from_z(capsys):
    doc = run_json(capsys, "det", "--mu", "1", "--z", "-1/2")
    assert doc["theta"] == "1/2" and doc["det"] == "7/3"


def test_variety_outputs(capsys, tmp_path):
    code, out = run(capsys, "variety", "--n", "1", "--family", "C")
    assert code == 0
    assert out.splitlines() == ["mu1,stratum,family", "0,0,C"]

    path = tmp_path / "v.csv"
    code, _ = run(capsys, "variety", "--n", "2", "--family", "C", "--grid", "-4:2:512", "--out", str(path))
    assert code == 0
    rows = path.read_text().splitlines()
    assert rows[0] == "mu1,mu2,stratum,family" and len(rows) == 513
    for line in rows[1:]:
        m1, m2 = (float(x) for x in line.split(",")[:2])
        # Q_2 at (m1, m2 - 1) vanishes
        assert abs(1 + 2 * m1 + (m2 - 1) + m1 * (m2 - 1)) < 1e-9 * max(1, abs(m2))


def test_census_output(capsys):
    code, out = run(capsys, "census", "--n", "2", "--box", "-20:20", "--samples", "10000", "--seed", "7")
    assert code == 0
    lines = out.splitlines()
    assert "# seed=7" in lines
    body = lines[lines.index("index,count") + 1:]
    assert {int(r.split(",")[0]) for r in body} == {0, 1, 2}
    doc = run_json(capsys, "census", "--n", "2", "--samples", "100", "--format", "json")
    assert set(doc["histogram"]) <= {"0", "1", "2"}


def test_verify_single_suite(capsys):
    doc = run_json(capsys, "verify", "--suite", "symmetry")
    assert doc["passed"] and [s["suite"] for s in doc["suites"]] == ["symmetry"]


def test_verify_failure_exit_code(capsys, monkeypatch):
    from jacobi_threshold import verify

    def broken(seed=0, **kw):
        r = verify.SuiteResult("symmetry", time_limit=5.0)
        r.check(False, "forced")
        return r

    monkeypatch.setitem(verify.SUITES, "symmetry", broken)
    code, out = run(capsys, "verify", "--suite", "symmetry")
    assert code == 1 and json.loads(out)["passed"] is False


@pytest.mark.parametrize("argv", [
    ["classify", "--mu", "1,,2"],
    ["classify", "--mu", "abc"],
    ["det", "--mu", "1"],
    ["det", "--mu", "1", "--theta", "1"],
    ["det", "--mu", "1", "--z", "2"],
    ["classify", "--mu", "1", "--N", "10"],
    ["census", "--n", "2", "--box", "1:1"],
    ["variety", "--n", "3", "--grid", "0:1"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_env_fallbacks(monkeypatch, capsys):
    monkeypatch.setenv("JTH_MODE", "float")
    doc = run_json(capsys, "classify", "--mu", "1/4")
    assert doc["mode"] == "float" and doc["mu"] == [0.25]
    # flags win over the environment
    doc = run_json(capsys, "classify", "--mu", "1/4", "--mode", "exact")
    assert doc["mu"] == ["1/4"]
    monkeypatch.setenv("JTH_SEED", "7")
    a = run_json(capsys, "census", "--n", "2", "--samples", "500", "--format", "json")
    b = run_json(capsys, "census", "--n", "2", "--samples", "500", "--format", "json", "--seed", "7")
    assert a == b and a["seed"] == 7
    monkeypatch.setenv("JTH_N", "100")
    with pytest.raises(SystemExit):
        main(["classify", "--mu", "1"])


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(tol=0)
    with pytest.raises(ValueError):
        RunConfig(mode="fuzzy")
    with pytest.raises(ValueError):
        RunConfig(delta=-1)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jacobi_threshold", "det", "--mu", "1", "--theta", "1/2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["det"] == "7/3"
