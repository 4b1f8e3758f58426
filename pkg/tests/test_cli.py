import json
import subprocess
import sys
from fractions import Fraction

import pytest

from jacobiseries import hypergeometric
from jacobiseries.cli import main
from jacobiseries.hypergeometric import MonomialSpec, expand_monomial
from jacobiseries.series import TruncatedSeries


@pytest.fixture
def matrix_file(tmp_path):
    def write(doc):
        p = tmp_path / "m.json"
        p.write_text(json.dumps(doc), encoding="utf-8")
        return str(p)
    return write


TWO = {"d": 2, "alpha": [0, 1], "beta": ["1/10"], "gamma": ["1/10"]}
THREE = {"d": 3, "alpha": [0, 1, 3], "beta": ["1/10", "-1/20"], "gamma": ["1/10", "1/30"]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_two_by_two(capsys, matrix_file):
    code, out, _ = run(capsys, "solve", matrix_file(TWO), "--k", "1", "--degree", "3", "--mode", "float")
    assert code == 0
    res = json.loads(out)["results"][0]
    assert res["eigenvalue_float"] == pytest.approx(-0.00990195, abs=1e-12)
    assert res["residual"] == pytest.approx(1.386198e-8, rel=1e-6)
    code, out, _ = run(capsys, "solve", matrix_file(TWO), "--k", "1", "--degree", "3")
    res = json.loads(out)["results"][0]
    assert res["eigenvalue"] == "-198039/20000000"
    assert res["vector"] == ["1", "-198039/2000000"]


def test_solve_all_sums_to_trace(capsys, matrix_file):
    code, out, _ = run(capsys, "solve", matrix_file(THREE), "--k", "all", "--degree", "4")
    results = json.loads(out)["results"]
    assert code == 0 and [r["k"] for r in results] == [1, 2, 3]
    total = sum(Fraction(r["eigenvalue"]) for r in results)
    assert abs(total - 4) < Fraction(1, 10 ** 9)


def test_solve_diagonal(capsys, matrix_file):
    code, out, _ = run(capsys, "solve", matrix_file({"alpha": [2, 5, -1], "beta": [0, 0], "gamma": [0, 0]}),
                       "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("k,degree,eigenvalue")
    assert [ln.split(",")[2] for ln in lines[1:]] == ["2", "5", "-1"]
    assert all(float(ln.split(",")[4]) == 0 for ln in lines[1:])


def test_parallel_solve_matches_serial(capsys, matrix_file):
    path = matrix_file(THREE)
    _, serial, _ = run(capsys, "solve", path)
    _, parallel, _ = run(capsys, "solve", path, "--jobs", "2")
    assert serial == parallel


def test_exact_output_is_byte_identical(tmp_path, matrix_file):
    path = matrix_file(THREE)
    outs = []
    for i in range(2):
        target = tmp_path / f"out{i}.json"
        assert main(["solve", path, "--out", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_expand_catalan(capsys, matrix_file):
    code, out, _ = run(capsys, "expand", matrix_file(TWO), "--k", "1", "--degree", "3", "--monomial", "1")
    doc = json.loads(out)
    assert code == 0
    assert [(t["exponents"], t["coeff"]) for t in doc["terms"]] == [
        ([0], "1/1"), ([1], "-1/1"), ([2], "2/1"), ([3], "-5/1")]
    series = TruncatedSeries.from_records(doc["terms"], doc["nvars"], doc["cap"], doc["low"])
    assert series == expand_monomial(MonomialSpec((1,)), 1, 0, 3)


def test_expand_zero_exponent(capsys, matrix_file):
    code, out, _ = run(capsys, "expand", matrix_file(TWO), "--k", "1", "--monomial", "0", "--format", "text")
    assert code == 0
    assert TruncatedSeries.from_text(out) == TruncatedSeries.one(1, 3)


def test_expand_middle_branch(capsys, matrix_file):
    code, out, _ = run(capsys, "expand", matrix_file(THREE), "--k", "2", "--degree", "1",
                       "--monomial", "1;0", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["x0,y0,xt0,yt0,coeff", "0,0,0,0,1/1", "0,1,0,0,-1/1", "1,0,0,0,-1/1"]


def test_text_round_trip(capsys, matrix_file):
    _, out, _ = run(capsys, "expand", matrix_file(THREE), "--k", "2", "--degree", "4",
                    "--monomial", "2;-1", "--format", "text")
    assert TruncatedSeries.from_text(out) == expand_monomial(MonomialSpec((2,), (-1,)), 1, 1, 4)


@pytest.mark.parametrize("doc,field", [
    ({"alpha": [0, 0.5], "beta": [1], "gamma": [1]}, "alpha[1]"),
    ({"alpha": [0, 1], "beta": ["1/0"], "gamma": [1]}, "beta[0]"),
    ({"alpha": [0, 1], "beta": [1]}, "gamma"),
    ({"d": 3, "alpha": [0, 1], "beta": [1], "gamma": [1]}, "d"),
    ({"alpha": [0, 1], "beta": ["x"], "gamma": [1]}, "beta[0]"),
])
def test_parse_errors_name_the_field(capsys, matrix_file, doc, field):
    code, _, err = run(capsys, "solve", matrix_file(doc))
    assert code == 2
    assert field in err


def test_malformed_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{alpha: ", encoding="utf-8")
    code, _, err = run(capsys, "solve", str(p))
    assert code == 2 and "input" in err


def test_float_mode_accepts_floats(capsys, matrix_file):
    code, out, _ = run(capsys, "solve", matrix_file({"alpha": [0, 1.0], "beta": [0.1], "gamma": [0.1]}),
                       "--mode", "float", "--k", "1")
    assert code == 0
    assert json.loads(out)["results"][0]["eigenvalue_float"] == pytest.approx(-0.00990195, abs=1e-12)


def test_invalid_matrix_exit_codes(capsys, matrix_file):
    code, _, err = run(capsys, "solve", matrix_file({"alpha": [1, 2, 1], "beta": [1, 1], "gamma": [1, 1]}))
    assert code == 3 and "alpha" in err
    code, _, err = run(capsys, "solve", matrix_file({"alpha": [1, 2], "beta": [1, 1], "gamma": [1]}))
    assert code == 3 and "beta" in err


def test_bad_branch_and_monomial(capsys, matrix_file):
    assert run(capsys, "solve", matrix_file(TWO), "--k", "3")[0] == 2
    assert run(capsys, "solve", matrix_file(TWO), "--k", "two")[0] == 2
    code, _, err = run(capsys, "expand", matrix_file(THREE), "--k", "2", "--monomial", "1,1;0")
    assert code == 2 and "--monomial" in err


def test_limits(capsys, matrix_file):
    code, _, err = run(capsys, "solve", matrix_file(TWO), "--degree", "40")
    assert code == 4 and "--degree" in err
    big = {"alpha": list(range(20)), "beta": [1] * 19, "gamma": [1] * 19}
    assert run(capsys, "solve", matrix_file(big))[0] == 4


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert set(doc["suites"]) == {"oracle", "jacobian", "lagrange", "symmetry", "corner", "residual"}
    assert doc["first_failure"] is None


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "jacobian", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and set(doc["suites"]) == {"jacobian"}
    assert all(c["suite"] == "jacobian" for c in doc["cases"])


def test_verify_residual_csv(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "residual", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "degree,epsilon,residual,gap"
    assert len(lines) == 10


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "--suite", "nope")
    assert code == 2 and "--suite" in err


def test_verify_reports_injected_coefficient_bug(capsys, monkeypatch):
    real = hypergeometric.coeff_H
    monkeypatch.setattr(hypergeometric, "coeff_H", lambda qp, q: real(qp, q) + (sum(q.exps) == 2))
    code, out, err = run(capsys, "verify", "--suite", "oracle,jacobian", "--format", "json")
    assert code == 1
    assert "coeff_H mismatch" in err
    fail = json.loads(out)["first_failure"]
    assert fail["d"] == 2 and "coeff_H" in fail["case"]


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--degree", "2", "--max-d", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "d,k,degree,nvars,terms,seconds"
    assert len(out.splitlines()) == 1 + 2 + 3


def test_module_entry_point(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(TWO), encoding="utf-8")
    proc = subprocess.run([sys.executable, "-m", "jacobiseries", "solve", str(p), "--k", "1", "--format", "text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "-198039/20000000" in proc.stdout
