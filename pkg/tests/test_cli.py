import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from tensorrho.cli import main
from tensorrho.errors import InputError
from tensorrho.problem_io import format_problem, parse_problem
from tensorrho import MaxLogSumExp, MonomialMap, NonnegForm, UniformHypergraph

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_rho_cyclic(capsys):
    rep = run_json(capsys, "rho", "--input", str(PROBLEMS / "cyclic_map.txt"), "--verify")
    eps = Fraction(rep["eps"])
    lo, hi = (Fraction(v) for v in rep["bracket_exact"])
    assert lo <= 1 <= hi and hi - lo <= 2 * eps
    assert float(rep["cw_gap"]) <= 3 * float(eps) * float(rep["cw_upper"])
    assert float(rep["verify_occupation_mass"]) == pytest.approx(1.0, abs=1e-9)


def test_hypergraph_k4(capsys):
    rep = run_json(capsys, "hypergraph", "--input", str(PROBLEMS / "k4_3uniform.txt"))
    assert abs(float(rep["value"]) - 6) <= 1e-6
    rep = run_json(capsys, "clique-bound", "--input", str(PROBLEMS / "k4_3uniform.txt"))
    assert rep["clique_bound"] == "4"


def test_glp_two_exponent(capsys):
    rep = run_json(capsys, "glp-min", "--input", str(PROBLEMS / "two_exponent.txt"), "--verify")
    assert abs(float(rep["value"]) - 0.6931471805599453) <= 1e-6
    lo, hi = (Fraction(v) for v in rep["certified_bracket_exact"])
    assert hi - lo <= Fraction(1, 10**6)
    assert float(rep["verify_grid_diff"]) <= 1e-6 + float(rep["verify_grid_error"])


def test_mu_commands(capsys):
    rep = run_json(capsys, "mu-p", "--input", str(PROBLEMS / "square.txt"), "--p", "4")
    assert abs(float(rep["value"]) - 1) <= 1e-5 and rep["alpha_exact"] == "1/2"
    rep = run_json(capsys, "mu-d", "--input", str(PROBLEMS / "cubic_form.txt"), "--verify")
    assert float(rep["verify_grid_diff"]) <= 1e-4


def test_check(capsys):
    rep = run_json(capsys, "check", "--input", str(PROBLEMS / "two_exponent.txt"))
    assert rep["nu"] == "1" and rep["coercive"] == "true"


def test_text_output(capsys):
    code, out, _ = run(capsys, "rho", "--input", str(PROBLEMS / "matrix3.txt"))
    assert code == 0
    assert out.startswith("command: rho\n")
    assert "value: " in out and "cw_gap: " in out


def test_json_round_trip(capsys):
    code, text, _ = run(capsys, "hypergraph", "--input", str(PROBLEMS / "k4_3uniform.txt"))
    rep = run_json(capsys, "hypergraph", "--input", str(PROBLEMS / "k4_3uniform.txt"))
    for line in text.splitlines():
        key, val = line.split(": ", 1)
        want = rep[key]
        assert val == (want if isinstance(want, str) else "[" + ", ".join(want) + "]")


def test_deterministic_bytes():
    cmd = [sys.executable, "-m", "tensorrho", "rho", "--input", str(PROBLEMS / "matrix3.txt"),
           "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def _write(tmp_path, text):
    p = tmp_path / "prob.txt"
    p.write_text(text)
    return str(p)


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "rho", "--input", _write(tmp_path, "type map\ndim 2\n1: 2 0 1\n2: 0 2 1\n"))
    assert code == 3 and err.startswith("error: reducibility:")
    code, _, err = run(capsys, "rho", "--input", _write(tmp_path, "type map\ndim 2\n1: 2 x 1\n"))
    assert code == 2 and err.startswith("error: input:") and "line 3" in err
    code, _, err = run(capsys, "rho", "--input", str(tmp_path / "missing.txt"))
    assert code == 2
    code, _, err = run(capsys, "glp-min", "--input", str(PROBLEMS / "matrix3.txt"))
    assert code == 2 and "glp" in err
    code, _, _ = run(capsys, "rho", "--input", str(PROBLEMS / "matrix3.txt"), "--eps", "-1")
    assert code == 2
    code, _, err = run(capsys, "mu-p", "--input", str(PROBLEMS / "square.txt"))
    assert code == 2
    assert len(err.strip().splitlines()) == 1


def test_noncoercive_glp(capsys, tmp_path):
    code, _, err = run(capsys, "glp-min", "--input", _write(tmp_path, "type glp\ndim 1\n1: 1 1\n1: 2 1\n"))
    assert code == 2 and "coercive" in err


def test_parse_errors():
    bad = [
        "dim 2\n1: 1 1\n",
        "type cube\ndim 1\n",
        "type glp\n1: 1 1\n",
        "type glp\ndim 0\n1: 1\n",
        "type glp\ndim 1\n",
        "type glp\ndim 1\n2: 1 1\n",
        "type glp\ndim 1\n1 1\n",
        "type hypergraph\ndim 3\n1 2 1\n",
        "type form\ndim 2\n1 1 1\n1 2 1\n",
        "type map\ndim 2\n3: 1 0 1\n",
        "type glp\ndim 1\ndim 1\n1: 1 1\n",
    ]
    for text in bad:
        with pytest.raises(InputError):
            parse_problem(text)


@pytest.mark.parametrize("obj", [
    MonomialMap(([((0, 2), 1)], [((2, 0), Fraction(1, 3))])),
    NonnegForm((((2, 1), 1), ((0, 3), Fraction(5, 2)))),
    UniformHypergraph(4, 3, (((0, 1, 2), 1), ((1, 2, 3), Fraction(3, 4)))),
    MaxLogSumExp.from_data([([(1, -1), (0, 2)], [1, Fraction(2, 7)]), ([(-1, 0)], [3])]),
])
def test_format_round_trip(obj):
    back = parse_problem(format_problem(obj)).obj
    if isinstance(obj, MaxLogSumExp):
        assert back.branches == obj.branches
    else:
        assert back == obj


def test_comments_and_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("# pair\ntype glp  # header\ndim 1\n1: 1 1\n1: -1 1\n"))
    rep = run_json(capsys, "check", "--input", "-")
    assert rep["dim"] == "1"
