import json
import math

import pytest

from jetflow import EXIT_OK, EXIT_USAGE, run_command
from reporthandler import ReportHandler

SHEAR = "vars: z1 z2\nF1 = z1 + z2^2\nF2 = z2\n"
QUADRATIC = "vars: x\nF1 = x + x^2\n"


def coefficients(series_json):
    return [term["coeff"] for term in series_json["terms"]]


def run_json(capsys, argv):
    code = run_command(argv)
    return code, json.loads(capsys.readouterr().out)


def test_keller_on_shear(capsys, write_map):
    code, payload = run_json(capsys, ["keller", "--map", write_map(SHEAR), "--degree", "8"])
    assert code == EXIT_OK
    assert payload == {"jac_is_one": True, "div_is_zero": True, "degree": 8}


def test_keller_pretty(capsys, write_map):
    assert run_command(["keller", "--map", write_map(SHEAR), "--pretty"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["jac_is_one: True", "div_is_zero: True", "degree: 8"]


def test_invert_all_methods(capsys, write_map):
    code, payload = run_json(capsys, ["invert", "--map", write_map(QUADRATIC), "--degree", "4", "--method", "all"])
    assert code == EXIT_OK
    assert payload["agree"] and payload["inverse_ok"]
    assert sorted(payload["G"]) == ["exp", "iterates", "solve"]
    for G in payload["G"].values():
        assert coefficients(G["components"][0]) == ["1", "-1", "2", "-5"]


def test_invert_pretty(capsys, write_map):
    assert run_command(["invert", "--map", write_map(SHEAR), "--pretty"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "G [solve] = (z1 - z2^2, z2)"


def test_infer(capsys, write_map):
    code, payload = run_json(capsys, ["infer", "--map", write_map(QUADRATIC), "--degree", "4", "--method", "all"])
    assert code == EXIT_OK
    assert payload["agree"] and payload["verified"]
    for a in payload["a"].values():
        assert coefficients(a["components"][0]) == ["1", "-1", "3/2"]


def test_infer_single_method(capsys, write_map):
    code, payload = run_json(capsys, ["infer", "--map", write_map(SHEAR)])
    assert code == EXIT_OK
    assert payload["verified"]
    assert coefficients(payload["a"]["components"][0]) == ["1"]
    assert payload["a"]["components"][1]["terms"] == []


@pytest.mark.parametrize("method", ["direct", "exp"])
def test_jacobian(capsys, write_map, method):
    argv = ["jacobian", "--map", write_map(QUADRATIC), "--degree", "4", "--method", method]
    code, payload = run_json(capsys, argv)
    assert code == EXIT_OK
    assert payload["certified_degree"] == 3
    assert coefficients(payload["jacobian"]) == ["1", "2"]


def test_jacobian_matrix_pretty(capsys, write_map):
    argv = ["jacobian", "--map", write_map(SHEAR), "--method", "exp", "--matrix", "--pretty"]
    assert run_command(argv) == EXIT_OK
    out = capsys.readouterr().out
    assert "2*z2" in out
    assert "certified modulo degree 7" in out


def test_deform_at_rational_time(capsys, write_map):
    code, payload = run_json(capsys, ["deform", "--map", write_map(QUADRATIC), "--degree", "4", "--t", "2"])
    assert code == EXIT_OK
    assert payload["t"] == "2"
    assert coefficients(payload["F_t"]["components"][0]) == ["1", "2", "2", "1"]


def test_deform_symbolic(capsys, write_map):
    code, payload = run_json(capsys, ["deform", "--map", write_map(QUADRATIC), "--degree", "3"])
    assert code == EXIT_OK
    # coefficients are lists of powers of t
    first = payload["F_t"]["components"][0]["terms"][0]
    assert first == {"exps": [1], "coeff": ["1"]}


def test_parity(capsys, write_map):
    code, payload = run_json(capsys, ["parity", "--map", write_map(SHEAR)])
    assert code == EXIT_OK
    assert payload["a_even"] and payload["G_equals_minus_F_minus"]
    assert not payload["F_odd"]
    assert payload["consistent"]


def test_bcw(capsys, write_map):
    code, payload = run_json(capsys, ["bcw", "--map", write_map(SHEAR), "--degree", "6"])
    assert code == EXIT_OK
    assert payload["nilpotent"] and payload["passed"]
    assert payload["vanishing_slices"] == [3, 4, 5, 6]


def test_liouville_exact(capsys):
    code, payload = run_json(capsys, ["liouville", "--matrix", "0 1; 0 0"])
    assert code == EXIT_OK
    assert payload["det_exp"] == "1" and payload["exp_trace"] == "1"
    assert payload["passed"]


def test_liouville_numeric(capsys):
    code, payload = run_json(capsys, ["liouville", "--matrix", "1 0; 0 2", "--mode", "numeric"])
    assert code == EXIT_OK
    assert float(payload["det_exp"]) == pytest.approx(math.exp(3), rel=1e-9)


def test_verify(capsys, write_map):
    code, payload = run_json(capsys, ["verify", "--map", write_map(SHEAR), "--degree", "5"])
    assert code == EXIT_OK
    assert payload["passed"]
    assert len(payload["checks"]) == 16


def test_selftest_with_csv(capsys, tmp_path):
    report = tmp_path / "reports" / "selftest.csv"
    argv = [
        "selftest", "--seed", "1", "--cases", "2", "--degree", "3", "--n", "2",
        "--suite", "parity", "--suite", "inversion", "--csv", str(report),
    ]
    code, payload = run_json(capsys, argv)
    assert code == EXIT_OK
    assert payload["passed"]
    assert payload["suites"] == {"inversion": {"passed": 2, "total": 2}, "parity": {"passed": 2, "total": 2}}
    frame = ReportHandler(str(report)).read_report()
    assert len(frame) == 4
    assert frame["passed"].all()


def test_syntax_error_exit_code(capsys, write_map):
    path = write_map("vars: x\nF1 = x + y\n")
    assert run_command(["keller", "--map", path]) == EXIT_USAGE
    assert "line 2, column 10" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path):
    assert run_command(["keller", "--map", str(tmp_path / "absent.map")]) == EXIT_USAGE


def test_map_outside_f1_exit_code(capsys, write_map):
    assert run_command(["keller", "--map", write_map("vars: x\nF1 = 1 + x\n")]) == EXIT_USAGE
    assert "z + (terms of order >= 2)" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["keller"], ["invert", "--map", "F.map", "--method", "newton"], ["liouville", "--matrix", "a b"]],
)
def test_usage_errors(argv):
    assert run_command(argv) == EXIT_USAGE


def test_numeric_exponential_that_does_not_converge(capsys):
    argv = ["liouville", "--matrix", "1 0; 0 2", "--mode", "numeric", "--kmax", "2"]
    assert run_command(argv) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_exact_liouville_needs_nilpotent_matrix():
    assert run_command(["liouville", "--matrix", "1 0; 0 0"]) == EXIT_USAGE


@pytest.mark.parametrize("value", ["abc", "1/0"])
def test_unreadable_time_exit_code(capsys, write_map, value):
    argv = ["deform", "--map", write_map(QUADRATIC), "--degree", "3", "--t", value]
    assert run_command(argv) == EXIT_USAGE
    assert "cannot read t" in capsys.readouterr().err


def test_oversized_exponent_exit_code(capsys, write_map):
    path = write_map("vars: x\nF1 = x + 0*7^2000000000\n")
    assert run_command(["keller", "--map", path, "--degree", "4"]) == EXIT_USAGE
    assert "exceeds the limit" in capsys.readouterr().err
