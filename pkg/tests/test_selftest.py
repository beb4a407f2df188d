import pytest

from randommaps import random_map
from selftest import SUITES, run_selftest, summarize, verify_map
from seriescore import MapTuple, NotTangentToIdentityError, Series


@pytest.fixture(scope="module")
def small_run():
    return run_selftest(seed=7, cases=2, degree=4, n=2)


def test_every_suite_passes(small_run):
    assert list(small_run.columns) == ["case", "suite", "n", "degree", "passed", "detail"]
    assert len(small_run) == 2 * len(SUITES)
    failed = small_run[~small_run["passed"]]
    assert failed.empty, failed.to_dict("records")


def test_rows_are_sorted_by_case_then_suite(small_run):
    keys = list(zip(small_run["case"], small_run["suite"]))
    assert keys == sorted(keys)


def test_same_seed_same_table(small_run):
    again = run_selftest(seed=7, cases=2, degree=4, n=2)
    assert again.equals(small_run)


def test_summary(small_run):
    summary = summarize(small_run, 7)
    assert summary["seed"] == 7
    assert summary["cases"] == 2
    assert summary["degree"] == 4
    assert summary["passed"] is True
    assert sorted(summary["suites"]) == sorted(SUITES)
    assert summary["suites"]["bcw"] == {"passed": 2, "total": 2}
    assert summary["failures"] == []


def test_suite_selection_and_random_dimension():
    frame = run_selftest(seed=3, cases=3, degree=3, suites=["parity", "inversion"])
    assert set(frame["suite"]) == {"inversion", "parity"}
    assert frame["n"].between(1, 3).all()
    assert frame["passed"].all()


def test_unknown_suite_is_rejected():
    with pytest.raises(AssertionError):
        run_selftest(cases=1, suites=["nonsense"])


def test_verify_map_on_shear(shear):
    checks = verify_map(shear)
    assert len(checks) == 16
    assert checks[0] == {"name": "generator_roundtrip", "passed": True}
    assert all(c["passed"] for c in checks)


def test_verify_map_on_random_map():
    assert all(c["passed"] for c in verify_map(random_map(12, 2, 3, 5)))


def test_verify_map_needs_tangent_to_identity():
    F = MapTuple([Series(1, 4, {(1,): 2})])
    with pytest.raises(NotTangentToIdentityError):
        verify_map(F)
