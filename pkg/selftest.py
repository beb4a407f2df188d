"""
Randomized identity sweep and the full identity suite for a single map.

Each case draws its instances from numpy's default_rng seeded with
(seed, case), so a run is reproducible from the seed alone.
"""
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from deformation import (
    check_field_transport,
    check_flow_ode,
    check_iterate_specialization,
    check_jacobian_ode,
    check_unimodular_flow,
    deform,
)
from generator import (
    check_composition_law,
    infer_generator_log,
    infer_generator_multiindex,
    infer_generator_recursive,
    verify_generator,
)
from inversion import check_inverse, invert_exp, invert_iterates, invert_solve
from jacobian import (
    check_chain_rule,
    jacobian_det_direct,
    jacobian_det_exp,
    jacobian_det_exp_general,
    jacobian_matrix_direct,
    jacobian_matrix_exp,
    keller_check,
)
from mapfile import DEFAULT_DEGREE
from operators import SeriesMatrix, check_automorphism, exp_flow
from randommaps import (
    random_bcw_map,
    random_derivation,
    random_map,
    random_matrix,
    random_nilpotent_matrix,
    random_series,
    random_series_matrix,
)
from seriescore import T, JetflowError, MapTuple, Series, agree
from structure import bcw_case, liouville_check, parity_check

logger = logging.getLogger(__name__)

DEFAULT_CASES = 10

# largest polynomial degree of random maps and generators
MAX_POLY_DEGREE = 3

Outcome = Tuple[bool, str]


def _certified(D: int) -> int:
    return max(D - 1, 0)


def suite_generator(rng: np.random.Generator, n: int, D: int) -> Outcome:
    F = random_map(rng, n, MAX_POLY_DEGREE, D)
    A = infer_generator_recursive(F)
    report = verify_generator(F, A)
    same_log = infer_generator_log(F) == A
    same_multiindex = infer_generator_multiindex(F) == A
    detail = f"verify={report.passed} log={same_log} multiindex={same_multiindex}"
    return report.passed and same_log and same_multiindex, detail


def suite_inversion(rng: np.random.Generator, n: int, D: int) -> Outcome:
    F = random_map(rng, n, MAX_POLY_DEGREE, D)
    G = invert_exp(F)
    three_way = G == invert_iterates(F) == invert_solve(F)
    report = check_inverse(F, G)
    return three_way and report.passed, f"three_way={three_way} inverse={report.passed}"


def suite_jacobian_scalar(rng: np.random.Generator, n: int, D: int) -> Outcome:
    A = random_derivation(rng, n, MAX_POLY_DEGREE, D)
    c = _certified(D)
    Ft = deform(A)
    symbolic = agree(jacobian_det_exp(A, T), Ft.jacobian(), c)
    at_one = agree(jacobian_det_exp(A, 1), jacobian_det_direct(exp_flow(A)), c)
    return symbolic and at_one, f"symbolic={symbolic} t=1:{at_one}"


def suite_jacobian_general(rng: np.random.Generator, n: int, D: int) -> Outcome:
    A = random_derivation(rng, n, MAX_POLY_DEGREE, D)
    u = random_series(rng, n, D)
    Ft = deform(A)
    left = jacobian_det_exp_general(A, u, T)
    right = u.compose(Ft.components) * Ft.jacobian()
    ok = agree(left, right, _certified(D))
    return ok, f"u(F_t) J(F_t)={ok}"


def suite_jacobian_matrix(rng: np.random.Generator, n: int, D: int) -> Outcome:
    A = random_derivation(rng, n, MAX_POLY_DEGREE, D)
    U = random_series_matrix(rng, n, D)
    c = _certified(D)
    Ft = deform(A)
    JFt = Ft.jacobian_matrix()
    identity = agree(jacobian_matrix_exp(A, None, T), JFt, c)
    general = agree(jacobian_matrix_exp(A, U, T), U.compose(Ft.components) @ JFt, c)
    det = agree(jacobian_matrix_exp(A).det(), jacobian_det_exp(A), c)
    return identity and general and det, f"identity={identity} general={general} det={det}"


def suite_keller(rng: np.random.Generator, n: int, D: int) -> Outcome:
    c = _certified(D)
    keller = keller_check(exp_flow(random_derivation(rng, n, MAX_POLY_DEGREE, D, "divergence_free")))
    generic = None
    for _ in range(20):
        A = random_derivation(rng, n, MAX_POLY_DEGREE, D)
        if not A.divergence().truncate(c).is_zero():
            generic = keller_check(exp_flow(A))
            break
    ok = keller.jac_is_one and keller.div_is_zero and keller.consistent
    detail = f"divergence_free: jac_is_one={keller.jac_is_one}"
    if generic is not None:
        ok = ok and not generic.jac_is_one and generic.consistent
        detail += f" generic: jac_is_one={generic.jac_is_one}"
    return ok, detail


def suite_flow(rng: np.random.Generator, n: int, D: int) -> Outcome:
    A = random_derivation(rng, n, MAX_POLY_DEGREE, D)
    u = random_series(rng, n, D)
    ode = check_flow_ode(A, u).passed
    transport = check_field_transport(A).passed
    jacobian_ode = check_jacobian_ode(A).passed
    iterates = check_iterate_specialization(A, 3)
    unimodular = check_unimodular_flow(A)
    ok = ode and transport and jacobian_ode and iterates and unimodular
    detail = (
        f"ode={ode} transport={transport} jacobian_ode={jacobian_ode} "
        f"iterates={iterates} unimodular={unimodular}"
    )
    return ok, detail


def suite_algebra(rng: np.random.Generator, n: int, D: int) -> Outcome:
    A = random_derivation(rng, n, MAX_POLY_DEGREE, D)
    u = random_series(rng, n, D)
    v = random_series(rng, n, D)
    F = exp_flow(A)
    automorphism = check_automorphism(A, u, v)
    composition = check_composition_law(F, A, u)
    chain = check_chain_rule(F, random_map(rng, n, MAX_POLY_DEGREE, D))
    return automorphism and composition and chain, f"automorphism={automorphism} composition={composition} chain={chain}"


def suite_parity(rng: np.random.Generator, n: int, D: int) -> Outcome:
    details = []
    ok = True
    for kind in ("odd", "even", "generic"):
        report = parity_check(exp_flow(random_derivation(rng, n, MAX_POLY_DEGREE, D, kind)))
        expected = {"odd": report.a_odd, "even": report.a_even, "generic": True}[kind]
        ok = ok and report.consistent and expected
        details.append(f"{kind}={report.consistent and expected}")
    return ok, " ".join(details)


def suite_bcw(rng: np.random.Generator, n: int, D: int) -> Outcome:
    n = max(n, 2)
    d = min(int(rng.integers(2, 4)), D)
    report = bcw_case(random_bcw_map(rng, n, d, D))
    return report.nilpotent and report.passed, f"d={d} inverse={report.inverse_ok} a=H:{report.a_equals_H}"


def suite_liouville(rng: np.random.Generator, n: int, D: int) -> Outcome:
    exact = liouville_check(random_nilpotent_matrix(rng, n), "exact")
    numeric = liouville_check(random_matrix(rng, 3 if n == 1 else n), "numeric")
    return exact.passed and numeric.passed, f"exact={exact.passed} numeric_error={numeric.max_abs_error:.3e}"


SUITES: Dict[str, Callable[[np.random.Generator, int, int], Outcome]] = {
    "algebra": suite_algebra,
    "bcw": suite_bcw,
    "flow": suite_flow,
    "generator": suite_generator,
    "inversion": suite_inversion,
    "jacobian_general": suite_jacobian_general,
    "jacobian_matrix": suite_jacobian_matrix,
    "jacobian_scalar": suite_jacobian_scalar,
    "keller": suite_keller,
    "liouville": suite_liouville,
    "parity": suite_parity,
}


def _run_suite(name: str, seed: int, case: int, n: int, D: int) -> dict:
    rng = np.random.default_rng([seed, case, sorted(SUITES).index(name)])
    try:
        passed, detail = SUITES[name](rng, n, D)
    except JetflowError as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    if not passed:
        logger.warning(f"case {case} suite {name} failed: {detail}")
    return {"case": case, "suite": name, "n": n, "degree": D, "passed": bool(passed), "detail": detail}


def run_selftest(
    seed: int = 42,
    cases: int = DEFAULT_CASES,
    degree: int = DEFAULT_DEGREE,
    n: Optional[int] = None,
    suites: Optional[List[str]] = None,
) -> pd.DataFrame:
    """
    Run every identity suite on `cases` seeded random instances.

    Args:
        seed (int): Base seed.
        cases (int): Number of cases per suite.
        degree (int): Truncation degree D.
        n (int, optional): Number of variables; drawn from {1, 2, 3} per case when omitted.
        suites (list, optional): Suite names to run; all when omitted.

    Returns:
        DataFrame: One row per (case, suite), sorted by case then suite.
    """
    assert isinstance(seed, int) and seed >= 0, "seed must be a non-negative integer."
    assert isinstance(cases, int) and cases >= 1, "cases must be a positive integer."
    assert isinstance(degree, int) and degree >= 2, "degree must be at least 2."
    names = sorted(SUITES) if suites is None else sorted(suites)
    for name in names:
        assert name in SUITES, f"unknown suite '{name}'."

    rows = []
    for case in range(cases):
        nvars = n if n is not None else int(np.random.default_rng([seed, case]).integers(1, 4))
        for name in names:
            rows.append(_run_suite(name, seed, case, nvars, degree))
        logger.info(f"selftest case {case} done (n={nvars})")
    frame = pd.DataFrame(rows, columns=["case", "suite", "n", "degree", "passed", "detail"])
    return frame.sort_values(["case", "suite"], kind="mergesort").reset_index(drop=True)


def summarize(frame: pd.DataFrame, seed: int) -> dict:
    """Deterministic JSON summary of a selftest table."""
    totals = frame.groupby("suite")["passed"].agg(["sum", "count"])
    failures = frame[~frame["passed"]]
    return {
        "seed": seed,
        "cases": int(frame["case"].nunique()),
        "degree": int(frame["degree"].iloc[0]) if len(frame) else None,
        "passed": bool(frame["passed"].all()),
        "suites": {
            suite: {"passed": int(row["sum"]), "total": int(row["count"])}
            for suite, row in totals.sort_index().iterrows()
        },
        "failures": [
            {"case": int(row.case), "suite": row.suite, "detail": row.detail}
            for row in failures.itertuples(index=False)
        ],
    }


def verify_map(F: MapTuple) -> List[dict]:
    """
    Run every identity that applies to a single map in F_1.

    Args:
        F (MapTuple): The map.

    Returns:
        list: One {"name", "passed"} entry per identity, in a fixed order.
    """
    assert isinstance(F, MapTuple), "F must be a MapTuple."
    F.require_tangent_to_identity()
    n, D = F.nvars, F.degree
    c = _certified(D)
    A = infer_generator_recursive(F)
    G = invert_solve(F)
    sample = Series.variable(0, n, D) + sum(
        (Series.variable(i, n, D) ** 2 for i in range(n)), Series.zero(n, D)
    )
    unit = SeriesMatrix.identity(n, n, c)

    results = [
        ("generator_roundtrip", verify_generator(F, A).passed),
        ("generator_log", infer_generator_log(F) == A),
        ("generator_multiindex", infer_generator_multiindex(F) == A),
        ("inverse_three_way", invert_exp(F) == invert_iterates(F) == G),
        ("inverse_two_sided", check_inverse(F, G).passed),
        ("composition_law", check_composition_law(F, A, sample)),
        ("chain_rule_inverse", jacobian_matrix_direct(F.compose(G)).truncate(c) == unit),
        ("jacobian_exp", agree(jacobian_det_exp(A), jacobian_det_direct(F), c)),
        ("jacobian_matrix_exp", agree(jacobian_matrix_exp(A), jacobian_matrix_direct(F), c)),
        ("keller_consistent", keller_check(F).consistent),
        ("flow_ode", check_flow_ode(A, Series.variable(0, n, D)).passed),
        ("field_transport", check_field_transport(A).passed),
        ("jacobian_ode", check_jacobian_ode(A).passed),
        ("iterates", check_iterate_specialization(A, 3)),
        ("unimodular_flow", check_unimodular_flow(A)),
        ("parity_consistent", parity_check(F).consistent),
    ]
    return [{"name": name, "passed": bool(passed)} for name, passed in results]
