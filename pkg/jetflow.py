"""
Command-line front end.

    jetflow keller --map F.map --degree 8
    jetflow invert --map F.map --method all --pretty
    jetflow selftest --seed 42 --cases 50 --csv reports/selftest.csv

Exit codes: 0 when every reported identity holds, 1 when one fails, 2 for
usage, parse and domain errors.
"""
import json
import logging
import sys
from argparse import ArgumentParser, Namespace
from fractions import Fraction
from typing import List, Optional

from deformation import deform
from generator import INFER_METHODS, infer_generator_recursive, verify_generator
from inversion import INVERT_METHODS, check_inverse
from jacobian import jacobian_det_direct, jacobian_det_exp, jacobian_matrix_direct, jacobian_matrix_exp, keller_check
from mapfile import DEFAULT_DEGREE, MapFile, read_map
from operators import NUMERIC_EPS, NUMERIC_KMAX
from reporthandler import ReportHandler
from selftest import DEFAULT_CASES, SUITES, run_selftest, summarize, verify_map
from seriescore import JetflowError, MapTuple
from structure import as_constant_matrix, bcw_case, liouville_check, parity_check

logger = logging.getLogger("jetflow")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _emit(args: Namespace, payload: dict, text: str) -> None:
    if args.pretty:
        print(text)
    else:
        print(json.dumps(payload, indent=2))


def _load(args: Namespace) -> MapFile:
    return read_map(args.map, args.degree)


def _flags(report: dict) -> str:
    return "\n".join(f"{key}: {value}" for key, value in report.items())


def cmd_infer(args: Namespace) -> int:
    mapfile = _load(args)
    F, names = mapfile.map, mapfile.vars
    if args.method in ("both", "all"):
        methods = ["recursive", "log"] if args.method == "both" else list(INFER_METHODS)
    else:
        methods = [args.method]
    results = {name: INFER_METHODS[name](F) for name in methods}
    first = results[methods[0]]
    agree = all(A == first for A in results.values())
    report = verify_generator(F, first)
    passed = agree and report.passed
    if len(methods) == 1:
        payload = {"a": first.to_json(), "verified": report.passed}
    else:
        payload = {"a": {name: A.to_json() for name, A in results.items()}, "agree": agree, "verified": report.passed}
    text = "\n".join(f"a [{name}] = {A.to_text(names)}" for name, A in results.items())
    _emit(args, payload, f"{text}\nverified: {report.passed}" + ("" if len(methods) == 1 else f"\nagree: {agree}"))
    return EXIT_OK if passed else EXIT_FAILED


def cmd_invert(args: Namespace) -> int:
    mapfile = _load(args)
    F, names = mapfile.map, mapfile.vars
    methods = list(INVERT_METHODS) if args.method == "all" else [args.method]
    results = {name: INVERT_METHODS[name](F) for name in methods}
    first = results[methods[0]]
    agree = all(G == first for G in results.values())
    report = check_inverse(F, first)
    passed = agree and report.passed
    if len(methods) == 1:
        payload = {"G": first.to_json(), "inverse_ok": report.passed}
    else:
        payload = {"G": {name: G.to_json() for name, G in results.items()}, "agree": agree, "inverse_ok": report.passed}
    text = "\n".join(f"G [{name}] = {G.to_text(names)}" for name, G in results.items())
    _emit(args, payload, f"{text}\ninverse_ok: {report.passed}" + ("" if len(methods) == 1 else f"\nagree: {agree}"))
    return EXIT_OK if passed else EXIT_FAILED


def cmd_jacobian(args: Namespace) -> int:
    mapfile = _load(args)
    F, names = mapfile.map, mapfile.vars
    certified = max(F.degree - 1, 0)
    if args.method == "exp":
        A = infer_generator_recursive(F)
        result = jacobian_matrix_exp(A) if args.matrix else jacobian_det_exp(A)
    else:
        result = jacobian_matrix_direct(F) if args.matrix else jacobian_det_direct(F)
    result = result.truncate(certified)
    key = "jacobian_matrix" if args.matrix else "jacobian"
    payload = {key: result.to_json(), "method": args.method, "degree": F.degree, "certified_degree": certified}
    _emit(args, payload, f"{key} [{args.method}] = {result.to_text(names)}\ncertified modulo degree {certified}")
    return EXIT_OK


def cmd_keller(args: Namespace) -> int:
    report = keller_check(_load(args).map)
    _emit(args, report.model_dump(), _flags(report.model_dump()))
    return EXIT_OK if report.consistent else EXIT_FAILED


def cmd_deform(args: Namespace) -> int:
    mapfile = _load(args)
    A = infer_generator_recursive(mapfile.map)
    Ft = deform(A)
    if args.t is None:
        payload = {"F_t": Ft.to_json(), "degree": Ft.degree}
        text = f"F_t = {Ft.to_text(mapfile.vars)}"
    else:
        try:
            t0 = Fraction(args.t)
        except (ValueError, ZeroDivisionError) as e:
            raise JetflowError(f"cannot read t '{args.t}': {e}")
        specialized = Ft.specialize(t0)
        payload = {"F_t": specialized.to_json(), "t": str(t0), "degree": Ft.degree}
        text = f"F_{t0} = {specialized.to_text(mapfile.vars)}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_parity(args: Namespace) -> int:
    report = parity_check(_load(args).map)
    payload = report.model_dump()
    payload["consistent"] = report.consistent
    _emit(args, payload, _flags(payload))
    return EXIT_OK if report.consistent else EXIT_FAILED


def cmd_bcw(args: Namespace) -> int:
    mapfile = _load(args)
    F = mapfile.map
    F.require_tangent_to_identity()
    H = F - MapTuple.identity(F.nvars, F.degree)
    report = bcw_case(H)
    payload = report.model_dump()
    payload["passed"] = report.passed
    text = {k: v for k, v in payload.items() if k != "G"}
    if report.G is not None:
        text["G"] = MapTuple.from_json(report.G).to_text(mapfile.vars)
    _emit(args, payload, _flags(text))
    return EXIT_OK if report.passed else EXIT_FAILED


def _parse_matrix(text: str, exact: bool):
    rows = [row.split() for row in text.split(";") if row.strip()]
    if exact:
        return as_constant_matrix([[Fraction(x) for x in row] for row in rows], exact=True)
    return as_constant_matrix([[float(Fraction(x)) for x in row] for row in rows], exact=False)


def cmd_liouville(args: Namespace) -> int:
    exact = args.mode == "exact"
    try:
        M = _parse_matrix(args.matrix, exact)
    except (ValueError, ZeroDivisionError) as e:
        raise JetflowError(f"cannot read matrix '{args.matrix}': {e}")
    report = liouville_check(M, args.mode, args.eps, args.kmax)
    _emit(args, report.model_dump(), _flags(report.model_dump()))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_verify(args: Namespace) -> int:
    checks = verify_map(_load(args).map)
    passed = all(c["passed"] for c in checks)
    payload = {"checks": checks, "passed": passed}
    _emit(args, payload, _flags({c["name"]: c["passed"] for c in checks}) + f"\npassed: {passed}")
    return EXIT_OK if passed else EXIT_FAILED


def cmd_selftest(args: Namespace) -> int:
    frame = run_selftest(seed=args.seed, cases=args.cases, degree=args.degree, n=args.n, suites=args.suite)
    if args.csv:
        ReportHandler(args.csv).save_report(frame)
    summary = summarize(frame, args.seed)
    text = "\n".join(
        f"{suite}: {counts['passed']}/{counts['total']}" for suite, counts in summary["suites"].items()
    )
    _emit(args, summary, f"{text}\npassed: {summary['passed']}")
    return EXIT_OK if summary["passed"] else EXIT_FAILED


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help="Truncation degree D.")
    common.add_argument("--pretty", action="store_true", help="Print the canonical text form instead of JSON.")
    common.add_argument("--verbose", "-v", action="count", default=0, help="-v for INFO, -vv for DEBUG logs.")

    with_map = ArgumentParser(add_help=False, parents=[common])
    with_map.add_argument("--map", type=str, required=True, help="Path to the map file.")

    parser = ArgumentParser(prog="jetflow", description="Exponential formulas for truncated formal power series maps")
    commands = parser.add_subparsers(dest="command", required=True)

    infer = commands.add_parser("infer", parents=[with_map], help="Generator a with F = exp(A)z.")
    infer.add_argument("--method", choices=list(INFER_METHODS) + ["both", "all"], default="recursive")
    infer.set_defaults(handler=cmd_infer)

    invert = commands.add_parser("invert", parents=[with_map], help="Formal inverse G of F.")
    invert.add_argument("--method", choices=list(INVERT_METHODS) + ["all"], default="solve")
    invert.set_defaults(handler=cmd_invert)

    jacobian = commands.add_parser("jacobian", parents=[with_map], help="Jacobian or Jacobian matrix of F.")
    jacobian.add_argument("--method", choices=["direct", "exp"], default="direct")
    jacobian.add_argument("--matrix", action="store_true", help="Output the Jacobian matrix.")
    jacobian.set_defaults(handler=cmd_jacobian)

    keller = commands.add_parser("keller", parents=[with_map], help="det JF = 1 against div a = 0.")
    keller.set_defaults(handler=cmd_keller)

    deform_cmd = commands.add_parser("deform", parents=[with_map], help="The flow F_t = exp(tA)z.")
    deform_cmd.add_argument("--t", type=str, default=None, help="Rational value of t; symbolic when omitted.")
    deform_cmd.set_defaults(handler=cmd_deform)

    parity = commands.add_parser("parity", parents=[with_map], help="Parity of F, a and G.")
    parity.set_defaults(handler=cmd_parity)

    bcw = commands.add_parser("bcw", parents=[with_map], help="F = z + H with (JH)^2 = 0.")
    bcw.set_defaults(handler=cmd_bcw)

    liouville = commands.add_parser("liouville", parents=[common], help="det e^M = e^{tr M}.")
    liouville.add_argument("--matrix", type=str, required=True, help="Rows separated by ';', e.g. '0 1; 0 0'.")
    liouville.add_argument("--mode", choices=["exact", "numeric"], default="exact")
    liouville.add_argument("--eps", type=float, default=NUMERIC_EPS)
    liouville.add_argument("--kmax", type=int, default=NUMERIC_KMAX)
    liouville.set_defaults(handler=cmd_liouville)

    verify = commands.add_parser("verify", parents=[with_map], help="Every identity on one map.")
    verify.set_defaults(handler=cmd_verify)

    selftest = commands.add_parser("selftest", parents=[common], help="Randomized identity sweep.")
    selftest.add_argument("--seed", type=int, default=42)
    selftest.add_argument("--n", type=int, default=None, help="Number of variables; random in 1..3 when omitted.")
    selftest.add_argument("--cases", type=int, default=DEFAULT_CASES)
    selftest.add_argument("--suite", action="append", choices=sorted(SUITES), help="Restrict to a suite (repeatable).")
    selftest.add_argument("--csv", type=str, default=None, help="Also write the per-case table to this CSV file.")
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")
    logging.getLogger().setLevel(level)


def run_command(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and return its exit code.

    Args:
        argv (list, optional): Arguments without the program name; sys.argv when omitted.

    Returns:
        int: 0 on success, 1 on a failed identity, 2 on usage or input errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (JetflowError, OSError, AssertionError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
