# qpg.py
"""
Command line entry point.

    qpg check <kind> -i FILE [--json OUT] [--points FILE] [--slow]
    qpg verify-example NAME... [--skip-slow] [--jobs N]
    qpg list-examples
    qpg report --merge DIR [--excel OUT]

Exit codes: 0 every check passed, 1 input error, 2 a check failed,
3 inconclusive checks only.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from chart_geometry import (
    bialgebra_over_point,
    build_cotangent_differential,
    check_action,
    check_coisotropic_stabilizers,
    check_dual_matches_cotangent,
    check_moment_map,
    check_qp_bialgebroid,
    check_quasi_poisson,
    coisotropy_witness,
    dual_differential_and_induced_bivector,
    i_map_and_check,
    tangent_bialgebroid,
)
from courant import check_courant_axioms, check_dirac
from fixtures import EXAMPLE_BUILDERS, SLOW_REASON, registry, run_fixture
from quadratic_lie import check_graded_lie, check_manin_triple
from report import SKIPPED, Report, announce, merge, reports_to_excel
from schema import InputDocument, SchemaError, load_points
from symbolic_core import IdealTooLargeError, MissingRuleError, ParseError, RingMismatchError

INPUT_ERRORS = (
    SchemaError,
    ParseError,
    IdealTooLargeError,
    RingMismatchError,
    MissingRuleError,
    ValueError,
    OSError,
)

EXIT_INPUT_ERROR = 1


# ===============================
# CHECK COMMANDS
# ===============================
def check_quasi_poisson_input(doc, points, slow):
    chart, act, pi, s = doc.chart(), doc.action(), doc.bivector(), doc.tensor()
    report = Report(f"quasi-poisson {chart.name}")
    report.extend(check_action(act))
    report.extend(check_quasi_poisson(chart, act, pi, s))
    report.extend(build_cotangent_differential(chart, act, pi, s).report)
    report.extend(check_coisotropic_stabilizers(act, s, points).report)
    return report


def check_moment_map_input(doc, points, slow):
    M = doc.space(with_moment=True)
    report = Report(f"moment map {M.name}")
    report.extend(check_moment_map(M))
    report.extend(i_map_and_check(M, points).report)
    return report


def check_manin_triple_input(doc, points, slow):
    D, A, B = doc.subalgebras()
    report = Report(f"manin triple in {D.name}")
    report.extend(check_graded_lie(D))
    report.extend(check_manin_triple(D, A, B))
    return report


def check_courant_input(doc, points, slow):
    E = doc.courant()
    if slow:
        return check_courant_axioms(E, points=points or None)
    report = check_courant_axioms(E, generating=E.frame, points=points or None)
    report.skip("function multiples", SLOW_REASON)
    return report


def check_dirac_input(doc, points, slow):
    D = doc.dirac()
    report = check_dirac(D, points=points or None, multiples=slow)
    if not slow:
        report.skip("function multiples", SLOW_REASON)
    return report


def check_bialgebroid_input(doc, points, slow):
    kind = doc.doc.get("bialgebroid", "point")
    report = Report(f"bialgebroid ({kind})")
    if kind == "point":
        B = bialgebra_over_point(doc.algebra(), doc.tensor())
        report.extend(check_qp_bialgebroid(B))
        report.extend(dual_differential_and_induced_bivector(B).report)
        return report
    if kind != "tangent":
        raise SchemaError("$.bialgebroid", f"unknown kind {kind!r}")
    if not slow:
        report.skip("tangent bialgebroid", SLOW_REASON)
        return report
    chart, act, pi, s = doc.chart(), doc.action(), doc.bivector(), doc.tensor()
    tb = tangent_bialgebroid(chart, act, pi, s)
    report.extend(check_qp_bialgebroid(tb.data))
    dual = dual_differential_and_induced_bivector(tb.data)
    report.extend(dual.report)
    report.extend(check_dual_matches_cotangent(tb, dual, build_cotangent_differential(chart, act, pi, s)))
    return report


def check_coisotropy_input(doc, points, slow):
    chart = doc.chart()
    report = Report(f"coisotropy in {chart.name}")
    witness = coisotropy_witness(chart, doc.generators(), doc.bivector(), doc.parametrization())
    report.add("coisotropic", not witness, witness)
    return report


CHECKS = {
    "quasi-poisson": check_quasi_poisson_input,
    "moment-map": check_moment_map_input,
    "manin-triple": check_manin_triple_input,
    "courant": check_courant_input,
    "dirac": check_dirac_input,
    "bialgebroid": check_bialgebroid_input,
    "coisotropy": check_coisotropy_input,
}


def run_check(kind, input_file, points_file=None, slow=False):
    """Load one input document and run a check; input errors propagate."""
    doc = InputDocument.from_file(input_file)
    raw = load_points(points_file) if points_file else None
    points = doc.points(raw)
    return CHECKS[kind](doc, points, slow)


# ===============================
# OUTPUT
# ===============================
def emit(report, json_path=None, quiet=False):
    announce(report.to_text(), quiet)
    if json_path:
        Path(json_path).write_text(report.to_json() + "\n", encoding="utf-8")
        announce(f"✔ report written to {json_path}", quiet)


def _fixture_job(args):
    name, slow = args
    return run_fixture(name, slow=slow, quiet=True)


def verify_examples(names, slow=False, jobs=None, quiet=False):
    """Run fixtures in parallel; returns the reports in the order given."""
    unknown = [n for n in names if n not in EXAMPLE_BUILDERS]
    if unknown:
        raise ValueError(f"unknown example(s): {', '.join(unknown)}")
    if jobs == 1 or len(names) == 1:
        reports = [run_fixture(n, slow=slow, quiet=quiet) for n in names]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_fixture_job, [(n, slow) for n in names]))
    for name, report in zip(names, reports):
        if any(o.status == SKIPPED for o in report):
            announce(f"⚠ {name}: slow checks skipped, run with --slow", quiet)
    return reports


def merge_directory(directory):
    paths = sorted(Path(directory).glob("*.json"))
    reports = []
    for path in paths:
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path.name}:$", f"invalid JSON: {exc.msg}") from exc
        reports.append(Report.from_payload(payload))
    return reports


# ===============================
# ARGUMENTS
# ===============================
def build_parser():
    parser = argparse.ArgumentParser(prog="qpg", description="Exact checks for quasi-Poisson structures")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="check an input document")
    check.add_argument("kind", choices=sorted(CHECKS))
    check.add_argument("-i", "--input", required=True, help="JSON input document")
    check.add_argument("--json", dest="json_out", help="write the report as JSON")
    check.add_argument("--points", help="JSON list of sample points")
    check.add_argument("--slow", action="store_true", help="run slow checks")
    check.add_argument("--quiet", action="store_true")

    verify = sub.add_parser("verify-example", help="run named examples")
    verify.add_argument("names", nargs="+", help="example names, or 'all'")
    speed = verify.add_mutually_exclusive_group()
    speed.add_argument("--slow", action="store_true", help="run slow checks")
    speed.add_argument("--skip-slow", action="store_true", help="skip slow checks (default)")
    verify.add_argument("--jobs", type=int, default=None, help="worker processes")
    verify.add_argument("--json", dest="json_out", help="write the report as JSON")
    verify.add_argument("--quiet", action="store_true")

    sub.add_parser("list-examples", help="list the example registry")

    rep = sub.add_parser("report", help="merge JSON reports")
    rep.add_argument("--merge", required=True, metavar="DIR")
    rep.add_argument("--excel", metavar="OUT", help="write an Excel workbook")
    rep.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    quiet = getattr(args, "quiet", False)
    try:
        if args.command == "list-examples":
            for fixture in registry():
                print(f"{fixture.name:30} {fixture.description}")
            return 0

        if args.command == "check":
            report = run_check(args.kind, args.input, args.points, args.slow)
            emit(report, args.json_out, quiet)
            return report.exit_code()

        if args.command == "verify-example":
            names = list(EXAMPLE_BUILDERS) if args.names == ["all"] else args.names
            reports = verify_examples(names, slow=args.slow, jobs=args.jobs, quiet=quiet)
            report = reports[0] if len(reports) == 1 else merge(reports, "examples")
            emit(report, args.json_out, quiet)
            return report.exit_code()

        if args.command == "report":
            reports = merge_directory(args.merge)
            if not reports:
                print(f"⚠ no reports in {args.merge}")
                return EXIT_INPUT_ERROR
            merged = merge(reports)
            announce(merged.to_text(), quiet)
            if args.excel:
                with open(args.excel, "wb") as fh:
                    reports_to_excel(reports, fh)
                announce(f"✔ workbook written to {args.excel}", quiet)
            return merged.exit_code()
    except INPUT_ERRORS as exc:
        print(f"⚠ {exc}")
        return EXIT_INPUT_ERROR
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
