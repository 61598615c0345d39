"""Command-line interface.

Exit codes encode the verdict so shell scripts can branch on severity:
0 green (or valid / no exposure), 1 yellow, 2 orange, 3 red, 4 refused.
64 and up are usage and input errors: 64 usage, 65 bad data or findings,
66 missing file, 69 unreachable remote source.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
from pathlib import Path

from . import serialize
from .config import AppConfig, load_config, load_matrix
from .incidence import IncidenceTransportError, load_incidence
from .matrix import check_points, detect_conflicts, parse_matrix, parse_points, validate_matrix
from .model import DEFAULT_MAX_PERSONS, ValidationError
from .scenario import (
    Assessment,
    assess,
    assess_schedule,
    parse_profile,
    parse_scenario,
    parse_schedule,
    what_if,
)

EXIT_GREEN = 0
EXIT_YELLOW = 1
EXIT_ORANGE = 2
EXIT_RED = 3
EXIT_REFUSED = 4
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NOINPUT = 66
EXIT_UNAVAILABLE = 69


class _Abort(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract says 64
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Abort(EXIT_USAGE, f"{self.prog}: error: {message}")


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise _Abort(EXIT_NOINPUT, f"{path}: no such file") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _Abort(EXIT_DATA, f"{path}:{exc.lineno}: not valid JSON ({exc.msg})") from None


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except FileNotFoundError:
        raise _Abort(EXIT_NOINPUT, f"{path}: no such file") from None


def _load_cli_matrix(args):
    if args.matrix:
        matrix = parse_matrix(_read_text(args.matrix))
        report = validate_matrix(matrix)
        if not report.ok:
            raise _Abort(
                EXIT_DATA,
                f"{args.matrix}: matrix fails validation ({report.errors[0].message})",
            )
        return matrix
    from .matrix import default_matrix

    return default_matrix()


def _load_cli_incidence(args):
    if not getattr(args, "incidence", None):
        return None
    try:
        return load_incidence(args.incidence)
    except FileNotFoundError:
        raise _Abort(EXIT_NOINPUT, f"{args.incidence}: no such file") from None
    except IncidenceTransportError as exc:
        raise _Abort(EXIT_UNAVAILABLE, str(exc)) from None


def _parse_date(args) -> dt.date | None:
    if not getattr(args, "date", None):
        return None
    try:
        return dt.date.fromisoformat(args.date)
    except ValueError:
        raise _Abort(EXIT_USAGE, f"--date: not an ISO date: {args.date!r}") from None


def _exit_code(assessment: Assessment) -> int:
    if assessment.refused:
        return EXIT_REFUSED
    if assessment.no_exposure:
        return EXIT_GREEN
    return int(assessment.risk)


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _assessment_lines(assessment: Assessment) -> list[str]:
    label = assessment.scenario.label
    lines = []
    if assessment.refused:
        lines.append("REFUSED" + (f"  [{label}]" if label else ""))
    elif assessment.no_exposure:
        lines.append("NO EXPOSURE (zero risk)" + (f"  [{label}]" if label else ""))
    else:
        scored = assessment.scored
        lines.append(
            f"{assessment.risk.name} f={scored.f}" + (f"  [{label}]" if label else "")
        )
        lines.append(
            f"  severity {assessment.severity.name}; scores "
            f"n={scored.n} w={scored.w} c={scored.c} t={scored.t} "
            f"d={scored.d} m={scored.m} v={scored.v}"
        )
        lines.append(f"  {assessment.risk.recommendation}")
    for note in assessment.notes:
        lines.append(f"  note: {note}")
    return lines


def _describe_change(change) -> str:
    return f"{change.field} -> {change.band}"


def cmd_assess(args) -> int:
    matrix = _load_cli_matrix(args)
    incidence = _load_cli_incidence(args)
    scenario = parse_scenario(
        _read_json(args.scenario), incidence=incidence, on_date=_parse_date(args)
    )
    profile = parse_profile(_read_json(args.profile))
    result = assess(scenario, profile, matrix, max_persons=args.max_persons)
    if args.format == "json":
        _print_json(serialize.assessment_payload(result))
    else:
        print("\n".join(_assessment_lines(result)))
    return _exit_code(result)


def cmd_whatif(args) -> int:
    matrix = _load_cli_matrix(args)
    incidence = _load_cli_incidence(args)
    scenario = parse_scenario(
        _read_json(args.scenario), incidence=incidence, on_date=_parse_date(args)
    )
    profile = parse_profile(_read_json(args.profile))
    original = assess(scenario, profile, matrix, max_persons=args.max_persons)
    mitigations = what_if(scenario, profile, matrix, max_persons=args.max_persons)
    if args.format == "json":
        _print_json(serialize.whatif_payload(original, mitigations))
    else:
        print("\n".join(_assessment_lines(original)))
        shown = mitigations if args.top == 0 else mitigations[: args.top]
        if not shown:
            print("no mitigations available")
        for rank, mitigation in enumerate(shown, start=1):
            moves = "; ".join(_describe_change(change) for change in mitigation.changes)
            print(
                f"{rank:2d}. {moves}  =>  f={mitigation.new_f} "
                f"{mitigation.new_risk.name}"
            )
    return _exit_code(original)


def cmd_schedule(args) -> int:
    matrix = _load_cli_matrix(args)
    incidence = _load_cli_incidence(args)
    schedule = parse_schedule(
        _read_json(args.schedule), incidence=incidence, on_date=_parse_date(args)
    )
    profile = parse_profile(_read_json(args.profile))
    assessed = assess_schedule(schedule, profile, matrix, max_persons=args.max_persons)
    if args.format == "json":
        _print_json(serialize.schedule_payload(assessed))
    else:
        for index, entry in enumerate(assessed.entries, start=1):
            lines = _assessment_lines(entry)
            print(f"entry {index}: {lines[0]}")
            for line in lines[1:]:
                print(f"  {line.strip()}")
        headline = assessed.headline.name if assessed.headline else "-"
        print(f"headline: {'REFUSED' if assessed.any_refused else headline}")
        print(f"warning: {assessed.warning}")
    if assessed.any_refused:
        return EXIT_REFUSED
    return int(assessed.headline) if assessed.headline is not None else EXIT_GREEN


def cmd_matrix_validate(args) -> int:
    matrix = parse_matrix(_read_text(args.matrix))
    report = validate_matrix(matrix)
    if args.format == "json":
        _print_json(serialize.validation_payload(report))
    else:
        for finding in report.errors:
            print(f"error [{finding.rule}] {finding.location()}: {finding.message}")
        for finding in report.warnings:
            print(f"warning [{finding.rule}] {finding.location()}: {finding.message}")
        verdict = "valid" if report.ok else "INVALID"
        print(
            f"matrix {matrix.name!r} {verdict} "
            f"({len(report.errors)} errors, {len(report.warnings)} warnings)"
        )
    return EXIT_GREEN if report.ok else EXIT_DATA


def cmd_calibrate_check(args) -> int:
    matrix = _load_cli_matrix(args)
    points = parse_points(_read_text(args.points))
    conflicts = detect_conflicts(points)
    report = check_points(matrix, points)
    if args.format == "json":
        _print_json(serialize.calibration_payload(conflicts, report))
    else:
        for p, q in conflicts:
            print(f"conflict: {p.describe()} cannot hold together with {q.describe()}")
        for finding in report.errors:
            print(f"violation {finding.location()}: {finding.message}")
        clean = not conflicts and report.ok
        print(
            f"{len(points)} points against matrix {matrix.name!r}: "
            f"{len(conflicts)} conflicts, {len(report.errors)} violations"
            + ("" if clean else " (check failed)")
        )
    return EXIT_GREEN if not conflicts and report.ok else EXIT_DATA


def cmd_serve(args) -> int:
    from .service import serve

    config = load_config(args.config)
    if args.matrix:
        config.matrix_path = Path(args.matrix)
    if args.incidence:
        config.incidence_source = args.incidence
    if args.port:
        config.listen_port = args.port
    if args.host:
        config.listen_host = args.host
    if args.profile_path:
        config.profile_path = Path(args.profile_path)
    if args.max_persons:
        config.max_persons = args.max_persons
    serve(config, ui_path=args.ui)
    return EXIT_GREEN


def _add_engine_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--matrix", help="risk matrix file (default: built-in)")
    parser.add_argument(
        "--incidence", help="incidence CSV/JSON file or URL, for scenarios using 'region'"
    )
    parser.add_argument("--date", help="ISO date for region resolution (default: today)")
    parser.add_argument(
        "--max-persons",
        type=int,
        default=DEFAULT_MAX_PERSONS,
        help=f"refusal threshold for the person count (default {DEFAULT_MAX_PERSONS})",
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="riskgate", description=__doc__.strip().splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("assess", help="assess one scenario for one person")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--profile", required=True, help="profile JSON file")
    _add_engine_options(p)
    p.set_defaults(handler=cmd_assess)

    p = commands.add_parser("whatif", help="assess plus ranked mitigations")
    p.add_argument("--scenario", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--top", type=int, default=10, help="mitigations to show (0 = all)")
    _add_engine_options(p)
    p.set_defaults(handler=cmd_whatif)

    p = commands.add_parser("schedule", help="assess a list of scenarios entry by entry")
    p.add_argument("--schedule", required=True, help="schedule JSON file")
    p.add_argument("--profile", required=True)
    _add_engine_options(p)
    p.set_defaults(handler=cmd_schedule)

    matrix_cmd = commands.add_parser("matrix", help="matrix file tools")
    matrix_sub = matrix_cmd.add_subparsers(dest="subcommand", required=True)
    p = matrix_sub.add_parser("validate", help="check a matrix against the monotonicity rules")
    p.add_argument("--matrix", required=True, help="risk matrix file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=cmd_matrix_validate)

    calibrate_cmd = commands.add_parser("calibrate", help="calibration point tools")
    calibrate_sub = calibrate_cmd.add_subparsers(dest="subcommand", required=True)
    p = calibrate_sub.add_parser(
        "check", help="check calibration points for conflicts and against a matrix"
    )
    p.add_argument("--points", required=True, help="calibration points JSONL file")
    p.add_argument("--matrix", help="risk matrix file (default: built-in)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=cmd_calibrate_check)

    p = commands.add_parser("serve", help="run the local JSON service")
    p.add_argument("--config", help="config JSON file")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--matrix")
    p.add_argument("--incidence")
    p.add_argument("--profile-path")
    p.add_argument("--max-persons", type=int)
    p.add_argument("--ui", help="directory with the built web UI to serve at /")
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _Abort as abort:
        print(str(abort), file=sys.stderr)
        return abort.code
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOINPUT
    except IncidenceTransportError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_UNAVAILABLE
    except ValidationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
