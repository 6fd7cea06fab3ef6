"""Command-line front end.

Exit statuses: 0 success, 1 verification failure, 2 usage or parse error,
3 evaluation error, 4 document validation failure, 5 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
import warnings
from fractions import Fraction

from . import dsl
from .combinators import nonlinear_add_curve
from .core import DEFAULT_TOLERANCE, Mode, Probability
from .errors import (
    DocumentError,
    EvaluationError,
    InvalidProbability,
    LexError,
    ParseError,
    SemanticOverlap,
    ValidationFailure,
)
from .evidence import combine_document, load_document
from .oracle import random_property_battery
from .reproductions import DEFAULT_COUNTS, ERRATUM, PASS, TABLE_COLUMNS, log10_error, published_examples, table1

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_EVAL = 3
EXIT_INVALID = 4
EXIT_IO = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _counts(text: str) -> list[int]:
    try:
        return [_positive_int(t.strip()) for t in text.split(",") if t.strip()]
    except argparse.ArgumentTypeError as exc:
        raise argparse.ArgumentTypeError(f"counts: {exc}") from None


def _probability(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return v


def _step(text: str) -> Fraction:
    v = _probability(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"step must lie in (0, 1), got {text}")
    return v


def _common_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    parser.add_argument("--mode", choices=[m.value for m in Mode], default=default("float"),
                        help="number representation (default float)")
    parser.add_argument("--format", choices=["table", "csv", "json"], default=default("table"),
                        help="output format (default table)")
    parser.add_argument("--precision", type=_positive_int, default=default(6),
                        help="significant digits printed (default 6)")
    parser.add_argument("--tolerance", type=float, default=default(DEFAULT_TOLERANCE),
                        help="absolute tolerance for floating comparisons (default 1e-9)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="probcomb", description="Non-linear probability combination and diagnostics.")
    _common_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate a combination expression")
    p.add_argument("expression")
    _common_options(p, suppress=True)

    p = sub.add_parser("combine", help="combine an evidence document (JSON)")
    p.add_argument("path")
    _common_options(p, suppress=True)

    p = sub.add_parser("table1", help="Laplace vs cMPE comparison table")
    p.add_argument("--counts", type=_counts, default=list(DEFAULT_COUNTS),
                   help="comma-separated group sizes (default 5,10,50,100,1000)")
    _common_options(p, suppress=True)

    p = sub.add_parser("curve", help="series of x (+) delta over a grid of x")
    p.add_argument("--delta", type=_probability, default=Fraction(2, 5))
    p.add_argument("--step", type=_step, default=Fraction(1, 10))
    _common_options(p, suppress=True)

    p = sub.add_parser("examples", help="recompute the published worked values")
    _common_options(p, suppress=True)

    p = sub.add_parser("verify", help="run the exact-arithmetic property battery")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=_positive_int, default=1000)
    _common_options(p, suppress=True)
    return parser


def _fmt(x, precision: int) -> str:
    return f"{float(x):.{precision}g}"


def _emit_rows(header: list[str], rows: list[list], fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) for i, h in enumerate(header)]
    out.write("  ".join(str(h).ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _caret(source: str, span: tuple[int, int]) -> str:
    start, end = span
    return f"  {source}\n  {' ' * start}{'^' * max(1, end - start)}"


def _value_record(p: Probability, precision: int) -> dict:
    rec = {"value": float(p), "mode": p.mode.value}
    if p.mode is Mode.EXACT_RATIONAL:
        rec["exact"] = str(p.value)
    if p.mode is Mode.LOG_COMPLEMENT:
        rec["log_complement"] = p.log_complement
        rec["log10_error"] = log10_error(p)
    return rec


def cmd_eval(args, out, err) -> int:
    source = args.expression
    if not source.strip():
        err.write("error: empty expression\n")
        return EXIT_USAGE
    try:
        node = dsl.parse_expression(source)
    except (LexError, ParseError) as exc:
        err.write(f"{type(exc).__name__}: {exc.message}\n{_caret(source, exc.span)}\n")
        return EXIT_USAGE
    try:
        value = dsl.evaluate(node, args.mode)
    except EvaluationError as exc:
        err.write(f"error: {exc.message}\n{_caret(source, exc.span)}\n")
        return EXIT_EVAL
    rec = _value_record(value, args.precision)
    if args.format == "json":
        out.write(json.dumps({"expression": source, **rec}) + "\n")
    elif args.format == "csv":
        _emit_rows(list(rec), [[rec[k] for k in rec]], "csv", out)
    else:
        line = _fmt(value, args.precision)
        if value.mode is Mode.EXACT_RATIONAL and value.value.denominator != 1:
            line += f"  ({value.value})"
        elif value.mode is Mode.LOG_COMPLEMENT and 0 < value.error < 1e-6:
            line += f"  (error 10^{rec['log10_error']:.{args.precision}g})"
        out.write(line + "\n")
    return EXIT_OK


def cmd_combine(args, out, err) -> int:
    try:
        doc = load_document(args.path, args.mode)
    except OSError as exc:
        err.write(f"error: cannot read {args.path}: {exc.strerror or exc}\n")
        return EXIT_IO
    except (DocumentError, InvalidProbability) as exc:
        err.write(f"error: invalid document: {exc}\n")
        return EXIT_USAGE
    try:
        result = combine_document(doc, args.mode)
    except SemanticOverlap as exc:
        err.write("SemanticOverlap: evidence channels are not semantically independent\n")
        for v in exc.violations:
            err.write(f"  {v.first} and {v.second} share tag(s): {', '.join(sorted(v.shared))}\n")
        return EXIT_INVALID
    except ValidationFailure as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_INVALID

    if args.format == "json":
        out.write(json.dumps({"hypothesis": doc.hypothesis_id, **result.to_dict()}, indent=2) + "\n")
        return EXIT_OK
    rows = [
        [s.operator, " ".join(s.operands), _fmt(s.result, args.precision), s.note]
        for s in result.trail
    ]
    rows.append(["result", doc.hypothesis_id, _fmt(result.probability, args.precision), ""])
    if args.format == "table":
        out.write(f"hypothesis: {doc.hypothesis_id}\n")
    _emit_rows(["operator", "operands", "value", "note"], rows, args.format, out)
    return EXIT_OK


def cmd_table1(args, out, err) -> int:
    rows = table1(args.counts, args.mode)
    notes = [n for r in rows for n in r.footnotes]
    if args.format == "json":
        payload = {
            "columns": list(TABLE_COLUMNS),
            "rows": [
                {"n": r.n, **{c: float(v) for c, v in zip(TABLE_COLUMNS[1:], r.values)}, "errata": list(r.footnotes)}
                for r in rows
            ],
            "footnotes": notes,
        }
        out.write(json.dumps(payload, indent=2) + "\n")
        return EXIT_OK
    if args.format == "csv":
        body = [[r.n, *(_fmt(v, args.precision) for v in r.values), " | ".join(r.footnotes)] for r in rows]
        _emit_rows([*TABLE_COLUMNS, "footnotes"], body, "csv", out)
        return EXIT_OK
    marks = {}
    body = []
    for r in rows:
        mark = ""
        if r.footnotes:
            marks[r.n] = len(marks) + 1
            mark = f" [{marks[r.n]}]"
        body.append([r.n, *(_fmt(v, args.precision) for v in r.values)])
        body[-1][-1] += mark
    _emit_rows(list(TABLE_COLUMNS), body, "table", out)
    if notes:
        out.write("\nerrata (published value differs from the formula):\n")
        for r in rows:
            for n in r.footnotes:
                out.write(f"  [{marks[r.n]}] {n}\n")
    return EXIT_OK


def cmd_curve(args, out, err) -> int:
    delta = Probability(args.delta, Mode.EXACT_RATIONAL).to(args.mode)
    series = nonlinear_add_curve(delta, args.step)
    if args.format == "json":
        out.write(json.dumps({"delta": float(delta), "points": [{"x": float(x), "y": float(y)} for x, y in series]}) + "\n")
        return EXIT_OK
    rows = [[_fmt(x, args.precision), _fmt(y, args.precision)] for x, y in series]
    _emit_rows(["x", "y"], rows, args.format, out)
    return EXIT_OK


def cmd_examples(args, out, err) -> int:
    started = time.perf_counter()
    checks = published_examples(args.mode, args.tolerance)
    elapsed = time.perf_counter() - started
    regular = [c for c in checks if c.status != ERRATUM]
    errata = [c for c in checks if c.status == ERRATUM]
    ok = all(c.status == PASS for c in regular)
    if args.format == "json":
        out.write(json.dumps({
            "passed": ok,
            "seconds": elapsed,
            "checks": [c.to_dict() for c in regular],
            "errata": [c.to_dict() for c in errata],
        }, indent=2) + "\n")
        return EXIT_OK if ok else EXIT_VERIFY
    rows = [[c.status, c.name, c.printed, _fmt(c.computed, args.precision), c.note] for c in regular]
    rows += [[c.status, c.name, c.printed, _fmt(c.computed, args.precision), c.note] for c in errata]
    if args.format == "csv":
        _emit_rows(["status", "name", "printed", "computed", "note"], rows, "csv", out)
    else:
        _emit_rows(["status", "name", "printed", "computed", "note"], rows[: len(regular)], "table", out)
        out.write("\nERRATA\n")
        _emit_rows(["status", "name", "printed", "computed", "note"], rows[len(regular):], "table", out)
        passed = sum(c.status == PASS for c in regular)
        out.write(f"\n{passed}/{len(regular)} passed, {len(errata)} errata noted ({elapsed:.3f}s)\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify(args, out, err) -> int:
    started = time.perf_counter()
    report = random_property_battery(args.seed, args.cases)
    elapsed = time.perf_counter() - started
    if args.format == "json":
        rec = {"passed": report.passed, "seed": report.seed, "cases": report.cases,
               "checks": report.checks_run, "seconds": elapsed}
        if report.failure is not None:
            rec["counterexample"] = str(report.failure)
        out.write(json.dumps(rec) + "\n")
    elif report.passed:
        out.write(f"PASS: {report.cases} cases, {report.checks_run} exact checks (seed {report.seed}, {elapsed:.2f}s)\n")
    else:
        out.write(f"FAIL: {report.failure}\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


COMMANDS = {
    "eval": cmd_eval,
    "combine": cmd_combine,
    "table1": cmd_table1,
    "curve": cmd_curve,
    "examples": cmd_examples,
    "verify": cmd_verify,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        status = COMMANDS[args.command](args, out, err)
    for w in caught:
        err.write(f"warning: {w.message}\n")
    return status


def run(argv=None) -> str:
    """Run a command and return its standard output; for scripting."""
    buf = io.StringIO()
    main(argv, out=buf)
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
