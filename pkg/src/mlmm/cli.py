"""Command line interface.

Exit codes: 0 success, 1 validation or domain failure, 2 I/O or parse
failure (argparse usage errors also exit 2). Output is deterministic
for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .exceptions import (
    IngestError,
    ModelParseError,
    ModelValidationError,
    ScoringError,
    UndefinedKappaError,
)
from .ingest import bind_sheet, parse_responses
from .metrics import pairwise_kappa_matrix
from .model import default_mlmm, load_model
from .report import gap_analysis, render, render_agreement
from .scoring import AggregationPolicy, aggregate_ratings, assess
from .validation import has_errors

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load_model_arg(path: str | None):
    if path is None:
        return default_mlmm()
    return load_model(_read_text(path))


def _institution(path: str) -> str:
    return "stdin" if path == "-" else Path(path).stem


def _guess_format(path: str) -> str:
    return "json" if path.lower().endswith(".json") else "csv"


def _print_diagnostics(diagnostics) -> None:
    for d in diagnostics:
        print(str(d), file=sys.stderr)


def _write_output(body: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(body)
    else:
        Path(out).write_text(body, encoding="utf-8")


def _load_sheet(args):
    """Shared assess/agreement input pipeline. Returns (sheet, diagnostics)."""
    document = _read_text(args.responses)
    records, diagnostics = parse_responses(document, _guess_format(args.responses))
    if not records and has_errors(diagnostics):
        _print_diagnostics(diagnostics)
        raise ModelParseError("no usable response records")
    if args.binding == "strict" and has_errors(diagnostics):
        _print_diagnostics(diagnostics)
        raise IngestError("strict binding: malformed records in the response document")
    sheet, bind_diags = bind_sheet(
        records,
        _load_model_arg(args.model),
        mode=args.binding,
        institution=_institution(args.responses),
    )
    _print_diagnostics(diagnostics + bind_diags)
    return sheet


def cmd_validate(args) -> int:
    model = _load_model_arg(args.model)
    total = model.total_statements()
    print(f"OK: model {model.name!r} is valid ({total} statements, "
          f"{len(model.csfs)} CSFs)")
    return EXIT_OK


def cmd_assess(args) -> int:
    sheet = _load_sheet(args)
    aggregated = aggregate_ratings(sheet, AggregationPolicy(method=args.aggregation))
    result = assess(aggregated, sheet.model)
    agreement = pairwise_kappa_matrix(sheet) if len(sheet.raters) >= 2 else None
    gap = gap_analysis(result, aggregated, sheet.model)
    rendered = render(result, agreement=agreement, gap=gap, format=args.format)
    _write_output(rendered.body, args.out)
    return EXIT_OK


def cmd_agreement(args) -> int:
    sheet = _load_sheet(args)
    agreement = pairwise_kappa_matrix(sheet)
    rendered = render_agreement(
        agreement, institution=sheet.institution, format=args.format
    )
    _write_output(rendered.body, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlmm",
        description="Staged maturity assessment of multi-rater Likert questionnaires.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p):
        p.add_argument(
            "--model",
            help="model JSON document (default: the built-in five-level model)",
        )

    def add_io(p):
        p.add_argument(
            "--responses",
            required=True,
            help="response document, CSV or JSON by extension; '-' reads CSV "
            "from stdin",
        )
        p.add_argument(
            "--binding",
            choices=("strict", "lenient"),
            default="strict",
            help="strict rejects incomplete raters, lenient drops them",
        )
        p.add_argument(
            "--format", choices=("text", "json", "markdown"), default="text"
        )
        p.add_argument("--out", help="write the report here instead of stdout")

    p_validate = sub.add_parser("validate", help="check a model document")
    add_model(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_assess = sub.add_parser("assess", help="score responses and report")
    add_model(p_assess)
    add_io(p_assess)
    p_assess.add_argument(
        "--aggregation",
        choices=("median", "mean"),
        default="median",
        help="cross-rater consolidation policy",
    )
    p_assess.set_defaults(func=cmd_assess)

    p_agreement = sub.add_parser("agreement", help="inter-rater agreement only")
    add_model(p_agreement)
    add_io(p_agreement)
    p_agreement.set_defaults(func=cmd_agreement)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelValidationError as exc:
        for d in exc.diagnostics:
            print(str(d), file=sys.stderr)
        print(f"error: invalid model document "
              f"({len(exc.diagnostics)} problem(s))", file=sys.stderr)
        return EXIT_INVALID
    except (IngestError, ScoringError, UndefinedKappaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ModelParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
