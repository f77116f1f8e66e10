"""Command-line front end: parse a model file, analyze it, render a report.

Exit codes:
    0  success
    1  unreadable input, parse error, or model validation error
    2  constraints not scale-invariant and --strict was given
    3  internal invariant violation (always a bug, never a modeling error)
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .model import ModelError, build_dimension_matrix
from .modelfile import ModelFileError, ParseError, parse_model, render_report
from .reduce import InvariantViolation, analyze, check_scale_invariance, constraint_jacobian


@dataclass(frozen=True)
class CliConfig:
    command: str  # "analyze" | "check"
    input_path: str  # file path, or "-" for standard input
    format: str = "text"  # "text" | "json"
    strict: bool = False
    color: bool = False


def _display_path(path: str) -> str:
    return "<stdin>" if path == "-" else path


def _format_parse_errors(path: str, errors: tuple[ParseError, ...]) -> str:
    shown = _display_path(path)
    return "".join(
        f"{shown}:{e.span.line}:{e.span.column}: error[{e.code.value}]: {e.message}\n"
        for e in errors
    )


def run(config: CliConfig, input_text: str) -> tuple[int, str, str]:
    """Execute one command on already-read input text.

    Returns (exit_code, output, diagnostics). On a nonzero exit code the
    output stream is empty; diagnostics carry the explanation.
    """
    try:
        model = parse_model(input_text)
    except ModelFileError as exc:
        return 1, "", _format_parse_errors(config.input_path, exc.errors)

    if config.command == "check":
        a = build_dimension_matrix(model)
        j = constraint_jacobian(model)
        invariant = check_scale_invariance(a, j)
        out = (
            "model OK\n"
            f"quantities: {model.n}\n"
            f"dimensions: {model.m}\n"
            f"constraints: {len(model.constraints)}\n"
            f"scale invariant: {'yes' if invariant else 'no'}\n"
        )
        return 0, out, ""

    try:
        report = analyze(model)
    except ModelError as exc:
        return 1, "", f"error: {exc}\n"
    except InvariantViolation as exc:
        return 3, "", f"internal error: {exc}\n"
    if config.strict and not report.scale_invariant:
        return 2, "", (
            "error: constraints are not scale-invariant (J @ A^T != 0) "
            "and --strict was given\n"
        )
    output = render_report(report, config.format, color=config.color)
    warnings = "".join(f"warning: {w}\n" for w in report.warnings)
    return 0, output, warnings


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pim",
        description="Dimensional analysis with monomial constraints, "
        "in exact rational arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    analyze_p = sub.add_parser("analyze", help="full analysis report")
    analyze_p.add_argument("input", help="model file, or '-' for standard input")
    analyze_p.add_argument(
        "--format", choices=("text", "json"), default="text", help="report format"
    )
    analyze_p.add_argument(
        "--strict",
        action="store_true",
        help="fail (exit 2) when constraints are not scale-invariant",
    )
    check_p = sub.add_parser("check", help="validate a model file only")
    check_p.add_argument("input", help="model file, or '-' for standard input")
    return parser


def _want_color() -> bool:
    return sys.stdout.isatty() and os.environ.get("PIM_COLOR", "1") != "0"


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    config = CliConfig(
        command=args.command,
        input_path=args.input,
        format=getattr(args, "format", "text"),
        strict=getattr(args, "strict", False),
        color=_want_color() and getattr(args, "format", "text") == "text",
    )
    try:
        if config.input_path == "-":
            text = sys.stdin.read()
        else:
            with open(config.input_path, encoding="utf-8") as handle:
                text = handle.read()
    except OSError as exc:
        print(f"error: cannot read {_display_path(config.input_path)}: {exc}", file=sys.stderr)
        return 1
    code, output, diagnostics = run(config, text)
    if output:
        sys.stdout.write(output)
    if diagnostics:
        sys.stderr.write(diagnostics)
    return code


if __name__ == "__main__":
    sys.exit(main())
