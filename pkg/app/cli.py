#!/usr/bin/env python3
"""
Command-line front end: compute, obstruct, verify and scan.

Exit codes: 0 ok, 2 input error, 3 verification failure. Logs go to stderr,
results to stdout or --out.
"""

import argparse
import asyncio
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.core.config import get_settings
from app.core.dependencies import get_container
from app.core.exceptions import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    FloerServiceException,
    exit_code_for,
)
from app.core.logging import configure_logging, get_logger
from app.models.cone_models import Engine, TableFlavor
from app.models.request_models import OutputFormat, RunConfig
from app.services.documents import (
    SCHEMA_VERSION,
    render_report_text,
    render_scan_text,
    render_table_text,
    render_verification_text,
    report_document,
    scan_document,
    table_document,
    to_json,
    verification_document,
)
from app.services.surgery import FAMILIES, SurgeryService


def slope_range(text: str) -> List[int]:
    """Parse `A..B` into [A, B]."""
    low, sep, high = text.partition("..")
    try:
        if not sep:
            raise ValueError(text)
        return [int(low), int(high)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="knotfloer",
        description="Heegaard Floer homology of integer surgeries and reducibility obstructions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(command: argparse.ArgumentParser) -> None:
        command.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                             default=settings.default_format, help="Output format")
        command.add_argument("--out", help="Write output to this file instead of stdout")

    def slope_flags(command: argparse.ArgumentParser, required: bool) -> None:
        group = command.add_mutually_exclusive_group(required=required)
        group.add_argument("--slope", type=int, help="Surgery slope p")
        group.add_argument("--slopes", dest="slope_range", type=slope_range,
                           help="Inclusive slope range A..B (write --slopes=-3..3 for negative A)")

    compute = sub.add_parser("compute", help="Per-Spin^c Floer tables of p-surgery")
    compute.add_argument("--knot", required=True, help="torus:a,b | alex:\"...\" | cfk:path")
    slope_flags(compute, required=True)
    compute.add_argument("--flavor", choices=[f.value for f in TableFlavor], default=TableFlavor.HAT.value)
    compute.add_argument("--engine", choices=[e.value for e in Engine], default=settings.default_engine)
    compute.add_argument("--diagram", action="store_true", help="Include a text rendering of each cone")
    output_flags(compute)

    obstruct = sub.add_parser("obstruct", help="Reducibility obstruction report")
    obstruct.add_argument("--knot", required=True)
    slope_flags(obstruct, required=True)
    output_flags(obstruct)

    verify = sub.add_parser("verify", help="Cross-check the engines over a family or one knot")
    target = verify.add_mutually_exclusive_group()
    target.add_argument("--family", choices=list(FAMILIES), default=None)
    target.add_argument("--knot")
    verify.add_argument("--max-q", dest="max_q", type=int, default=None)
    verify.add_argument("--all-slopes", dest="all_slopes", action="store_true")
    output_flags(verify)

    scan = sub.add_parser("scan", help="Obstruction verdicts over a knot family and slope range")
    scan.add_argument("--family", choices=list(FAMILIES), default=None)
    scan.add_argument("--knot", action="append", dest="knots", default=None, help="Repeatable")
    scan.add_argument("--max-q", dest="max_q", type=int, default=None)
    scan.add_argument("--slopes", dest="slope_range", type=slope_range, default=None)
    output_flags(scan)
    return parser


def emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_compute(service: SurgeryService, config: RunConfig) -> int:
    chunks = []
    documents = []
    for p in config.slopes():
        result = service.compute(config.knot, p, config.flavor, config.engine, config.diagram)
        if config.output_format == OutputFormat.JSON:
            documents.append(table_document(result.table, result.diagrams, result.d_invariants))
        else:
            chunks.append(render_table_text(result.table, result.diagrams, result.d_invariants))
    if config.output_format == OutputFormat.JSON:
        emit(to_json(documents[0] if len(documents) == 1 else {"schema": SCHEMA_VERSION, "kind": "tables", "tables": documents}),
             config.out)
    else:
        emit("".join(chunks), config.out)
    return EXIT_OK


def cmd_obstruct(service: SurgeryService, config: RunConfig) -> int:
    reports = [service.obstruct(config.knot, p) for p in config.slopes()]
    if config.output_format == OutputFormat.JSON:
        documents = [report_document(report) for report in reports]
        emit(to_json(documents[0] if len(documents) == 1 else {"schema": SCHEMA_VERSION, "kind": "reports", "reports": documents}),
             config.out)
    else:
        emit("".join(render_report_text(report) for report in reports), config.out)
    return EXIT_OK


def cmd_verify(service: SurgeryService, config: RunConfig) -> int:
    summary = service.verify(family=config.family, knot=config.knot, max_q=config.max_q,
                             all_slopes=config.all_slopes)
    if config.output_format == OutputFormat.JSON:
        emit(to_json(verification_document(summary)), config.out)
    else:
        emit(render_verification_text(summary), config.out)
    return EXIT_OK if summary.passed else EXIT_VERIFICATION_FAILED


def cmd_scan(service: SurgeryService, config: RunConfig, knots: Optional[List[str]]) -> int:
    specs = knots or service.family_knots(config.family or "torus2", config.max_q)
    slopes = config.slopes() if config.slope_range is not None else None
    reports = asyncio.run(service.scan(specs, slopes))
    if config.output_format == OutputFormat.JSON:
        emit(to_json(scan_document(reports)), config.out)
    else:
        emit(render_scan_text(reports), config.out)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    configure_logging()
    logger = get_logger(__name__)

    try:
        config = RunConfig(
            knot=args.knot if args.command != "scan" else None,
            slope=getattr(args, "slope", None),
            slope_range=getattr(args, "slope_range", None),
            flavor=getattr(args, "flavor", TableFlavor.HAT.value),
            engine=getattr(args, "engine", get_settings().default_engine),
            output_format=args.output_format,
            out=args.out,
            diagram=getattr(args, "diagram", False),
            family=getattr(args, "family", None),
            max_q=getattr(args, "max_q", None),
            all_slopes=getattr(args, "all_slopes", False),
        )
    except ValidationError as e:
        sys.stderr.write(f"error: {e.errors()[0]['msg']}\n")
        return EXIT_INPUT_ERROR

    container = get_container()
    container.initialize_sync()
    service = container.get_surgery_service()

    try:
        if args.command == "compute":
            return cmd_compute(service, config)
        if args.command == "obstruct":
            return cmd_obstruct(service, config)
        if args.command == "verify":
            return cmd_verify(service, config)
        return cmd_scan(service, config, args.knots)
    except FloerServiceException as e:
        logger.debug("Command failed", command=args.command, error_code=e.error_code)
        sys.stderr.write(f"error: {e.message}\n")
        if e.error_code == "ENGINE_DISAGREEMENT":
            sys.stderr.write(f"  left:  {e.details.get('left')}\n  right: {e.details.get('right')}\n")
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
