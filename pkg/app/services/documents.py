"""
JSON documents (schema 1) and plain-text renderings of tables, reports and summaries.
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional

from app.models.algebra_models import GradedModule, GradedVectorSpace
from app.models.cone_models import SpincClass, SpincTable
from app.models.knot_models import KnotSummary
from app.models.report_models import ObstructionReport, VerificationSummary


SCHEMA_VERSION = 1


def to_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def graded_document(space: Optional[GradedVectorSpace]) -> Optional[Dict[str, int]]:
    if space is None:
        return None
    return {str(grading): dim for grading, dim in space.nonzero().items()}


def module_document(module: GradedModule) -> Dict[str, Any]:
    return {
        "tower_bottom": module.tower_bottom,
        "torsion": [{"length": piece.length, "top": piece.top} for piece in module.torsion],
    }


def _class_document(entry: SpincClass) -> Dict[str, Any]:
    document: Dict[str, Any] = {"residue": entry.residue, "total": entry.total}
    if entry.hat is not None:
        document["hat"] = graded_document(entry.hat)
    if entry.module is not None:
        document["module"] = module_document(entry.module)
    if entry.check is not None:
        document["check"] = graded_document(entry.check)
        document["gr_bot"] = entry.gr_bot
        document["gr_top"] = entry.gr_top
    return document


def table_document(
    table: SpincTable,
    diagrams: Optional[List[str]] = None,
    d_invariants: Optional[Dict[int, Fraction]] = None,
) -> Dict[str, Any]:
    """Per-class table, classes ordered by residue."""
    document: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "kind": "table",
        "knot": table.knot,
        "p": table.p,
        "flavor": table.flavor.value,
        "engine": table.engine.value,
        "dims": {str(entry.residue): entry.total for entry in table.classes},
        "classes": [_class_document(entry) for entry in table.classes],
    }
    if d_invariants is not None:
        document["d_invariants"] = {str(s): fraction_text(d) for s, d in sorted(d_invariants.items())}
    if diagrams is not None:
        document["diagrams"] = diagrams
    return document


def report_document(report: ObstructionReport) -> Dict[str, Any]:
    return {"schema": SCHEMA_VERSION, "kind": "report", **report.model_dump(mode="json")}


def summary_document(summary: KnotSummary) -> Dict[str, Any]:
    body = summary.model_dump(mode="json")
    body["knot_kind"] = body.pop("kind")
    for key in ("v", "h", "torsion_coefficients"):
        body[key] = {str(s): value for s, value in sorted(getattr(summary, key).items())}
    return {"schema": SCHEMA_VERSION, "kind": "knot", **body}


def verification_document(summary: VerificationSummary) -> Dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "verification",
        "passed": summary.passed,
        "knots": summary.knots,
        "checks": summary.checks,
        "failures": [failure.model_dump(mode="json") for failure in summary.failures],
    }


def scan_document(reports: List[ObstructionReport]) -> Dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "scan",
        "runs": [
            {"knot": report.knot, "p": report.p, "verdict": report.verdict.value, "stage": report.stage}
            for report in reports
        ],
    }


# Text


def _graded_text(space: Optional[GradedVectorSpace]) -> str:
    if space is None or not space.nonzero():
        return "0"
    return " + ".join(f"F{{{g}}}" if d == 1 else f"F^{d}{{{g}}}" for g, d in space.nonzero().items())


def render_table_text(table: SpincTable, diagrams: Optional[List[str]] = None,
                      d_invariants: Optional[Dict[int, Fraction]] = None) -> str:
    lines = [f"{table.knot}, p = {table.p}, {table.flavor.value} ({table.engine.value})"]
    for entry in table.classes:
        line = f"  [{entry.residue}] dim {entry.total}"
        if entry.module is not None:
            line += f"  HF+ = {entry.module.describe()}"
        elif entry.check is not None:
            line += f"  ȞF = {_graded_text(entry.check)}"
        elif entry.hat is not None:
            line += f"  ĤF = {_graded_text(entry.hat)}"
        lines.append(line)
    if d_invariants:
        lines.append("  d-invariants: " + ", ".join(f"d({s}) = {fraction_text(d)}" for s, d in sorted(d_invariants.items())))
    for diagram in diagrams or []:
        lines.extend("  " + row for row in diagram.splitlines())
    return "\n".join(lines) + "\n"


def render_report_text(report: ObstructionReport) -> str:
    lines = [
        f"{report.knot}, p = {report.p} (genus {report.genus}): {report.verdict.value}",
        f"  {report.reason}",
    ]
    if report.candidate_orders:
        lines.append(f"  candidate orders r: {', '.join(str(r) for r in report.candidate_orders)}")
    for summand in report.summands:
        line = f"    r = {summand.r}: {summand.verdict.value}"
        if summand.witness is not None:
            line += f" ({summand.witness.describe()})"
        lines.append(line)
    if report.witness is not None and not report.summands:
        lines.append(f"  witness: {report.witness.describe()}")
    lines.append(f"  note: {report.caveat}")
    return "\n".join(lines) + "\n"


def render_summary_text(summary: KnotSummary) -> str:
    lines = [
        f"{summary.knot}: genus {summary.genus}, {'admissible' if summary.admissible else 'not admissible'}",
    ]
    if summary.alexander:
        lines.append(f"  Δ = {summary.alexander}")
    if summary.nu is not None:
        lines.append(f"  ν = {summary.nu}")
    if summary.v:
        lines.append("  V: " + ", ".join(f"V{s} = {v}" for s, v in sorted(summary.v.items())))
    return "\n".join(lines) + "\n"


def render_verification_text(summary: VerificationSummary) -> str:
    status = "pass" if summary.passed else "FAIL"
    lines = [f"verify: {status} ({summary.checks} checks over {len(summary.knots)} knots)"]
    if summary.failures:
        lines.append(f"  first counterexample: {summary.failures[0].describe()}")
    return "\n".join(lines) + "\n"


def render_scan_text(reports: List[ObstructionReport]) -> str:
    return "".join(f"{report.knot}\tp = {report.p}\t{report.verdict.value}\t{report.stage}\n" for report in reports)
