"""
Surgery service: resolves knot specs and runs the engines for the CLI and the HTTP surface.
"""

import asyncio
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

from app.core.config import Settings, get_settings
from app.core.exceptions import (
    EngineDisagreementError,
    GradingInconsistencyError,
    InadmissiblePolynomialError,
    InvalidRequestError,
    UnsupportedFlavorError,
    UnsupportedSlopeError,
)
from app.core.logging import get_logger, surgery_logger
from app.models.cone_models import ComputeResult, Engine, SpincTable, TableFlavor
from app.models.knot_models import KnotKind, KnotSummary, ResolvedKnot, StaircaseKnot
from app.models.report_models import ObstructionReport, Verdict, VerificationFailure, VerificationSummary
from app.services.cone import (
    build_truncated_cone,
    chain_hat_dims,
    check_hf,
    closed_form_available,
    closed_form_hat_dims,
    counting_available,
    d_table,
    diagram_z_gradings,
    hat_dims,
    hat_from_plus,
    hf_plus,
    render_diagram,
    z_gradings,
)
from app.services.knotio import parse_knot_spec, torus_knot_alexander
from app.services.obstruct import full_report
from app.services.staircase import (
    admissibility_problem,
    knot_genus,
    nu,
    nu_from_complex,
    genus_from_nu,
    staircase_from_alexander,
    torsion_coefficients,
)


FAMILIES = ("torus2",)


class SurgeryService:
    """Entry point for tables, obstruction reports, verification and scans."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.logger = get_logger(__name__)

    # Knots

    def resolve_knot(self, text: str) -> ResolvedKnot:
        """Parse a knot spec and build the model the engines consume."""
        spec = parse_knot_spec(text)
        if spec.kind == KnotKind.CFK:
            return ResolvedKnot(spec=spec, genus=knot_genus(spec.complex), complex=spec.complex)

        alexander = torus_knot_alexander(*spec.torus) if spec.kind == KnotKind.TORUS else spec.alexander
        problem = admissibility_problem(alexander)
        if problem:
            return ResolvedKnot(
                spec=spec, genus=alexander.genus, admissible=False, inadmissible_reason=problem
            )
        staircase = staircase_from_alexander(alexander)
        return ResolvedKnot(spec=spec, genus=staircase.genus, staircase=staircase, complex=staircase.complex)

    def knot_summary(self, text: str) -> KnotSummary:
        resolved = self.resolve_knot(text)
        staircase = resolved.staircase
        summary = KnotSummary(
            knot=resolved.label,
            kind=resolved.spec.kind,
            genus=resolved.genus,
            admissible=resolved.admissible,
        )
        if staircase is not None:
            g = staircase.genus
            summary.alexander = str(staircase.alexander)
            summary.nu = nu(staircase) if g else 0
            summary.v = {s: staircase.V(s) for s in range(-g, g + 1)}
            summary.h = {s: staircase.H(s) for s in range(-g, g + 1)}
            summary.torsion_coefficients = torsion_coefficients(staircase.alexander)
            summary.generators = len(staircase.complex.generators)
        elif resolved.complex is not None:
            summary.nu = nu_from_complex(resolved.complex)
            summary.generators = len(resolved.complex.generators)
        elif resolved.spec.alexander is not None:
            summary.alexander = str(resolved.spec.alexander)
        return summary

    # Tables

    def _staircase_hat(self, knot: StaircaseKnot, p: int, engine: Engine, label: str) -> SpincTable:
        if engine == Engine.CLOSED:
            return closed_form_hat_dims(knot, p)
        direct = hat_dims(knot, p)
        if engine != Engine.BOTH or not 1 < abs(p) <= 2 * knot.genus - 1:
            return direct.model_copy(update={"engine": Engine.DIRECT})
        closed = closed_form_hat_dims(knot, p)
        for left, right in zip(closed.classes, direct.classes):
            if left.total != right.total:
                surgery_logger.engines_disagree(
                    knot=label, p=p, residue=left.residue, left=str(left.total), right=str(right.total)
                )
                raise EngineDisagreementError(label, p, left.residue, f"dim {left.total}", f"dim {right.total}")
        return direct.model_copy(update={"engine": Engine.BOTH})

    def _staircase_check(self, knot: StaircaseKnot, p: int, engine: Engine, label: str) -> SpincTable:
        if engine == Engine.CLOSED:
            return check_hf(knot, p, Engine.CLOSED)
        direct = check_hf(knot, p, Engine.DIRECT)
        if engine != Engine.BOTH or not counting_available(knot, p):
            return direct
        closed = check_hf(knot, p, Engine.CLOSED)
        for left, right in zip(closed.classes, direct.classes):
            if left.check.nonzero() != right.check.nonzero():
                surgery_logger.engines_disagree(
                    knot=label, p=p, residue=left.residue, left=str(left.check.nonzero()), right=str(right.check.nonzero())
                )
                raise EngineDisagreementError(
                    label, p, left.residue, str(left.check.nonzero()), str(right.check.nonzero())
                )
        return direct.model_copy(update={"engine": Engine.BOTH})

    def table(self, resolved: ResolvedKnot, p: int, flavor: TableFlavor, engine: Engine) -> SpincTable:
        """Per-class table of one flavor by the requested engine."""
        if p == 0:
            raise UnsupportedSlopeError(p, "the surgery slope must be non-zero")
        staircase = resolved.staircase
        if staircase is None and resolved.complex is None:
            raise InadmissiblePolynomialError(str(resolved.spec.alexander), resolved.inadmissible_reason or "")

        start = time.perf_counter()
        label = resolved.label
        if flavor == TableFlavor.HAT:
            if staircase is not None:
                table = self._staircase_hat(staircase, p, engine, label)
            elif engine == Engine.CLOSED:
                raise InvalidRequestError("the closed-form engine needs an L-space staircase",
                                          details={"knot": label})
            else:
                table = chain_hat_dims(resolved.complex, p)
        elif staircase is None:
            raise UnsupportedFlavorError(flavor.value, "needs an L-space staircase; use the hat flavor")
        elif flavor == TableFlavor.PLUS:
            table = hf_plus(staircase, p, engine, label=label)
        else:
            table = self._staircase_check(staircase, p, engine, label)

        table = table.model_copy(update={"knot": label})
        surgery_logger.engine_run(
            knot=label, p=p, engine=table.engine.value, flavor=flavor.value,
            duration=round(time.perf_counter() - start, 4),
        )
        return table

    def compute(self, knot: str, p: int, flavor: TableFlavor = TableFlavor.HAT,
                engine: Optional[Engine] = None, diagram: bool = False) -> ComputeResult:
        """Table plus cone renderings and, for large surgeries, the d-invariants."""
        resolved = self.resolve_knot(knot)
        table = self.table(resolved, p, flavor, engine or Engine(self.settings.default_engine))

        diagrams = None
        if diagram:
            model = resolved.staircase if resolved.staircase is not None else resolved.complex
            cone_flavor = flavor if resolved.staircase is not None else TableFlavor.HAT
            diagrams = [render_diagram(build_truncated_cone(model, p, r, cone_flavor)) for r in range(abs(p))]

        d_invariants = None
        staircase = resolved.staircase
        if staircase is not None and not staircase.is_trivial and p >= max(1, 2 * staircase.genus - 1):
            d_invariants = d_table(staircase, p)
        return ComputeResult(table=table, diagrams=diagrams, d_invariants=d_invariants)

    def obstruct(self, knot: str, p: int) -> ObstructionReport:
        return full_report(self.resolve_knot(knot), p)

    # Verification

    def family_knots(self, family: str, max_q: Optional[int] = None) -> List[str]:
        if family not in FAMILIES:
            raise InvalidRequestError(f"unknown family '{family}'", details={"families": list(FAMILIES)})
        bound = max_q or self.settings.verify_max_q
        return [f"torus:2,{q}" for q in range(3, bound + 1, 2)]

    @staticmethod
    def verification_slopes(genus: int, all_slopes: bool = False) -> List[int]:
        """±d for d | 2g-1, d > 1; every 1 < |p| <= 2g-1 with all_slopes."""
        span = 2 * genus - 1
        if all_slopes:
            magnitudes = range(2, span + 1)
        else:
            magnitudes = [d for d in range(2, span + 1) if span % d == 0]
        return sorted([-d for d in magnitudes] + list(magnitudes))

    def verify(self, family: Optional[str] = None, knot: Optional[str] = None,
               max_q: Optional[int] = None, all_slopes: bool = False) -> VerificationSummary:
        """Cross-check the engines and the V/H identities; records the first counterexample per check."""
        start = time.perf_counter()
        specs = [knot] if knot else self.family_knots(family or "torus2", max_q)
        summary = VerificationSummary()
        for spec in specs:
            resolved = self.resolve_knot(spec)
            summary.knots.append(resolved.label)
            if resolved.staircase is not None and not resolved.staircase.is_trivial:
                self._verify_staircase(resolved, all_slopes, summary)
            elif resolved.complex is not None:
                self._run_check(summary, "genus", resolved.label, None, None,
                                lambda cx=resolved.complex: (knot_genus(cx), genus_from_nu(cx)))
        summary.duration = round(time.perf_counter() - start, 4)
        surgery_logger.verify_completed(checks=summary.checks, failures=len(summary.failures),
                                        duration=summary.duration)
        return summary

    def _run_check(self, summary: VerificationSummary, check: str, knot: str, p: Optional[int],
                   residue: Optional[int], pair: Callable[[], tuple]) -> None:
        """Evaluate (expected, actual) and record a failure when they differ."""
        summary.checks += 1
        try:
            expected, actual = pair()
        except (EngineDisagreementError, GradingInconsistencyError) as e:
            expected, actual = "consistent engines", e.message
        if expected != actual:
            summary.failures.append(VerificationFailure(
                check=check, knot=knot, p=p, residue=residue, expected=str(expected), actual=str(actual),
            ))

    def _verify_staircase(self, resolved: ResolvedKnot, all_slopes: bool, summary: VerificationSummary) -> None:
        knot = resolved.staircase
        label = resolved.label
        g = knot.genus
        window = range(-g, g + 1)

        self._run_check(summary, "V non-increasing", label, None, None, lambda: (
            True, all(knot.V(s) >= knot.V(s + 1) for s in window)))
        self._run_check(summary, "H non-decreasing", label, None, None, lambda: (
            True, all(knot.H(s) <= knot.H(s + 1) for s in window)))
        self._run_check(summary, "V(-s) = V(s) + s", label, None, None, lambda: (
            [knot.V(s) + s for s in window], [knot.V(-s) for s in window]))
        self._run_check(summary, "V = torsion coefficients", label, None, None, lambda: (
            torsion_coefficients(knot.alexander), {s: knot.V(s) for s in range(0, g + 1)}))
        self._run_check(summary, "nu = genus", label, None, None, lambda: (g, nu(knot)))

        for p in self.verification_slopes(g, all_slopes):
            nodes = hat_dims(knot, p)
            closed = closed_form_hat_dims(knot, p)
            chain = chain_hat_dims(knot.complex, p)
            self._run_check(summary, "hat closed form vs node count", label, p, None,
                            lambda: (closed.totals(), nodes.totals()))
            self._run_check(summary, "hat node count vs chain level", label, p, None,
                            lambda: (nodes.totals(), chain.totals()))

            direct = hf_plus(knot, p, Engine.DIRECT)
            if closed_form_available(knot, p):
                closed_plus = hf_plus(knot, p, Engine.CLOSED)
                for residue in range(abs(p)):
                    self._run_check(summary, "plus closed form vs tower engine", label, p, residue, lambda r=residue: (
                        closed_plus.get(r).module.describe(), direct.get(r).module.describe()))
            if counting_available(knot, p):
                counted = check_hf(knot, p, Engine.CLOSED)
                for residue in range(abs(p)):
                    self._run_check(summary, "check counting vs coker U", label, p, residue, lambda r=residue: (
                        counted.get(r).check.nonzero(), direct.get(r).check.nonzero()))
            for residue in range(abs(p)):
                self._run_check(summary, "hat from plus vs node count", label, p, residue, lambda r=residue: (
                    nodes.get(r).hat.nonzero(), hat_from_plus(direct.get(r).module).normalized().nonzero()))

            zs = z_gradings(knot, p)
            for residue in range(abs(p)):
                diagram = build_truncated_cone(knot, p, residue, TableFlavor.PLUS)
                self._run_check(summary, "z recursion vs cone diagram", label, p, residue, lambda r=residue, d=diagram: (
                    diagram_z_gradings(knot, d), {triple.t: triple.z for triple in zs.classes[r]}))

    # Scans

    def _scan_one(self, resolved: ResolvedKnot, p: int) -> ObstructionReport:
        return full_report(resolved, p)

    async def scan(self, knots: List[str], slopes: Optional[List[int]] = None) -> List[ObstructionReport]:
        """Obstruction reports for every (knot, slope) pair, in input order.

        Without explicit slopes each knot is scanned over 1 < |p| <= 2g-1.
        """
        start = time.perf_counter()
        resolved = [self.resolve_knot(spec) for spec in knots]
        for entry in resolved:
            if entry.genus > self.settings.scan_max_genus:
                raise InvalidRequestError(
                    f"{entry.label} has genus {entry.genus} above the scan limit {self.settings.scan_max_genus}",
                    details={"knot": entry.label, "genus": entry.genus},
                )
        pairs = [
            (entry, p)
            for entry in resolved if entry.genus > 0
            for p in (slopes if slopes is not None else self.verification_slopes(entry.genus, all_slopes=True))
            if p != 0
        ]
        workers = self.settings.max_workers
        surgery_logger.scan_started(knots=len(resolved), slopes=len(pairs), workers=workers)

        semaphore = asyncio.Semaphore(workers)
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=workers) as executor:
            async def run(entry: ResolvedKnot, p: int) -> ObstructionReport:
                async with semaphore:
                    return await loop.run_in_executor(executor, self._scan_one, entry, p)

            reports = await asyncio.gather(*(run(entry, p) for entry, p in pairs))

        surgery_logger.scan_completed(
            runs=len(reports),
            obstructed=sum(1 for report in reports if report.verdict == Verdict.OBSTRUCTED),
            duration=round(time.perf_counter() - start, 4),
        )
        return list(reports)


