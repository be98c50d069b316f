"""
Reducibility obstructions for integer surgeries.

Every test compares graded Floer data across Spin^c classes: a summand with
|H²| = r forces the data of [s] and [s + r] to agree. The tests can forbid
reducibility but never certify it.
"""

from typing import List, Optional, Tuple

from app.core.exceptions import (
    GradingInconsistencyError,
    InvalidRequestError,
    InvalidSummandOrderError,
    SlopeOutOfRangeError,
    TrivialKnotError,
    UnsupportedSlopeError,
)
from app.core.logging import surgery_logger
from app.models.cone_models import Engine, SpincClass, SpincTable, TableFlavor
from app.models.knot_models import ResolvedKnot, StaircaseKnot
from app.models.report_models import (
    ObstructionReport,
    PeriodicityWitness,
    SlopeVerdict,
    SummandVerdict,
    Verdict,
)
from app.services.cone import chain_hat_dims, check_hf, closed_form_hat_dims, hf_plus
from app.services.staircase import admissible_polynomials, hat_a_dimension, staircase_from_alexander


def candidate_orders(p: int) -> List[int]:
    """Orders r = |H²| of a non-lens summand: r | p with |p| / r >= 2."""
    modulus = abs(p)
    return [r for r in range(1, modulus) if modulus % r == 0]


def _class_data(table: SpincTable, residue: int) -> Tuple[object, str]:
    entry = table.get(residue)
    if table.flavor == TableFlavor.PLUS:
        return entry.module.relative_invariant(), entry.module.describe()
    if table.flavor == TableFlavor.CHECK:
        dims = entry.check.nonzero()
        return tuple(dims.items()), f"ȞF {dims}"
    return entry.total, f"dim ĤF = {entry.total}"


def compare_classes(table: SpincTable, first: int, second: int) -> Optional[PeriodicityWitness]:
    """Witness when classes [first] and [second] differ as relatively graded data."""
    modulus = abs(table.p)
    first, second = first % modulus, second % modulus
    left, left_text = _class_data(table, first)
    right, right_text = _class_data(table, second)
    if left == right:
        return None
    return PeriodicityWitness(first=first, second=second, flavor=table.flavor, left=left_text, right=right_text)


def periodicity_test(table: SpincTable, r: int) -> SummandVerdict:
    """CONSISTENT iff every class [s] matches [s + r]; otherwise the first failing pair."""
    modulus = abs(table.p)
    if r < 1 or r >= modulus or modulus % r:
        raise InvalidSummandOrderError(r, table.p)
    for residue in range(modulus):
        witness = compare_classes(table, residue, residue + r)
        if witness is not None:
            return SummandVerdict(r=r, verdict=Verdict.OBSTRUCTED, witness=witness)
    return SummandVerdict(r=r, verdict=Verdict.CONSISTENT)


def _combine(test: str, p: int, summands: List[SummandVerdict], obstructed: str, open_: str,
             open_verdict: Verdict = Verdict.NOT_OBSTRUCTED) -> SlopeVerdict:
    """OBSTRUCTED only when every candidate order is obstructed."""
    if summands and all(item.verdict == Verdict.OBSTRUCTED for item in summands):
        return SlopeVerdict(test=test, p=p, verdict=Verdict.OBSTRUCTED, reason=obstructed,
                            summands=summands, witness=summands[0].witness)
    return SlopeVerdict(test=test, p=p, verdict=open_verdict, reason=open_, summands=summands)


def divisibility_obstruction(knot: StaircaseKnot, p: int) -> SlopeVerdict:
    """For p not dividing 2g-1 the hat table has a unique descent class, which rules out every r."""
    if knot.is_trivial:
        raise TrivialKnotError("divisibility_obstruction")
    span = 2 * knot.genus - 1
    if not 1 < abs(p) <= span:
        raise SlopeOutOfRangeError(p, knot.genus)
    if span % p == 0:
        return SlopeVerdict(
            test="divisibility", p=p, verdict=Verdict.INCONCLUSIVE,
            reason=f"p divides 2g-1 = {span}; passing to the graded tests",
        )

    table = closed_form_hat_dims(knot, p)
    modulus = abs(p)
    descent = [s for s in range(modulus) if table.get(s - 1).total > table.get(s).total]
    if descent != [knot.genus % modulus]:
        raise GradingInconsistencyError(
            "hat table must descend exactly at the class of g",
            details={"p": p, "descent": descent, "totals": table.totals()},
        )
    summands = [periodicity_test(table, r) for r in candidate_orders(p)]
    return _combine(
        "divisibility", p, summands,
        obstructed=f"p does not divide 2g-1 = {span}; [{knot.genus % modulus}] is the only class where dim ĤF drops",
        open_="hat table periodic for some r",
    )


def _check_level(entry: SpincClass, p: int) -> Optional[int]:
    """gr_bot for p > 0, gr_top - 2|p| for p < 0, in the class's own grading."""
    if entry.gr_bot is None:
        return None
    return entry.gr_bot if p > 0 else entry.gr_top - 2 * abs(p)


def _check_level_verdict(table: SpincTable, p: int, r: int) -> SummandVerdict:
    """Compare dim ȞF of [0] and [∓r], each read at its own level."""
    modulus = abs(p)
    partner = (-r if p > 0 else r) % modulus
    base, other = table.get(0), table.get(partner)
    base_level, other_level = _check_level(base, p), _check_level(other, p)
    left = 0 if base_level is None else base.check.dim(base_level)
    right = 0 if other_level is None else other.check.dim(other_level)
    if left == right:
        return SummandVerdict(r=r, verdict=Verdict.CONSISTENT)
    return SummandVerdict(
        r=r,
        verdict=Verdict.OBSTRUCTED,
        witness=PeriodicityWitness(
            first=0,
            second=partner,
            flavor=TableFlavor.CHECK,
            grading=base_level,
            second_grading=other_level,
            left=f"dim ȞF = {left}",
            right=f"dim ȞF = {right}",
        ),
    )


def graded_slope_eliminator(knot: StaircaseKnot, p: int) -> SlopeVerdict:
    """Graded tests for p | 2g-1: ȞF levels for |p| < 2g-1, HF+ modules for p = ±(2g-1)."""
    if knot.is_trivial:
        raise TrivialKnotError("graded_slope_eliminator")
    span = 2 * knot.genus - 1
    if not (1 < abs(p) <= span and span % p == 0):
        raise UnsupportedSlopeError(p, f"graded tests need p | {span} and 1 < |p| <= {span}")

    orders = candidate_orders(p)
    if p == span:
        table = hf_plus(knot, p, Engine.DIRECT)
        summands = [periodicity_test(table, r) for r in orders]
        reason = "HF+ is periodic for every r"
    elif p == -span:
        table = hf_plus(knot, p, Engine.DIRECT)
        summands = []
        for r in orders:
            witness = compare_classes(table, 0, r)
            verdict = Verdict.CONSISTENT if witness is None else Verdict.OBSTRUCTED
            summands.append(SummandVerdict(r=r, verdict=verdict, witness=witness))
        reason = "HF+ of [0] matches [r] for some r"
    else:
        table = check_hf(knot, p, Engine.DIRECT)
        summands = [_check_level_verdict(table, p, r) for r in orders]
        reason = "ȞF levels match for some r"

    return _combine(
        "graded", p, summands,
        obstructed="relatively graded Floer data differs between [0] and [±r] for every r",
        open_=reason,
    )


def genus_one_check(a0_dim: int) -> SlopeVerdict:
    """A reducible surgery on a genus-one knot needs dim Â_0 = 1."""
    if a0_dim < 1:
        raise InvalidRequestError("dim Â_0 must be at least 1", details={"a0_dim": a0_dim})
    if a0_dim > 1:
        return SlopeVerdict(
            test="genus_one",
            verdict=Verdict.OBSTRUCTED,
            reason=f"dim Â_0 = {a0_dim}, but a reducible surgery forces Â_0 ≅ F",
            witness=PeriodicityWitness(
                first=0, flavor=TableFlavor.HAT, left=f"dim Â_0 = {a0_dim}", right="dim Â_0 = 1"
            ),
        )
    return SlopeVerdict(
        test="genus_one",
        verdict=Verdict.INCONCLUSIVE,
        reason="dim Â_0 = 1 is compatible with a reducible surgery",
    )


def _staircase_verdicts(knot: StaircaseKnot, p: int) -> List[SlopeVerdict]:
    steps = [divisibility_obstruction(knot, p)]
    if steps[0].verdict == Verdict.INCONCLUSIVE:
        steps.append(graded_slope_eliminator(knot, p))
    return steps


def two_slopes_check(dims: Tuple[int, int, int], rank_theta: int) -> SlopeVerdict:
    """Whether a genus-two knot can have reducible 2- and 3-surgeries.

    3-surgery periodicity forces equal dims and the 2-surgery exact triangle
    gives dim Â_{-1} + dim Â_1 + 1 - 2θ = dim Â_0 and dim Â_0 + 1 = 2θ. If
    both hold, 3-surgery is an L-space, so the knot is a genus-two L-space
    knot and every such knot is obstructed at p = 2.
    """
    if rank_theta not in (0, 1):
        raise InvalidRequestError("rank θ must be 0 or 1", details={"rank_theta": rank_theta})
    minus, zero, plus = dims
    exact = minus + plus + 1 - 2 * rank_theta
    failures = []
    if not minus == zero == plus:
        failures.append(f"dims {dims} are not equal")
    if exact != zero:
        failures.append(f"{minus} + {plus} + 1 - 2·{rank_theta} = {exact} != {zero}")
    if zero + 1 != 2 * rank_theta:
        failures.append(f"{zero} + 1 != 2·{rank_theta}")
    if failures:
        return SlopeVerdict(
            test="two_slopes",
            verdict=Verdict.OBSTRUCTED,
            reason="no two-reducible-slope scenario: " + "; ".join(failures),
            witness=PeriodicityWitness(flavor=TableFlavor.HAT, left=failures[0], right="constraint"),
        )

    survivors = []
    for polynomial in admissible_polynomials(2):
        steps = _staircase_verdicts(staircase_from_alexander(polynomial), 2)
        if steps[-1].verdict != Verdict.OBSTRUCTED:
            survivors.append(str(polynomial))
    if survivors:
        return SlopeVerdict(
            test="two_slopes",
            verdict=Verdict.INCONCLUSIVE,
            reason=f"2-surgery not obstructed for {', '.join(survivors)}",
        )
    return SlopeVerdict(
        test="two_slopes",
        verdict=Verdict.OBSTRUCTED,
        reason="dim Â_0 = 1 makes 3-surgery an L-space, and 2-surgery is then obstructed for every genus-two L-space knot",
        witness=PeriodicityWitness(
            flavor=TableFlavor.HAT, left="3-surgery is an L-space", right="2-surgery reducible"
        ),
    )


def _report(resolved: ResolvedKnot, p: int, steps: List[SlopeVerdict], verdict: Verdict, reason: str) -> ObstructionReport:
    last = steps[-1] if steps else None
    report = ObstructionReport(
        knot=resolved.label,
        p=p,
        genus=resolved.genus,
        candidate_orders=candidate_orders(p),
        verdict=verdict,
        reason=reason,
        stage=last.test if last else "range",
        summands=last.summands if last else [],
        witness=last.witness if last and verdict == Verdict.OBSTRUCTED else None,
        steps=steps,
    )
    surgery_logger.report_ready(knot=report.knot, p=p, verdict=verdict.value, stage=report.stage)
    return report


def full_report(resolved: ResolvedKnot, p: int) -> ObstructionReport:
    """Run the decision tree: genus-one check on model complexes, range gate, divisibility, graded tests."""
    if p == 0:
        raise UnsupportedSlopeError(p, "the surgery slope must be non-zero")
    if resolved.genus == 0:
        raise TrivialKnotError("full_report")

    # staircases go through the range gate; the genus-one check covers other model complexes
    complex_ = resolved.complex
    if resolved.genus == 1 and resolved.staircase is None and complex_ is not None:
        step = genus_one_check(hat_a_dimension(complex_, 0))
        return _report(resolved, p, [step], step.verdict, step.reason)

    span = 2 * resolved.genus - 1
    if not 1 < abs(p) <= span:
        return _report(resolved, p, [], Verdict.OUT_OF_RANGE, "slope outside obstruction range")

    if resolved.staircase is not None:
        steps = _staircase_verdicts(resolved.staircase, p)
        return _report(resolved, p, steps, steps[-1].verdict, steps[-1].reason)

    if complex_ is not None:
        table = chain_hat_dims(complex_, p)
        summands = [periodicity_test(table, r) for r in candidate_orders(p)]
        step = _combine(
            "hat_periodicity", p, summands,
            obstructed="hat dimensions are not periodic for any r",
            open_="hat dimensions are periodic for some r",
            open_verdict=Verdict.CONSISTENT,
        )
        return _report(resolved, p, [step], step.verdict, step.reason)

    reason = resolved.inadmissible_reason or "no model complex available"
    return _report(resolved, p, [], Verdict.INCONCLUSIVE, f"Alexander polynomial is not an L-space knot candidate: {reason}")
