import pytest

from app.core.exceptions import (
    InvalidRequestError,
    InvalidSummandOrderError,
    SlopeOutOfRangeError,
    TrivialKnotError,
    UnsupportedSlopeError,
)
from app.models.cone_models import Engine, TableFlavor
from app.models.report_models import CAVEAT, Verdict
from app.services.cone import check_hf, closed_form_hat_dims, hat_dims
from app.services.obstruct import (
    candidate_orders,
    compare_classes,
    divisibility_obstruction,
    genus_one_check,
    graded_slope_eliminator,
    periodicity_test,
    two_slopes_check,
)

from tests.strategies import torus


def own_level_dim(entry, p):
    """dim ȞF of one class at gr_bot (p > 0) or gr_top - 2|p| (p < 0)."""
    if entry.gr_bot is None:
        return 0
    level = entry.gr_bot if p > 0 else entry.gr_top - 2 * abs(p)
    return entry.check.dim(level)


class TestPeriodicity:
    def test_candidate_orders(self):
        assert candidate_orders(9) == [1, 3]
        assert candidate_orders(-6) == [1, 2, 3]
        assert candidate_orders(2) == [1]
        assert candidate_orders(7) == [1]

    def test_non_periodic_table(self, t25):
        verdict = periodicity_test(hat_dims(t25, 2), 1)
        assert verdict.verdict == Verdict.OBSTRUCTED
        assert (verdict.witness.first, verdict.witness.second) == (0, 1)
        assert verdict.witness.flavor == TableFlavor.HAT

    def test_constant_table(self, t25):
        assert periodicity_test(hat_dims(t25, -3), 1).verdict == Verdict.CONSISTENT

    @pytest.mark.parametrize("r", [0, 2, 4, -1])
    def test_invalid_order(self, t25, r):
        with pytest.raises(InvalidSummandOrderError):
            periodicity_test(hat_dims(t25, 2), r)

    def test_compare_wraps_residues(self, t25):
        table = hat_dims(t25, 2)
        assert compare_classes(table, 1, 3) is None
        witness = compare_classes(table, 0, -1)
        assert witness.second == 1
        assert witness.describe() == "[0] vs [1]: dim ĤF = 1 != dim ĤF = 3"


class TestDivisibility:
    @pytest.mark.parametrize("p", [2, -2])
    def test_t25(self, t25, p):
        verdict = divisibility_obstruction(t25, p)
        assert verdict.verdict == Verdict.OBSTRUCTED
        assert verdict.witness is not None

    def test_t34(self):
        verdict = divisibility_obstruction(torus(3, 4), 4)
        assert verdict.verdict == Verdict.OBSTRUCTED
        assert closed_form_hat_dims(torus(3, 4), 4).totals() == {0: 1, 1: 1, 2: 3, 3: 1}

    def test_dividing_slope_is_passed_on(self, t211):
        assert divisibility_obstruction(t211, 3).verdict == Verdict.INCONCLUSIVE

    def test_range(self, t25):
        with pytest.raises(SlopeOutOfRangeError):
            divisibility_obstruction(t25, 7)

    def test_trivial(self, unknot):
        with pytest.raises(TrivialKnotError):
            divisibility_obstruction(unknot, 3)


class TestGradedEliminator:
    def test_check_levels_positive(self, t211):
        verdict = graded_slope_eliminator(t211, 3)
        assert verdict.verdict == Verdict.OBSTRUCTED
        witness = verdict.summands[0].witness
        assert (witness.grading, witness.second_grading) == (4, 2)
        assert (witness.first, witness.second) == (0, 2)
        assert witness.describe() == "[0] vs [2]: dim ȞF = 2 at grading 4 != dim ȞF = 1 at grading 2"
        assert (witness.left, witness.right) == ("dim ȞF = 2", "dim ȞF = 1")

    def test_check_levels_negative(self, t211):
        assert graded_slope_eliminator(t211, -3).verdict == Verdict.OBSTRUCTED

    @pytest.mark.parametrize("q", [11, 17, 23, 27, 29])
    def test_witnesses_match_tower_engine_tables(self, q):
        knot = torus(2, q)
        span = q - 2
        for magnitude in [m for m in range(2, span) if span % m == 0]:
            for p in (magnitude, -magnitude):
                table = check_hf(knot, p, Engine.DIRECT)
                for summand in graded_slope_eliminator(knot, p).summands:
                    partner = (-summand.r if p > 0 else summand.r) % magnitude
                    left = own_level_dim(table.get(0), p)
                    right = own_level_dim(table.get(partner), p)
                    if summand.verdict == Verdict.CONSISTENT:
                        assert left == right
                        continue
                    witness = summand.witness
                    assert (witness.first, witness.second) == (0, partner)
                    assert witness.left == f"dim ȞF = {left}"
                    assert witness.right == f"dim ȞF = {right}"
                    assert left != right
                    if witness.grading is not None:
                        assert table.get(0).check.dim(witness.grading) == left
                    if witness.second_grading is not None:
                        assert table.get(partner).check.dim(witness.second_grading) == right

    def test_largest_positive_slope_survives(self, t211):
        verdict = graded_slope_eliminator(t211, 9)
        assert verdict.verdict == Verdict.NOT_OBSTRUCTED
        assert all(item.verdict == Verdict.CONSISTENT for item in verdict.summands)

    def test_largest_negative_slope(self, t211):
        verdict = graded_slope_eliminator(t211, -9)
        assert verdict.verdict == Verdict.OBSTRUCTED
        assert [item.r for item in verdict.summands] == [1, 3]

    def test_needs_dividing_slope(self, t25):
        with pytest.raises(UnsupportedSlopeError):
            graded_slope_eliminator(t25, 2)


class TestGenusOne:
    @pytest.mark.parametrize("dim", [3, 5])
    def test_obstructed(self, dim):
        verdict = genus_one_check(dim)
        assert verdict.verdict == Verdict.OBSTRUCTED
        assert verdict.witness.left == f"dim Â_0 = {dim}"

    def test_one_dimensional(self):
        assert genus_one_check(1).verdict == Verdict.INCONCLUSIVE

    def test_invalid(self):
        with pytest.raises(InvalidRequestError):
            genus_one_check(0)


class TestTwoSlopes:
    def test_constraints_fail(self):
        verdict = two_slopes_check((3, 3, 3), 1)
        assert verdict.verdict == Verdict.OBSTRUCTED
        assert "5 != 3" in verdict.reason

    def test_unequal_dims(self):
        verdict = two_slopes_check((1, 3, 1), 1)
        assert verdict.verdict == Verdict.OBSTRUCTED
        assert "not equal" in verdict.reason

    def test_l_space_scenario_is_enumerated(self):
        verdict = two_slopes_check((1, 1, 1), 1)
        assert verdict.verdict == Verdict.OBSTRUCTED
        assert "L-space" in verdict.reason

    def test_rank_theta(self):
        with pytest.raises(InvalidRequestError):
            two_slopes_check((1, 1, 1), 2)


class TestFullReport:
    @pytest.mark.parametrize("p,verdict", [
        (3, Verdict.OBSTRUCTED),
        (-3, Verdict.OBSTRUCTED),
        (9, Verdict.NOT_OBSTRUCTED),
        (-9, Verdict.OBSTRUCTED),
        (4, Verdict.OBSTRUCTED),
    ])
    def test_t211(self, service, p, verdict):
        report = service.obstruct("torus:2,11", p)
        assert report.verdict == verdict
        assert report.knot == "T(2,11)"
        assert report.genus == 5
        assert report.caveat == CAVEAT

    def test_stage_and_steps(self, service):
        report = service.obstruct("torus:2,11", 3)
        assert report.stage == "graded"
        assert [step.test for step in report.steps] == ["divisibility", "graded"]
        assert report.witness is not None

    def test_out_of_range(self, service):
        report = service.obstruct("torus:2,5", 7)
        assert report.verdict == Verdict.OUT_OF_RANGE
        assert report.reason == "slope outside obstruction range"
        assert report.stage == "range"

    def test_genus_one_complex(self, service):
        report = service.obstruct("cfk:fig8.json", 5)
        assert report.verdict == Verdict.OBSTRUCTED
        assert report.stage == "genus_one"

    @pytest.mark.parametrize("p", [5, 7, -7])
    def test_trefoil_is_out_of_range(self, service, p):
        report = service.obstruct("torus:2,3", p)
        assert report.verdict == Verdict.OUT_OF_RANGE
        assert report.stage == "range"
        assert report.steps == []

    def test_trefoil_complex_runs_genus_one(self, service):
        report = service.obstruct("cfk:trefoil.json", 7)
        assert report.verdict == Verdict.INCONCLUSIVE
        assert report.stage == "genus_one"

    def test_complex_periodicity(self, service):
        report = service.obstruct("cfk:t25.json", 2)
        assert report.verdict == Verdict.OBSTRUCTED
        assert report.stage == "hat_periodicity"

    def test_inadmissible(self, service):
        report = service.obstruct('alex:"t^2 - 2*t + 3 - 2*t^-1 + t^-2"', 2)
        assert report.verdict == Verdict.INCONCLUSIVE
        assert "not an L-space knot candidate" in report.reason

    def test_slope_zero(self, service):
        with pytest.raises(UnsupportedSlopeError):
            service.obstruct("torus:2,5", 0)

    def test_unknot(self, service):
        with pytest.raises(TrivialKnotError):
            service.obstruct('alex:"1"', 3)
