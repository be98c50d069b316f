"""
End-to-end agreement sweeps over the torus knot families.
"""

import pytest

from app.models.cone_models import Engine
from app.models.report_models import Verdict
from app.services.cone import closed_form_available, closed_form_hat_dims, hat_dims, hf_plus
from app.services.obstruct import full_report

from tests.strategies import torus


TWO_STRAND = [(2, q) for q in range(3, 32, 2)]
OTHER_TORUS = [(3, 4), (3, 5), (4, 5)]
SWEEP = [(2, q) for q in range(3, 16, 2)] + [(3, 4), (3, 5)]


def in_range_slopes(genus):
    span = 2 * genus - 1
    return [p for p in range(-span, span + 1) if 1 < abs(p)]


@pytest.mark.parametrize("a,b", TWO_STRAND + OTHER_TORUS)
def test_hat_closed_form_matches_node_count(a, b):
    knot = torus(a, b)
    for p in in_range_slopes(knot.genus):
        assert closed_form_hat_dims(knot, p).totals() == hat_dims(knot, p).totals(), p


@pytest.mark.parametrize("a,b", TWO_STRAND + OTHER_TORUS)
def test_plus_closed_form_matches_tower_engine(a, b):
    knot = torus(a, b)
    for p in in_range_slopes(knot.genus):
        if not closed_form_available(knot, p):
            continue
        closed = hf_plus(knot, p, Engine.CLOSED)
        direct = hf_plus(knot, p, Engine.DIRECT)
        for residue in range(abs(p)):
            left = closed.get(residue).module.relative_invariant()
            right = direct.get(residue).module.relative_invariant()
            assert left == right, (p, residue)


@pytest.mark.parametrize("a,b", SWEEP)
def test_only_the_largest_slope_survives(service, a, b):
    resolved = service.resolve_knot(f"torus:{a},{b}")
    span = 2 * resolved.genus - 1
    survivors = []
    for p in in_range_slopes(resolved.genus):
        report = full_report(resolved, p)
        if report.verdict != Verdict.OBSTRUCTED:
            survivors.append(p)
    expected = [span] if span > 1 else []
    assert survivors == expected
