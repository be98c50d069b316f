from fractions import Fraction

import pytest
from hypothesis import given, settings

from app.core.exceptions import InadmissiblePolynomialError, InvalidRequestError
from app.services.cone import d_invariant_large
from app.services.knotio import parse_alexander, torus_knot_alexander
from app.services.staircase import (
    admissibility_problem,
    admissible_polynomials,
    compositions,
    gaps_to_alexander,
    genus_from_nu,
    hat_a_dimension,
    is_admissible,
    knot_genus,
    nu,
    nu_from_complex,
    staircase_from_alexander,
    torsion_coefficients,
)

from tests.strategies import half_gaps, staircase_of


class TestAdmissibility:
    def test_torus_knots_are_admissible(self):
        for a, b in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5)]:
            assert is_admissible(torus_knot_alexander(a, b))

    def test_figure_eight_is_not(self):
        assert "±1" in admissibility_problem(parse_alexander("-t + 3 - t^-1"))

    def test_signs_must_alternate(self):
        problem = admissibility_problem(parse_alexander("t^2 - t + 1 - t^-1 + t^-2"))
        assert problem == ""
        clashing = parse_alexander("t^4 - t^3 - t^2 + t + 1 + t^-1 - t^-2 - t^-3 + t^-4")
        assert "alternate" in admissibility_problem(clashing)

    def test_inadmissible_input_raises(self):
        with pytest.raises(InadmissiblePolynomialError):
            staircase_from_alexander(parse_alexander("-t + 3 - t^-1"))

    def test_gaps_round_trip(self):
        assert gaps_to_alexander((1, 1)) == parse_alexander("t - 1 + t^-1")
        assert gaps_to_alexander((2, 2)) == parse_alexander("t^2 - 1 + t^-2")

    @pytest.mark.parametrize("gaps", [(1, 2), (1,), (0, 0), (2, 1, 1)])
    def test_bad_gaps(self, gaps):
        with pytest.raises(InvalidRequestError):
            gaps_to_alexander(gaps)

    def test_enumeration(self):
        assert list(compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]
        polynomials = admissible_polynomials(2)
        assert polynomials == [parse_alexander("t^2 - t + 1 - t^-1 + t^-2"), parse_alexander("t^2 - 1 + t^-2")]
        assert len(admissible_polynomials(4)) == 8

    def test_enumeration_needs_positive_genus(self):
        with pytest.raises(InvalidRequestError):
            admissible_polynomials(0)


class TestVSequences:
    def test_t211(self, t211):
        assert [t211.V(s) for s in range(6)] == [3, 2, 2, 1, 1, 0]

    def test_t25(self, t25):
        assert (t25.V(-1), t25.V(0), t25.V(1), t25.V(2)) == (2, 1, 1, 0)
        assert t25.H(1) == 2

    def test_outside_the_window(self, t25):
        assert t25.V(7) == 0
        assert t25.V(-7) == 7

    def test_trivial(self, unknot):
        assert unknot.is_trivial
        assert unknot.V(0) == 0

    def test_torsion_coefficients(self, t25):
        assert torsion_coefficients(t25.alexander) == {0: 1, 1: 1, 2: 0}


class TestGeneralComplexes:
    def test_figure_eight(self, fig8):
        assert hat_a_dimension(fig8, 0) == 3
        assert nu_from_complex(fig8) == 0
        assert knot_genus(fig8) == 1
        assert genus_from_nu(fig8) == 1

    def test_trefoil(self, trefoil):
        assert hat_a_dimension(trefoil.complex, 0) == 1
        assert nu(trefoil) == 1

    def test_t25_nu(self, t25):
        assert nu(t25) == 2
        assert knot_genus(t25.complex) == 2


class TestDInvariants:
    def test_trefoil(self, trefoil):
        assert d_invariant_large(trefoil, 1, 0) == Fraction(-2)

    def test_t25(self, t25):
        assert d_invariant_large(t25, 3, 0) == Fraction(-3, 2)
        assert d_invariant_large(t25, 3, 1) == Fraction(-13, 6)
        assert d_invariant_large(t25, 3, -1) == Fraction(-13, 6)


@settings(max_examples=200, deadline=None)
@given(half_gaps)
def test_staircase_v_sequence_properties(half):
    knot = staircase_of(half)
    g = knot.genus
    coefficients = torsion_coefficients(knot.alexander)
    for s in range(-g, g + 1):
        assert knot.V(s) - knot.V(s + 1) in (0, 1)
        assert knot.H(s + 1) - knot.H(s) in (0, 1)
        assert knot.V(-s) == knot.V(s) + s
    for s in range(0, g + 1):
        assert knot.V(s) == coefficients[s]


@settings(max_examples=50, deadline=None)
@given(half_gaps)
def test_d_invariants_are_symmetric(half):
    knot = staircase_of(half)
    n = 2 * knot.genus + 1
    for s in range(1, (n - 1) // 2 + 1):
        assert d_invariant_large(knot, n, s) == d_invariant_large(knot, n, -s)
