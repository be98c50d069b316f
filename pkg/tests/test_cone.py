import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.exceptions import (
    SlopeOutOfRangeError,
    TrivialKnotError,
    UnsupportedFlavorError,
    UnsupportedSlopeError,
)
from app.models.algebra_models import GradedVectorSpace, TorsionSummand
from app.models.cone_models import Engine, NodeKind, TableFlavor
from app.services.algebra import tower_cone_homology
from app.services.cone import (
    build_truncated_cone,
    chain_hat_dims,
    check_hf,
    closed_form_available,
    closed_form_hat_dims,
    closed_form_plus,
    counting_available,
    d_table,
    diagram_z_gradings,
    hat_dims,
    hat_from_plus,
    hf_plus,
    node_ranges,
    render_diagram,
    tower_map_of,
    z_gradings,
)
from app.services.knotio import load_fixture

from tests.strategies import half_gaps, staircase_of, torus


class TestDiagrams:
    def test_node_ranges(self):
        assert node_ranges(2, 3) == ([-1, 0, 1], [], 2)
        assert node_ranges(2, 5) == ([-1, 0, 1, 2, 3], [], 4)
        a_indices, b_indices, t0 = node_ranges(5, -3)
        assert a_indices == list(range(-4, 5))
        assert b_indices == list(range(-7, 5))
        assert t0 == -4

    def test_small_diagram(self, t25):
        diagram = build_truncated_cone(t25, 2, 1, TableFlavor.PLUS)
        assert diagram.a_indices == (-1, 1)
        assert diagram.b_indices == (1,)
        assert diagram.node(NodeKind.B, 1).offset == 0
        assert diagram.node(NodeKind.A, 1).bottom == -1
        assert diagram.node(NodeKind.A, -1).bottom == -1
        assert render_diagram(diagram).splitlines() == [
            "p = 2, class [1], t0 = 1",
            "A-1 --h^1--> B1 <--v^1-- A1",
        ]

    def test_residue_is_reduced(self, t25):
        assert build_truncated_cone(t25, 2, 3).residue == 1

    def test_tower_map_is_a_path(self, t211):
        diagram = build_truncated_cone(t211, -3, 0, TableFlavor.PLUS)
        tower_map = tower_map_of(diagram)
        assert len(tower_map.entries) == diagram.node_count - 1
        assert tower_cone_homology(tower_map).tower_count == 1

    def test_slope_zero(self, t25):
        with pytest.raises(UnsupportedSlopeError):
            build_truncated_cone(t25, 0, 0)

    def test_trivial_knot(self, unknot):
        with pytest.raises(TrivialKnotError):
            build_truncated_cone(unknot, 3, 0)

    def test_plus_needs_staircase(self, fig8):
        with pytest.raises(UnsupportedFlavorError):
            build_truncated_cone(fig8, 2, 0, TableFlavor.PLUS)


class TestHat:
    def test_t25_positive(self, t25):
        assert hat_dims(t25, 2).totals() == {0: 1, 1: 3}
        assert closed_form_hat_dims(t25, 2).totals() == {0: 1, 1: 3}

    def test_t25_negative(self, t25):
        table = hat_dims(t25, -2)
        assert table.totals() == {0: 3, 1: 5}
        assert closed_form_hat_dims(t25, -2).totals() == {0: 3, 1: 5}
        assert hat_dims(t25, -3).totals() == {0: 3, 1: 3, 2: 3}

    def test_figure_eight(self, fig8):
        assert chain_hat_dims(fig8, 2).get(0).total == 3
        assert chain_hat_dims(fig8, 1).get(0).total == 3

    @pytest.mark.parametrize("p", [-3, -2, 2, 3])
    def test_chain_level_matches_node_count(self, t25, p):
        chain = chain_hat_dims(load_fixture("t25.json"), p)
        nodes = hat_dims(t25, p)
        for residue in range(abs(p)):
            assert chain.get(residue).hat == nodes.get(residue).hat

    @pytest.mark.parametrize("p", [-5, -4, -3, -2, 2, 3, 4, 5])
    def test_chain_level_t27(self, p):
        assert chain_hat_dims(load_fixture("t27.json"), p).totals() == hat_dims(torus(2, 7), p).totals()

    def test_closed_form_range(self, t25, trefoil):
        with pytest.raises(SlopeOutOfRangeError):
            closed_form_hat_dims(t25, 5)
        with pytest.raises(SlopeOutOfRangeError):
            closed_form_hat_dims(trefoil, 2)


class TestPlus:
    def test_t211_positive(self, t211):
        table = hf_plus(t211, 3)
        assert table.get(0).module.relative_invariant() == (1, ((1, 4), (1, 4)))
        assert table.get(1).module.relative_invariant() == (1, ((1, 4), (2, 2)))
        assert table.get(2).module.relative_invariant() == (1, ((1, 4), (2, 2)))

    def test_t211_negative(self, t211):
        table = hf_plus(t211, -3)
        assert table.get(0).check.nonzero() == {-7: 2, -1: 1}
        assert table.get(1).check.nonzero() == {-11: 1, -5: 1, -3: 1}

    def test_t25_negative_three(self, t25):
        table = hf_plus(t25, -3, engine=Engine.BOTH)
        assert table.get(0).module.tower_bottom == 0
        assert table.get(0).module.torsion == (TorsionSummand(length=1, top=-1),)
        assert table.get(1).module.relative_invariant() == (1, ((1, -3),))
        assert table.get(2).module.relative_invariant() == (1, ((1, -3),))

    def test_hat_from_plus_matches_node_count(self, t25):
        module = hf_plus(t25, -3).get(0).module
        assert hat_from_plus(module).normalized() == GradedVectorSpace(dims={0: 1, 1: 2})
        assert hat_dims(t25, -3).get(0).hat == GradedVectorSpace(dims={0: 1, 1: 2})

    def test_both_falls_back_outside_closed_forms(self, t25):
        assert not closed_form_available(t25, 2)
        assert hf_plus(t25, 2, engine=Engine.BOTH).engine == Engine.DIRECT
        with pytest.raises(UnsupportedSlopeError):
            closed_form_plus(t25, 2)

    def test_plus_rejects_complexes(self, fig8):
        with pytest.raises(UnsupportedFlavorError):
            hf_plus(fig8, 2)


class TestCheck:
    def test_t211_positive(self, t211):
        table = check_hf(t211, 3)
        assert table.get(0).gr_bot == 4
        assert table.get(0).check.dim(4) == 2
        assert table.get(1).check.nonzero() == {2: 1, 4: 1}
        assert table.get(2).check.nonzero() == {2: 1, 4: 1}

    def test_t211_negative_closed_forms(self, t211):
        counted = check_hf(t211, -3, Engine.CLOSED)
        assert counted.get(0).check.nonzero() == {-7: 2, -1: 1}
        assert counted.get(1).check.nonzero() == {-11: 1, -5: 1, -3: 1}
        assert counted.get(2).check.nonzero() == {-11: 1, -5: 1, -3: 1}
        closed = hf_plus(t211, -3, Engine.CLOSED)
        direct = hf_plus(t211, -3, Engine.DIRECT)
        for residue in range(3):
            assert closed.get(residue).module.relative_invariant() == direct.get(residue).module.relative_invariant()

    @pytest.mark.parametrize("q", [7, 11, 13, 17, 23, 27, 29])
    def test_negative_closed_forms_match_tower_engine(self, q):
        knot = torus(2, q)
        span = q - 2
        for p in [-m for m in range(2, span + 1) if span % m == 0]:
            closed, direct = hf_plus(knot, p, Engine.CLOSED), hf_plus(knot, p, Engine.DIRECT)
            for residue in range(abs(p)):
                assert closed.get(residue).module.relative_invariant() == direct.get(residue).module.relative_invariant()
            if counting_available(knot, p):
                counted = check_hf(knot, p, Engine.CLOSED)
                for residue in range(abs(p)):
                    assert counted.get(residue).check.nonzero() == direct.get(residue).check.nonzero()

    @pytest.mark.parametrize("p", [3, -3])
    def test_counting_matches_tower_engine(self, t211, p):
        counted = check_hf(t211, p, Engine.CLOSED)
        direct = check_hf(t211, p, Engine.DIRECT)
        for residue in range(abs(p)):
            assert counted.get(residue).check.nonzero() == direct.get(residue).check.nonzero()

    def test_counting_domain(self, t25):
        with pytest.raises(UnsupportedSlopeError):
            check_hf(t25, 2)


class TestZGradings:
    def test_x_minus_y(self, t211):
        for triples in z_gradings(t211, 3).classes.values():
            for triple in triples:
                assert triple.x - triple.y == 2 * abs(triple.t)
                assert triple.y - triple.z == 2

    @pytest.mark.parametrize("p", [2, 3, 4, 9, -2, -3, -4, -9])
    def test_recursion_matches_diagram(self, t211, p):
        zs = z_gradings(t211, p)
        for residue in range(abs(p)):
            diagram = build_truncated_cone(t211, p, residue, TableFlavor.PLUS)
            assert diagram_z_gradings(t211, diagram) == {tr.t: tr.z for tr in zs.classes[residue]}


class TestDTable:
    def test_table_is_symmetric(self, t25):
        table = d_table(t25, 5)
        assert sorted(table) == [-2, -1, 0, 1, 2]
        assert table[1] == table[-1]
        assert table[2] == table[-2]


@settings(max_examples=100, deadline=None)
@given(half_gaps, st.integers(min_value=2, max_value=40), st.booleans())
def test_closed_hat_matches_node_count(half, magnitude, negative):
    knot = staircase_of(half)
    span = 2 * knot.genus - 1
    if magnitude > span:
        return
    p = -magnitude if negative else magnitude
    assert closed_form_hat_dims(knot, p).totals() == hat_dims(knot, p).totals()


@settings(max_examples=200, deadline=None)
@given(half_gaps, st.integers(min_value=2, max_value=12), st.booleans())
def test_z_recursion_on_random_staircases(half, magnitude, negative):
    knot = staircase_of(half)
    if magnitude > 2 * knot.genus - 1:
        return
    p = -magnitude if negative else magnitude
    zs = z_gradings(knot, p)
    for residue in range(magnitude):
        diagram = build_truncated_cone(knot, p, residue, TableFlavor.PLUS)
        assert diagram_z_gradings(knot, diagram) == {tr.t: tr.z for tr in zs.classes[residue]}


@settings(max_examples=50, deadline=None)
@given(half_gaps, st.data())
def test_conjugate_classes_agree(half, data):
    knot = staircase_of(half)
    span = 2 * knot.genus - 1
    if span < 2:
        return
    p = data.draw(st.integers(min_value=2, max_value=span)) * data.draw(st.sampled_from([1, -1]))
    modulus = abs(p)
    direct = check_hf(knot, p, Engine.DIRECT)
    plus = hf_plus(knot, p, Engine.DIRECT)
    closed = hf_plus(knot, p, Engine.CLOSED) if closed_form_available(knot, p) else None
    counted = check_hf(knot, p, Engine.CLOSED) if counting_available(knot, p) else None
    for residue in range(modulus):
        mirror = -residue % modulus
        assert plus.get(residue).module.relative_invariant() == plus.get(mirror).module.relative_invariant()
        assert direct.get(residue).check.nonzero() == direct.get(mirror).check.nonzero()
        if closed is not None:
            assert closed.get(residue).module.relative_invariant() == closed.get(mirror).module.relative_invariant()
        if counted is not None:
            assert counted.get(residue).check.nonzero() == counted.get(mirror).check.nonzero()
