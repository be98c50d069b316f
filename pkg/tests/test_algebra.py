from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.exceptions import CorruptComplexError, CyclicDiagramError, GradingInconsistencyError
from app.models.algebra_models import (
    ChainComplexF2,
    F2Matrix,
    GradedModule,
    MonomialEntry,
    MonomialTowerMap,
    TorsionSummand,
    TowerNode,
)
from app.services.algebra import (
    chain_homology_f2,
    complex_homology,
    f2_rank,
    induced_rank,
    mapping_cone,
    tower_cone_homology,
    truncated_tower_homology,
)


class TestF2Matrices:
    def test_rank_of_identity(self):
        assert f2_rank(F2Matrix.identity(4)) == 4

    def test_rank_is_taken_mod_two(self):
        assert f2_rank(F2Matrix.from_dense([[1, 1], [1, 1]])) == 1
        assert f2_rank(F2Matrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2

    def test_nilpotent_square_is_zero(self):
        shift = F2Matrix.from_dense([[0, 1], [0, 0]])
        assert shift.compose(shift).is_zero

    def test_entry_outside_shape_rejected(self):
        with pytest.raises(ValueError):
            F2Matrix(rows=1, cols=1, entries=frozenset({(1, 0)}))

    @given(st.lists(st.lists(st.integers(0, 1), min_size=3, max_size=3), min_size=1, max_size=5))
    def test_rank_of_transpose(self, rows):
        matrix = F2Matrix.from_dense(rows)
        assert f2_rank(matrix) == f2_rank(matrix.transpose())


class TestChainHomology:
    def test_single_level(self):
        homology = chain_homology_f2(F2Matrix.zero(1, 0), F2Matrix.zero(0, 1), grading=3)
        assert homology.dims == {3: 1}

    def test_nonzero_square_raises(self):
        with pytest.raises(CorruptComplexError) as exc:
            chain_homology_f2(F2Matrix.identity(1), F2Matrix.identity(1), grading=1)
        assert exc.value.details["grading"] == 1

    def test_acyclic_pair(self):
        complex_ = ChainComplexF2(gradings=(1, 0), differential=frozenset({(0, 1)}))
        assert complex_homology(complex_).total == 0

    def test_differential_must_lower_grading(self):
        with pytest.raises(ValueError):
            ChainComplexF2(gradings=(1, 1), differential=frozenset({(0, 1)}))

    def test_cone_of_identity_is_acyclic(self):
        point = ChainComplexF2(gradings=(0,))
        assert complex_homology(mapping_cone(point, point, [(0, 0)])).total == 0
        assert induced_rank(point, point, [(0, 0)]) == 1

    def test_zero_map_has_rank_zero(self):
        point = ChainComplexF2(gradings=(0,))
        assert induced_rank(point, point, []) == 0

    def test_inhomogeneous_map_rejected(self):
        source = ChainComplexF2(gradings=(0,))
        target = ChainComplexF2(gradings=(2,))
        with pytest.raises(GradingInconsistencyError):
            mapping_cone(source, target, [(0, 0)])


SMALL_LEVELS = [
    (a, n, b)
    for a in range(4) for n in range(1, 5) for b in range(4)
    if a + n + b <= 4
]


def bit_matrix(rows, cols, bits):
    entries = frozenset(
        (row, col) for row in range(rows) for col in range(cols)
        if bits >> (row * cols + col) & 1
    )
    return F2Matrix(rows=rows, cols=cols, entries=entries)


def apply(matrix, vector):
    image = [0] * matrix.rows
    for row, col in matrix.entries:
        image[row] ^= vector[col]
    return tuple(image)


class TestChainHomologyExhaustive:
    @pytest.mark.parametrize("a,n,b", SMALL_LEVELS)
    def test_matches_kernel_and_image_counts(self, a, n, b):
        middle = list(product((0, 1), repeat=n))
        for in_bits in range(2 ** (n * a)):
            incoming = bit_matrix(n, a, in_bits)
            image = {apply(incoming, w) for w in product((0, 1), repeat=a)}
            for out_bits in range(2 ** (b * n)):
                outgoing = bit_matrix(b, n, out_bits)
                kernel = {v for v in middle if not any(apply(outgoing, v))}
                if not image <= kernel:
                    with pytest.raises(CorruptComplexError):
                        chain_homology_f2(incoming, outgoing, grading=2)
                    continue
                expected = (len(kernel).bit_length() - 1) - (len(image).bit_length() - 1)
                assert chain_homology_f2(incoming, outgoing, grading=2).dim(2) == expected


def tower_map(nodes, entries):
    """nodes: list of (name, bottom, is_source); entries: (source, target, exponent)."""
    return MonomialTowerMap(
        domain=tuple(TowerNode(name=n, bottom=b) for n, b, src in nodes if src),
        codomain=tuple(TowerNode(name=n, bottom=b) for n, b, src in nodes if not src),
        entries=tuple(MonomialEntry(source=s, target=t, exponent=e) for s, t, e in entries),
    )


class TestTowerCone:
    def test_lonely_tower(self):
        module = tower_cone_homology(tower_map([("A0", 4, True)], []))
        assert module == GradedModule(tower_bottom=4)

    def test_isomorphism_cancels_both_towers(self):
        module = tower_cone_homology(tower_map([("A0", 0, True), ("B0", -1, False)], [("A0", "B0", 0)]))
        assert module.tower_bottom is None
        assert module.torsion == ()

    def test_power_of_u_leaves_its_kernel(self):
        module = tower_cone_homology(tower_map([("A0", 0, True), ("B0", 3, False)], [("A0", "B0", 2)]))
        assert module.tower_bottom is None
        assert module.torsion == (TorsionSummand(length=2, top=2),)

    def test_zig_zag(self):
        module = tower_cone_homology(tower_map(
            [("A1", -1, True), ("B0", 0, False), ("A2", -5, True)],
            [("A1", "B0", 1), ("A2", "B0", 3)],
        ))
        assert module.tower_bottom == -5
        assert module.torsion == (TorsionSummand(length=1, top=-1),)

    def test_disconnected_graph_rejected(self):
        with pytest.raises(CyclicDiagramError):
            tower_cone_homology(tower_map([("A0", 0, True), ("A1", 2, True), ("B0", -1, False)], []))

    def test_grading_mismatch_rejected(self):
        with pytest.raises(GradingInconsistencyError):
            tower_cone_homology(tower_map([("A0", 0, True), ("B0", 0, False)], [("A0", "B0", 0)]))


@st.composite
def path_cones(draw):
    """Random zig-zag cones: alternating A/B nodes joined by U-power entries."""
    count = draw(st.integers(min_value=1, max_value=9))
    starts_with_source = draw(st.booleans())
    exponents = draw(st.lists(st.integers(0, 6), min_size=count - 1, max_size=count - 1))
    nodes = []
    entries = []
    bottom = draw(st.integers(-10, 10))
    for k in range(count):
        is_source = (k % 2 == 0) == starts_with_source
        name = f"{'A' if is_source else 'B'}{k}"
        if k:
            exponent = exponents[k - 1]
            previous = nodes[-1][0]
            if is_source:
                bottom = bottom - 2 * exponent + 1
                entries.append((name, previous, exponent))
            else:
                bottom = bottom + 2 * exponent - 1
                entries.append((previous, name, exponent))
        nodes.append((name, bottom, is_source))
    return tower_map(nodes, entries)


@settings(max_examples=50, deadline=None)
@given(path_cones())
def test_tower_engine_matches_truncated_oracle(cone):
    module = tower_cone_homology(cone)
    oracle, exact = truncated_tower_homology(cone)
    expected = {g: d for g, d in module.graded_dims(exact).items() if d}
    assert oracle.nonzero() == expected
