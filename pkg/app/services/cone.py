"""
Truncated mapping cones for integer surgery.
Hat, plus and check tables per Spin^c class, z-gradings and d-invariants of large surgeries.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from app.core.exceptions import (
    EngineDisagreementError,
    GradingInconsistencyError,
    InvalidRequestError,
    SlopeOutOfRangeError,
    TrivialKnotError,
    UnsupportedFlavorError,
    UnsupportedSlopeError,
)
from app.core.logging import surgery_logger
from app.models.algebra_models import (
    ChainComplexF2,
    F2Matrix,
    GradedModule,
    GradedVectorSpace,
    MonomialEntry,
    MonomialTowerMap,
    TorsionSummand,
    TowerNode,
)
from app.models.cone_models import (
    ConeDiagram,
    ConeEdge,
    ConeNode,
    EdgeKind,
    Engine,
    NodeKind,
    SpincClass,
    SpincTable,
    TableFlavor,
    ZElements,
    ZTriple,
)
from app.models.knot_models import BifilteredComplex, StaircaseKnot
from app.services.algebra import complex_homology, tower_cone_homology
from app.services.staircase import (
    hat_a_complex,
    hat_b_complex,
    hat_h_pairs,
    hat_v_pairs,
    knot_genus,
)


Knot = Union[StaircaseKnot, BifilteredComplex]


def _label(knot: Knot) -> str:
    if isinstance(knot, StaircaseKnot):
        return f"staircase{list(knot.gaps)}"
    return f"complex[{len(knot.generators)}]"


def _require_slope(p: int) -> None:
    if p == 0:
        raise UnsupportedSlopeError(p, "the surgery slope must be non-zero")


def _require_nontrivial(knot: StaircaseKnot, operation: str) -> None:
    if knot.is_trivial:
        raise TrivialKnotError(operation)


def truncation_genus(knot: Knot) -> int:
    """Genus used to truncate the cone; general complexes use at least 1."""
    if isinstance(knot, StaircaseKnot):
        return knot.genus
    return max(knot_genus(knot), 1)


def node_ranges(genus: int, p: int) -> Tuple[List[int], List[int], int]:
    """A indices 1-g..max(g-1, p-g), B indices 1-g+p..g-1 and t0 = 1-g+max(0, p)."""
    a_indices = list(range(1 - genus, max(genus - 1, p - genus) + 1))
    b_indices = list(range(1 - genus + p, genus))
    return a_indices, b_indices, 1 - genus + max(0, p)


def _propagate_offsets(
    a_indices: List[int],
    b_indices: List[int],
    edges: List[ConeEdge],
) -> Dict[Tuple[NodeKind, int], int]:
    """Grading shift of every node so that each edge has degree -1."""
    adjacency: Dict[Tuple[NodeKind, int], List[Tuple[Tuple[NodeKind, int], int]]] = {}
    for kind, indices in ((NodeKind.A, a_indices), (NodeKind.B, b_indices)):
        for t in indices:
            adjacency[(kind, t)] = []
    for edge in edges:
        step = -1 if edge.kind == EdgeKind.V else 2 * edge.source - 1
        a_key, b_key = (NodeKind.A, edge.source), (NodeKind.B, edge.target)
        adjacency[a_key].append((b_key, step))
        adjacency[b_key].append((a_key, -step))

    if b_indices:
        anchor = (NodeKind.B, min(b_indices))
    elif a_indices:
        anchor = (NodeKind.A, min(a_indices))
    else:
        return {}

    offsets = {anchor: 0}
    frontier = [anchor]
    while frontier:
        current = frontier.pop()
        for neighbour, step in adjacency[current]:
            value = offsets[current] + step
            if neighbour in offsets:
                if offsets[neighbour] != value:
                    raise GradingInconsistencyError(
                        "grading offsets disagree around the cone diagram",
                        details={"node": f"{neighbour[0].value}{neighbour[1]}"},
                    )
                continue
            offsets[neighbour] = value
            frontier.append(neighbour)
    return offsets


def _pairs_to_matrix(pairs: List[Tuple[int, int]], source_size: int, target_size: int) -> F2Matrix:
    return F2Matrix(
        rows=target_size,
        cols=source_size,
        entries=frozenset((target, source) for source, target in pairs),
    )


def build_truncated_cone(knot: Knot, p: int, residue: int, flavor: TableFlavor = TableFlavor.HAT) -> ConeDiagram:
    """Truncated mapping cone for slope p and class [residue].

    Staircase nodes are towers with edge exponents V_t and H_t; general
    complexes carry their hat complexes and F2 matrices on the edges.
    """
    _require_slope(p)
    staircase = isinstance(knot, StaircaseKnot)
    if not staircase and flavor != TableFlavor.HAT:
        raise UnsupportedFlavorError(flavor.value, "plus-flavor cones need an L-space staircase")
    if staircase:
        _require_nontrivial(knot, "build_truncated_cone")

    genus = truncation_genus(knot)
    modulus = abs(p)
    residue %= modulus
    all_a, all_b, t0 = node_ranges(genus, p)
    a_indices = [t for t in all_a if t % modulus == residue]
    b_indices = [t for t in all_b if t % modulus == residue]
    b_set = set(b_indices)

    edges: List[ConeEdge] = []
    for t in a_indices:
        if t in b_set:
            edges.append(ConeEdge(kind=EdgeKind.V, source=t, target=t,
                                  exponent=knot.V(t) if staircase else None))
        if t + p in b_set:
            edges.append(ConeEdge(kind=EdgeKind.H, source=t, target=t + p,
                                  exponent=knot.H(t) if staircase else None))
    offsets = _propagate_offsets(a_indices, b_indices, edges)

    nodes: List[ConeNode] = []
    if staircase:
        for t in a_indices:
            offset = offsets[(NodeKind.A, t)]
            nodes.append(ConeNode(kind=NodeKind.A, index=t, offset=offset, bottom=offset - 2 * knot.V(t)))
        for t in b_indices:
            offset = offsets[(NodeKind.B, t)]
            nodes.append(ConeNode(kind=NodeKind.B, index=t, offset=offset, bottom=offset))
    else:
        b_hat, _ = hat_b_complex(knot)
        for t in a_indices:
            a_hat, _ = hat_a_complex(knot, t)
            nodes.append(ConeNode(kind=NodeKind.A, index=t, offset=offsets[(NodeKind.A, t)],
                                  chain=a_hat.shifted(offsets[(NodeKind.A, t)])))
        for t in b_indices:
            nodes.append(ConeNode(kind=NodeKind.B, index=t, offset=offsets[(NodeKind.B, t)],
                                  chain=b_hat.shifted(offsets[(NodeKind.B, t)])))
        size = len(knot.generators)
        edges = [
            edge.model_copy(update={
                "matrix": _pairs_to_matrix(
                    hat_v_pairs(knot, edge.source) if edge.kind == EdgeKind.V else hat_h_pairs(knot, edge.source),
                    size,
                    size,
                )
            })
            for edge in edges
        ]

    diagram = ConeDiagram(
        p=p,
        residue=residue,
        genus=genus,
        flavor=flavor,
        truncation_base=t0,
        a_indices=tuple(a_indices),
        b_indices=tuple(b_indices),
        nodes=tuple(nodes),
        edges=tuple(edges),
    )
    surgery_logger.cone_built(
        knot=_label(knot), p=p, residue=residue, a_nodes=len(a_indices), b_nodes=len(b_indices)
    )
    return diagram


def tower_map_of(diagram: ConeDiagram) -> MonomialTowerMap:
    """The cone differential of a staircase diagram as a monomial tower map."""
    domain = tuple(TowerNode(name=n.name, bottom=n.bottom) for n in diagram.nodes if n.kind == NodeKind.A)
    codomain = tuple(TowerNode(name=n.name, bottom=n.bottom) for n in diagram.nodes if n.kind == NodeKind.B)
    entries = tuple(
        MonomialEntry(source=f"A{edge.source}", target=f"B{edge.target}", exponent=edge.exponent)
        for edge in diagram.edges
    )
    return MonomialTowerMap(domain=domain, codomain=codomain, entries=entries)


def assemble_hat_complex(diagram: ConeDiagram) -> ChainComplexF2:
    """Global F2 complex of a chain-level diagram: node complexes plus edge matrices."""
    start: Dict[Tuple[NodeKind, int], int] = {}
    gradings: List[int] = []
    differential = set()
    for node in diagram.nodes:
        base = len(gradings)
        start[(node.kind, node.index)] = base
        gradings.extend(node.chain.gradings)
        differential.update((base + s, base + t) for s, t in node.chain.differential)
    for edge in diagram.edges:
        source = start[(NodeKind.A, edge.source)]
        target = start[(NodeKind.B, edge.target)]
        differential.update((source + col, target + row) for row, col in edge.matrix.entries)
    return ChainComplexF2(gradings=tuple(gradings), differential=frozenset(differential))


def chain_hat_dims(cx: BifilteredComplex, p: int) -> SpincTable:
    """ĤF per class by Gaussian elimination on the assembled cone of a model complex."""
    _require_slope(p)
    classes = []
    for residue in range(abs(p)):
        diagram = build_truncated_cone(cx, p, residue, TableFlavor.HAT)
        hat = complex_homology(assemble_hat_complex(diagram)).normalized()
        classes.append(SpincClass(residue=residue, total=hat.total, hat=hat))
    return SpincTable(knot=_label(cx), p=p, flavor=TableFlavor.HAT, engine=Engine.DIRECT, classes=classes)


def staircase_hat_class(knot: StaircaseKnot, p: int, residue: int) -> GradedVectorSpace:
    """All hat maps vanish for an L-space knot: one F per node, at the node's tower bottom."""
    diagram = build_truncated_cone(knot, p, residue, TableFlavor.HAT)
    return GradedVectorSpace.from_gradings(node.bottom for node in diagram.nodes).normalized()


def hat_dims(knot: Knot, p: int) -> SpincTable:
    """ĤF(S³_p(K), [s]) for every class."""
    if isinstance(knot, BifilteredComplex):
        return chain_hat_dims(knot, p)
    _require_slope(p)
    classes = []
    for residue in range(abs(p)):
        hat = staircase_hat_class(knot, p, residue)
        classes.append(SpincClass(residue=residue, total=hat.total, hat=hat))
    return SpincTable(knot=_label(knot), p=p, flavor=TableFlavor.HAT, engine=Engine.DIRECT, classes=classes)


def _require_genus_range(knot: StaircaseKnot, p: int) -> None:
    _require_slope(p)
    _require_nontrivial(knot, "closed forms")
    if not 1 < abs(p) <= 2 * knot.genus - 1:
        raise SlopeOutOfRangeError(p, knot.genus)


def closed_form_hat_dims(knot: StaircaseKnot, p: int) -> SpincTable:
    """Per-class ĤF dimensions for 1 < |p| <= 2g-1 from k = (2g-1) mod |p|."""
    _require_genus_range(knot, p)
    g = knot.genus
    modulus = abs(p)
    k = (2 * g - 1) % modulus
    quotient = (2 * g - 1) // modulus
    totals: Dict[int, int] = {}
    for s in range(g - k, g - k + modulus):
        in_band = g - k <= s < g
        if p > 0:
            totals[s % modulus] = 2 * quotient + (1 if in_band else -1)
        else:
            totals[s % modulus] = 2 * quotient + (3 if in_band else 1)
    classes = [SpincClass(residue=r, total=totals[r]) for r in range(modulus)]
    return SpincTable(knot=_label(knot), p=p, flavor=TableFlavor.HAT, engine=Engine.CLOSED, classes=classes)


# z-gradings


def z_step_positive(t: int, p: int) -> int:
    """gr(z_{t+p}) - gr(z_t) for p > 0."""
    if t >= 0:
        return 2 * t
    if t + p <= 0:
        return 2 * (t + p)
    return 0


def z_step_negative(t: int, p: int) -> int:
    """gr(z_{t+p}) - gr(z_t) for p < 0."""
    if t + p >= 0:
        return 2 * t
    if t <= 0:
        return 2 * (t + p)
    return 2 * (2 * t + p)


def z_indices(knot: StaircaseKnot, p: int, residue: int) -> List[int]:
    """A indices of the class with |t| <= g-1, ascending."""
    a_indices, _, _ = node_ranges(knot.genus, p)
    modulus = abs(p)
    return [t for t in a_indices if t % modulus == residue % modulus and abs(t) <= knot.genus - 1]


def z_gradings(knot: StaircaseKnot, p: int) -> ZElements:
    """Relative gradings of x_t, y_t, z_t, anchored at z = 0 for the smallest t of each class."""
    _require_slope(p)
    _require_nontrivial(knot, "z_gradings")
    modulus = abs(p)
    classes: Dict[int, List[ZTriple]] = {}
    for residue in range(modulus):
        triples: List[ZTriple] = []
        z = 0
        for position, t in enumerate(z_indices(knot, p, residue)):
            if position:
                previous = t - modulus
                if p > 0:
                    z += z_step_positive(previous, p)
                else:
                    z -= z_step_negative(t, p)
            y = z + 2
            triples.append(ZTriple(t=t, x=y + 2 * abs(t), y=y, z=z))
        classes[residue] = triples
    return ZElements(p=p, classes=classes)


def diagram_z_gradings(knot: StaircaseKnot, diagram: ConeDiagram) -> Dict[int, int]:
    """z_t = bottom(A_t) + 2(min{V_t, H_t} - 1), re-anchored at the smallest index."""
    values = {
        node.index: node.bottom + 2 * (min(knot.V(node.index), knot.H(node.index)) - 1)
        for node in diagram.nodes
        if node.kind == NodeKind.A and abs(node.index) <= knot.genus - 1
    }
    if not values:
        return {}
    anchor = values[min(values)]
    return {t: z - anchor for t, z in sorted(values.items())}


# Plus flavor


def closed_form_available(knot: StaircaseKnot, p: int) -> bool:
    """Whether the closed forms cover p: p = ±(2g-1) or 1 < |p| < 2g-1 with p | 2g-1."""
    if knot.is_trivial or p == 0:
        return False
    span = 2 * knot.genus - 1
    if p in (span, -span):
        return True
    return 1 < abs(p) < span and span % p == 0


def _closed_form_class(knot: StaircaseKnot, p: int, residue: int, zs: ZElements) -> Tuple[int, List[TorsionSummand]]:
    """Tower bottom and torsion of one class, in the frame where z_{t*} = 0."""
    triples = zs.classes[residue]

    def width(t: int) -> int:
        return min(knot.V(t), knot.H(t))

    # p = 2g-1 leaves one node per class, so only the tower survives
    if p > 0:
        s = residue if residue <= p // 2 else residue - p
        tower = zs.z(s) - 2 * (width(s) - 1)
        torsion = [TorsionSummand(length=width(tr.t), top=tr.z) for tr in triples if tr.t != s]
        return tower, torsion
    # p < 0: the cokernel is a single tower starting at the highest B node of the class
    def a_offset(t: int, z: int) -> int:
        return z + 2 * (knot.V(t) - width(t)) + 2

    first = triples[0]
    b_offsets = [a_offset(first.t, first.z) + 2 * first.t - 1]
    b_offsets.extend(a_offset(tr.t, tr.z) - 1 for tr in triples)
    tower = max(b_offsets)
    torsion = [TorsionSummand(length=width(tr.t), top=tr.z) for tr in triples]
    return tower, torsion


def closed_form_plus(knot: StaircaseKnot, p: int) -> List[GradedModule]:
    """HF+ per class from the closed forms, normalized so each tower bottom is 0."""
    _require_slope(p)
    _require_nontrivial(knot, "closed forms")
    if not closed_form_available(knot, p):
        raise UnsupportedSlopeError(p, f"closed forms need p = ±{2 * knot.genus - 1} or p | {2 * knot.genus - 1}")
    zs = z_gradings(knot, p)
    modules = []
    for residue in range(abs(p)):
        tower, torsion = _closed_form_class(knot, p, residue, zs)
        modules.append(GradedModule(tower_bottom=tower, torsion=tuple(torsion)).normalized())
    return modules


def direct_plus(knot: StaircaseKnot, p: int) -> List[GradedModule]:
    """HF+ per class from the monomial tower engine, normalized so each tower bottom is 0."""
    _require_slope(p)
    modules = []
    for residue in range(abs(p)):
        diagram = build_truncated_cone(knot, p, residue, TableFlavor.PLUS)
        modules.append(tower_cone_homology(tower_map_of(diagram)).normalized())
    return modules


def hat_from_plus(module: GradedModule) -> GradedVectorSpace:
    """ĤF_n = ker(U)_n + coker(U)_{n-1}."""
    return module.ker_u() + module.coker_u().shifted(1)


def _plus_class(residue: int, module: GradedModule) -> SpincClass:
    check = module.coker_u()
    hat = hat_from_plus(module)
    return SpincClass(
        residue=residue,
        total=hat.total,
        hat=hat,
        module=module,
        check=check,
        gr_bot=check.min_grading,
        gr_top=check.max_grading,
    )


def hf_plus(knot: StaircaseKnot, p: int, engine: Engine = Engine.DIRECT, label: Optional[str] = None) -> SpincTable:
    """HF+(S³_p(K), [s]) for every class by the closed forms, the tower engine, or both."""
    if not isinstance(knot, StaircaseKnot):
        raise UnsupportedFlavorError(TableFlavor.PLUS.value, "plus flavor needs an L-space staircase")
    _require_slope(p)
    _require_nontrivial(knot, "hf_plus")
    name = label or _label(knot)

    if engine == Engine.CLOSED:
        modules = closed_form_plus(knot, p)
    else:
        modules = direct_plus(knot, p)
        if engine == Engine.BOTH and closed_form_available(knot, p):
            closed = closed_form_plus(knot, p)
            for residue, (left, right) in enumerate(zip(closed, modules)):
                if left.relative_invariant() != right.relative_invariant():
                    surgery_logger.engines_disagree(
                        knot=name, p=p, residue=residue, left=left.describe(), right=right.describe()
                    )
                    raise EngineDisagreementError(name, p, residue, left.describe(), right.describe())
        elif engine == Engine.BOTH:
            engine = Engine.DIRECT

    classes = [_plus_class(residue, module) for residue, module in enumerate(modules)]
    return SpincTable(knot=name, p=p, flavor=TableFlavor.PLUS, engine=engine, classes=classes)


def counting_available(knot: StaircaseKnot, p: int) -> bool:
    """Whether the z-counting formulas for ȞF apply: 1 < |p| < 2g-1 and p | 2g-1."""
    if knot.is_trivial:
        return False
    span = 2 * knot.genus - 1
    return 1 < abs(p) < span and span % p == 0


def check_hf(knot: StaircaseKnot, p: int, engine: Engine = Engine.CLOSED) -> SpincTable:
    """Graded ȞF = coker U per class, with gr_bot and gr_top.

    The closed path counts z_t (p/2 < |t| <= g-1 for p > 0, every t for p < 0);
    the direct path reads the torsion tops of the tower engine.
    """
    _require_slope(p)
    _require_nontrivial(knot, "check_hf")
    if engine == Engine.DIRECT:
        modules = direct_plus(knot, p)
        classes = [_plus_class(residue, module) for residue, module in enumerate(modules)]
        for entry in classes:
            entry.total = entry.check.total
        return SpincTable(knot=_label(knot), p=p, flavor=TableFlavor.CHECK, engine=Engine.DIRECT, classes=classes)

    if not counting_available(knot, p):
        raise UnsupportedSlopeError(
            p, f"counting formulas need 1 < |p| < {2 * knot.genus - 1} with p | {2 * knot.genus - 1}"
        )
    zs = z_gradings(knot, p)
    classes = []
    for residue in range(abs(p)):
        tower, _ = _closed_form_class(knot, p, residue, zs)
        counted = [
            triple.z for triple in zs.classes[residue]
            if p < 0 or 2 * abs(triple.t) > p
        ]
        check = GradedVectorSpace.from_gradings(z - tower for z in counted)
        classes.append(SpincClass(
            residue=residue,
            total=check.total,
            check=check,
            gr_bot=check.min_grading,
            gr_top=check.max_grading,
        ))
    return SpincTable(knot=_label(knot), p=p, flavor=TableFlavor.CHECK, engine=Engine.CLOSED, classes=classes)


# d-invariants


def d_invariant_large(knot: StaircaseKnot, n: int, s: int) -> Fraction:
    """d(S³_N(K), [s]) = -2V_s - s + (4s² + N² - N)/4N for N >= 2g-1 and |s| <= (N-1)/2."""
    if n < max(1, 2 * knot.genus - 1):
        raise UnsupportedSlopeError(n, f"large-surgery formula needs N >= {max(1, 2 * knot.genus - 1)}")
    if 2 * abs(s) > n - 1:
        raise InvalidRequestError(
            f"class s = {s} outside |s| <= (N-1)/2 for N = {n}",
            details={"n": n, "s": s},
        )
    return Fraction(-2 * knot.V(s) - s) + Fraction(4 * s * s + n * n - n, 4 * n)


def d_table(knot: StaircaseKnot, n: int) -> Dict[int, Fraction]:
    """d-invariants of N-surgery for every s with |s| <= (N-1)/2."""
    half = (n - 1) // 2 if n >= 1 else 0
    return {s: d_invariant_large(knot, n, s) for s in range(-half, half + 1)}


# Rendering


def render_diagram(diagram: ConeDiagram) -> str:
    """One-line zig-zag rendering of the node path, e.g. A-3 --h^1--> B0 <--v^3-- A0."""
    header = f"p = {diagram.p}, class [{diagram.residue}], t0 = {diagram.truncation_base}"
    if not diagram.nodes:
        return header + "\n(empty)"

    by_key = {(node.kind, node.index): node for node in diagram.nodes}
    incident: Dict[Tuple[NodeKind, int], List[Tuple[Tuple[NodeKind, int], ConeEdge]]] = {key: [] for key in by_key}
    for edge in diagram.edges:
        a_key, b_key = (NodeKind.A, edge.source), (NodeKind.B, edge.target)
        incident[a_key].append((b_key, edge))
        incident[b_key].append((a_key, edge))

    ends = sorted(
        (key for key, links in incident.items() if len(links) <= 1),
        key=lambda key: (key[1], key[0].value),
    )
    current = ends[0] if ends else min(by_key, key=lambda key: (key[1], key[0].value))
    text = by_key[current].name
    visited = {current}
    while True:
        step = next(((other, edge) for other, edge in incident[current] if other not in visited), None)
        if step is None:
            break
        other, edge = step
        if current[0] == NodeKind.A:
            text += f" --{edge.label}--> "
        else:
            text += f" <--{edge.label}-- "
        text += by_key[other].name
        visited.add(other)
        current = other
    return f"{header}\n{text}"
