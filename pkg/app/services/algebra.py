"""
Exact linear algebra over F2 and homology of monomial tower maps.
"""

from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from app.core.exceptions import (
    CorruptComplexError,
    CyclicDiagramError,
    GradingInconsistencyError,
)
from app.models.algebra_models import (
    ChainComplexF2,
    F2Matrix,
    GradedModule,
    GradedVectorSpace,
    MonomialTowerMap,
    TorsionSummand,
)


def _row_reduce(dense: np.ndarray) -> int:
    """Gauss-Jordan elimination over F2 in place; returns the rank."""
    rows, cols = dense.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivots = np.nonzero(dense[rank:, col])[0]
        if pivots.size == 0:
            continue
        pivot = rank + int(pivots[0])
        if pivot != rank:
            dense[[rank, pivot]] = dense[[pivot, rank]]
        hits = np.nonzero(dense[:, col])[0]
        for row in hits:
            if row != rank:
                dense[row, :] ^= dense[rank, :]
        rank += 1
    return rank


def f2_rank(matrix: F2Matrix) -> int:
    """Rank of a matrix over F2."""
    if matrix.is_zero:
        return 0
    return _row_reduce(matrix.to_dense())


def chain_homology_f2(incoming: F2Matrix, outgoing: F2Matrix, grading: int = 0) -> GradedVectorSpace:
    """Homology at the middle level of C_{n+1} -> C_n -> C_{n-1}.

    `incoming` is d_{n+1} (rows = dim C_n) and `outgoing` is d_n
    (cols = dim C_n). Raises CorruptComplexError when d_n ∘ d_{n+1} != 0.
    """
    if incoming.rows != outgoing.cols:
        raise ValueError(
            f"level dimension mismatch: d_(n+1) lands in dim {incoming.rows}, d_n leaves dim {outgoing.cols}"
        )
    if not outgoing.compose(incoming).is_zero:
        raise CorruptComplexError(grading)
    dimension = outgoing.cols - f2_rank(outgoing) - f2_rank(incoming)
    return GradedVectorSpace(dims={grading: dimension})


def differential_blocks(complex_: ChainComplexF2) -> Tuple[Dict[int, List[int]], Dict[int, F2Matrix]]:
    """Split a complex into its levels and the matrices d_n: C_n -> C_{n-1}."""
    levels = complex_.levels()
    position = {}
    for basis in levels.values():
        for offset, index in enumerate(basis):
            position[index] = offset

    entries: Dict[int, set] = {}
    for source, target in complex_.differential:
        grading = complex_.gradings[source]
        entries.setdefault(grading, set()).add((position[target], position[source]))

    blocks: Dict[int, F2Matrix] = {}
    for grading, basis in levels.items():
        below = levels.get(grading - 1, [])
        blocks[grading] = F2Matrix(
            rows=len(below),
            cols=len(basis),
            entries=frozenset(entries.get(grading, set())),
        )
    return levels, blocks


def complex_homology(complex_: ChainComplexF2) -> GradedVectorSpace:
    """Graded homology of a finite chain complex over F2."""
    levels, blocks = differential_blocks(complex_)
    dims: Dict[int, int] = {}
    for grading, basis in levels.items():
        outgoing = blocks[grading]
        incoming = blocks.get(grading + 1, F2Matrix.zero(len(basis), 0))
        dims[grading] = chain_homology_f2(incoming, outgoing, grading).dim(grading)
    return GradedVectorSpace(dims=dims)


def mapping_cone(
    source: ChainComplexF2,
    target: ChainComplexF2,
    chain_map: Iterable[Tuple[int, int]],
    degree: int = 0,
) -> ChainComplexF2:
    """Mapping cone of a chain map of the given degree.

    `chain_map` lists pairs (source index, target index). Source elements are
    shifted by degree + 1 so the cone differential lowers grading by one.
    """
    shift = degree + 1
    offset = source.size
    pairs = []
    for src, tgt in chain_map:
        if target.gradings[tgt] != source.gradings[src] + degree:
            raise GradingInconsistencyError(
                f"chain map term {src} -> {tgt} is not homogeneous of degree {degree}",
                details={"source": src, "target": tgt, "degree": degree},
            )
        pairs.append((src, offset + tgt))
    differential = set(source.differential)
    differential.update((s + offset, t + offset) for s, t in target.differential)
    differential.update(pairs)
    return ChainComplexF2(
        gradings=tuple(g + shift for g in source.gradings) + target.gradings,
        differential=frozenset(differential),
    )


def induced_rank(
    source: ChainComplexF2,
    target: ChainComplexF2,
    chain_map: Iterable[Tuple[int, int]],
    degree: int = 0,
) -> int:
    """Rank of the map induced on homology, from dim H(A) + dim H(B) - dim H(Cone) = 2 rank."""
    cone = complex_homology(mapping_cone(source, target, chain_map, degree)).total
    total = complex_homology(source).total + complex_homology(target).total - cone
    if total % 2:
        raise GradingInconsistencyError("homology dimensions of a mapping cone have odd defect")
    return total // 2


# Monomial tower maps


def _validate_path(tower_map: MonomialTowerMap) -> Dict[str, int]:
    """Check the node graph is a connected path and the entries are homogeneous."""
    nodes = [node.name for node in tower_map.domain] + [node.name for node in tower_map.codomain]
    bottoms = {node.name: node.bottom for node in tower_map.domain}
    bottoms.update({node.name: node.bottom for node in tower_map.codomain})

    degree = {name: 0 for name in nodes}
    adjacency: Dict[str, List[str]] = {name: [] for name in nodes}
    for entry in tower_map.entries:
        degree[entry.source] += 1
        degree[entry.target] += 1
        adjacency[entry.source].append(entry.target)
        adjacency[entry.target].append(entry.source)
        expected = bottoms[entry.source] + 2 * entry.exponent - 1
        if bottoms[entry.target] != expected:
            raise GradingInconsistencyError(
                f"entry {entry.source} -> {entry.target} with U^{entry.exponent} is not of degree -1",
                details={
                    "source": entry.source,
                    "target": entry.target,
                    "exponent": entry.exponent,
                    "expected_bottom": expected,
                    "actual_bottom": bottoms[entry.target],
                },
            )

    if not nodes:
        return bottoms
    if len(tower_map.entries) != len(nodes) - 1 or max(degree.values()) > 2:
        raise CyclicDiagramError(
            "node graph of the tower map is not a path",
            details={"nodes": len(nodes), "edges": len(tower_map.entries)},
        )
    reached = {nodes[0]}
    frontier = [nodes[0]]
    while frontier:
        current = frontier.pop()
        for neighbour in adjacency[current]:
            if neighbour not in reached:
                reached.add(neighbour)
                frontier.append(neighbour)
    if len(reached) != len(nodes):
        raise CyclicDiagramError(
            "node graph of the tower map is not connected",
            details={"nodes": len(nodes), "reached": len(reached)},
        )
    return bottoms


def tower_cone_homology(tower_map: MonomialTowerMap) -> GradedModule:
    """Homology of the cone of a monomial map between sums of towers.

    Repeatedly pivots on an entry of minimal exponent. Clearing the rest of
    the pivot row and column only touches the two path neighbours, so the
    reduced graph stays a path. Each pivot U^e contributes its kernel
    F[U]/U^e; the last unpaired node is the tower.
    """
    bottoms = _validate_path(tower_map)
    order = {node.name: k for k, node in enumerate(tower_map.domain)}
    order.update({node.name: k for k, node in enumerate(tower_map.codomain)})

    live_sources = {node.name for node in tower_map.domain}
    live_targets = {node.name for node in tower_map.codomain}
    entries: Dict[Tuple[str, str], int] = {
        (entry.source, entry.target): entry.exponent for entry in tower_map.entries
    }
    torsion: List[TorsionSummand] = []

    while entries:
        (source, target), exponent = min(
            entries.items(),
            key=lambda item: (item[1], order[item[0][0]], order[item[0][1]]),
        )
        column = [(t, e) for (s, t), e in entries.items() if s == source and t != target]
        row = [(s, e) for (s, t), e in entries.items() if t == target and s != source]
        for other_target, column_exponent in column:
            for other_source, row_exponent in row:
                key = (other_source, other_target)
                combined = column_exponent + row_exponent - exponent
                if key in entries:
                    if entries[key] != combined:
                        raise GradingInconsistencyError(
                            "reduction produced a non-monomial entry",
                            details={"source": other_source, "target": other_target},
                        )
                    del entries[key]
                else:
                    entries[key] = combined
        for key in [k for k in entries if k[0] == source or k[1] == target]:
            del entries[key]
        live_sources.discard(source)
        live_targets.discard(target)
        if exponent > 0:
            torsion.append(TorsionSummand(length=exponent, top=bottoms[source] + 2 * (exponent - 1)))

    survivors = sorted(live_sources | live_targets, key=lambda name: bottoms[name])
    if len(survivors) > 1:
        raise CyclicDiagramError(
            "more than one tower survives the reduction",
            details={"survivors": survivors},
        )
    tower_bottom: Optional[int] = bottoms[survivors[0]] if survivors else None
    return GradedModule(tower_bottom=tower_bottom, torsion=tuple(torsion))


def truncation_depth(tower_map: MonomialTowerMap) -> int:
    """Tower depth N = 2 * (max exponent) * (node count) + 4 used by the oracle."""
    return 2 * tower_map.max_exponent * tower_map.node_count + 4


def truncated_tower_complex(tower_map: MonomialTowerMap, ceiling: int) -> ChainComplexF2:
    """Finite F2 model keeping every tower element of grading <= ceiling.

    The kept elements form a subcomplex, so its homology is exact in every
    grading up to ceiling - 1.
    """
    index: Dict[Tuple[str, int], int] = {}
    gradings: List[int] = []
    for node in list(tower_map.domain) + list(tower_map.codomain):
        level = 0
        while node.bottom + 2 * level <= ceiling:
            index[(node.name, level)] = len(gradings)
            gradings.append(node.bottom + 2 * level)
            level += 1

    differential = set()
    for entry in tower_map.entries:
        for (name, level), position in index.items():
            if name != entry.source or level < entry.exponent:
                continue
            image = index.get((entry.target, level - entry.exponent))
            if image is not None:
                differential.add((position, image))
    return ChainComplexF2(gradings=tuple(gradings), differential=frozenset(differential))


def truncated_tower_homology(tower_map: MonomialTowerMap, depth: Optional[int] = None) -> Tuple[GradedVectorSpace, int]:
    """Oracle for tower_cone_homology: truncated homology and the last exact grading."""
    depth = depth if depth is not None else truncation_depth(tower_map)
    nodes = list(tower_map.domain) + list(tower_map.codomain)
    floor = min(node.bottom for node in nodes)
    ceiling = floor + 2 * depth
    homology = complex_homology(truncated_tower_complex(tower_map, ceiling))
    exact = ceiling - 1
    return GradedVectorSpace(dims={g: d for g, d in homology.nonzero().items() if g <= exact}), exact
