"""
Data models for F2 linear algebra and graded F[U]-modules.
"""

from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class F2Matrix(BaseModel):
    """Sparse matrix over F2 stored as the set of positions holding a 1.

    Column j is the image of the j-th source basis vector, so a differential
    d: C_n -> C_{n-1} has rows = dim C_{n-1} and cols = dim C_n.
    """
    model_config = ConfigDict(frozen=True)

    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    entries: FrozenSet[Tuple[int, int]] = Field(default_factory=frozenset)

    @model_validator(mode="after")
    def check_positions(self) -> "F2Matrix":
        for row, col in self.entries:
            if not (0 <= row < self.rows and 0 <= col < self.cols):
                raise ValueError(f"entry ({row}, {col}) outside a {self.rows}x{self.cols} matrix")
        return self

    @classmethod
    def zero(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows=rows, cols=cols)

    @classmethod
    def identity(cls, size: int) -> "F2Matrix":
        return cls(rows=size, cols=size, entries=frozenset((k, k) for k in range(size)))

    @classmethod
    def from_dense(cls, dense) -> "F2Matrix":
        array = np.asarray(dense, dtype=np.int64) % 2
        if array.ndim != 2:
            raise ValueError("dense matrix must be two-dimensional")
        rows, cols = array.shape
        positions = frozenset((int(r), int(c)) for r, c in zip(*np.nonzero(array)))
        return cls(rows=rows, cols=cols, entries=positions)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for row, col in self.entries:
            dense[row, col] = 1
        return dense

    def transpose(self) -> "F2Matrix":
        return F2Matrix(
            rows=self.cols,
            cols=self.rows,
            entries=frozenset((col, row) for row, col in self.entries),
        )

    def compose(self, first: "F2Matrix") -> "F2Matrix":
        """Return self ∘ first (apply `first`, then self)."""
        if first.rows != self.cols:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} after {first.rows}x{first.cols}")
        product = (self.to_dense().astype(np.int64) @ first.to_dense().astype(np.int64)) % 2
        return F2Matrix.from_dense(product)

    @property
    def is_zero(self) -> bool:
        return not self.entries


class ChainComplexF2(BaseModel):
    """Finite graded chain complex over F2 with a homological differential.

    Basis element k sits in grading `gradings[k]`; `differential` holds the
    pairs (source, target) with a coefficient 1 in d(source).
    """
    model_config = ConfigDict(frozen=True)

    gradings: Tuple[int, ...] = Field(default_factory=tuple)
    differential: FrozenSet[Tuple[int, int]] = Field(default_factory=frozenset)

    @model_validator(mode="after")
    def check_degree(self) -> "ChainComplexF2":
        size = len(self.gradings)
        for source, target in self.differential:
            if not (0 <= source < size and 0 <= target < size):
                raise ValueError(f"differential term {source} -> {target} references a missing basis element")
            if self.gradings[target] != self.gradings[source] - 1:
                raise ValueError(
                    f"differential term {source} -> {target} does not lower the grading by one"
                )
        return self

    @property
    def size(self) -> int:
        return len(self.gradings)

    def levels(self) -> Dict[int, List[int]]:
        """Basis indices grouped by grading, each group in index order."""
        grouped: Dict[int, List[int]] = {}
        for index, grading in enumerate(self.gradings):
            grouped.setdefault(grading, []).append(index)
        return dict(sorted(grouped.items()))

    def shifted(self, amount: int) -> "ChainComplexF2":
        return ChainComplexF2(
            gradings=tuple(g + amount for g in self.gradings),
            differential=self.differential,
        )


class GradedVectorSpace(BaseModel):
    """Finite-dimensional graded F2 vector space, kept as grading -> dimension."""
    model_config = ConfigDict(frozen=True)

    dims: Dict[int, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_dims(self) -> "GradedVectorSpace":
        for grading, dim in self.dims.items():
            if dim < 0:
                raise ValueError(f"negative dimension {dim} in grading {grading}")
        return self

    @classmethod
    def from_gradings(cls, gradings) -> "GradedVectorSpace":
        dims: Dict[int, int] = {}
        for grading in gradings:
            dims[grading] = dims.get(grading, 0) + 1
        return cls(dims=dict(sorted(dims.items())))

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def dim(self, grading: Optional[int]) -> int:
        if grading is None:
            return 0
        return self.dims.get(grading, 0)

    def nonzero(self) -> Dict[int, int]:
        return {grading: dim for grading, dim in sorted(self.dims.items()) if dim}

    @property
    def min_grading(self) -> Optional[int]:
        support = self.nonzero()
        return min(support) if support else None

    @property
    def max_grading(self) -> Optional[int]:
        support = self.nonzero()
        return max(support) if support else None

    def shifted(self, amount: int) -> "GradedVectorSpace":
        return GradedVectorSpace(dims={g + amount: d for g, d in self.nonzero().items()})

    def normalized(self) -> "GradedVectorSpace":
        """Shift so the lowest non-zero grading is 0."""
        bottom = self.min_grading
        return self.shifted(-bottom) if bottom is not None else GradedVectorSpace()

    def __add__(self, other: "GradedVectorSpace") -> "GradedVectorSpace":
        dims = dict(self.nonzero())
        for grading, dim in other.nonzero().items():
            dims[grading] = dims.get(grading, 0) + dim
        return GradedVectorSpace(dims=dict(sorted(dims.items())))


class TorsionSummand(BaseModel):
    """A cyclic summand F[U]/U^length whose highest element sits in grading `top`."""
    model_config = ConfigDict(frozen=True)

    length: int = Field(ge=1)
    top: int

    @property
    def bottom(self) -> int:
        return self.top - 2 * (self.length - 1)


class GradedModule(BaseModel):
    """At most one tower T+ plus finitely many torsion summands.

    `tower_bottom` is None when no tower survives. Torsion is kept sorted by
    (top, length) so equal modules compare equal.
    """
    model_config = ConfigDict(frozen=True)

    tower_bottom: Optional[int] = None
    torsion: Tuple[TorsionSummand, ...] = Field(default_factory=tuple)

    @field_validator("torsion")
    @classmethod
    def sort_torsion(cls, v: Tuple[TorsionSummand, ...]) -> Tuple[TorsionSummand, ...]:
        return tuple(sorted(v, key=lambda piece: (piece.top, piece.length)))

    @property
    def tower_count(self) -> int:
        return 0 if self.tower_bottom is None else 1

    def coker_u(self) -> GradedVectorSpace:
        """Graded cokernel of U; the tower contributes nothing since U is onto T+."""
        return GradedVectorSpace.from_gradings(piece.top for piece in self.torsion)

    def ker_u(self) -> GradedVectorSpace:
        bottoms = [piece.bottom for piece in self.torsion]
        if self.tower_bottom is not None:
            bottoms.append(self.tower_bottom)
        return GradedVectorSpace.from_gradings(bottoms)

    def shifted(self, amount: int) -> "GradedModule":
        return GradedModule(
            tower_bottom=None if self.tower_bottom is None else self.tower_bottom + amount,
            torsion=tuple(TorsionSummand(length=p.length, top=p.top + amount) for p in self.torsion),
        )

    def normalized(self) -> "GradedModule":
        """Shift so the tower bottom sits in grading 0."""
        if self.tower_bottom is None:
            return self
        return self.shifted(-self.tower_bottom)

    def relative_invariant(self) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
        """Tower count and sorted (length, top - tower_bottom) pairs."""
        anchor = self.tower_bottom if self.tower_bottom is not None else 0
        return (
            self.tower_count,
            tuple(sorted((piece.length, piece.top - anchor) for piece in self.torsion)),
        )

    def graded_dims(self, ceiling: int) -> Dict[int, int]:
        """Dimension of every non-zero grading up to and including `ceiling`."""
        dims: Dict[int, int] = {}
        if self.tower_bottom is not None:
            for grading in range(self.tower_bottom, ceiling + 1, 2):
                dims[grading] = dims.get(grading, 0) + 1
        for piece in self.torsion:
            for step in range(piece.length):
                grading = piece.top - 2 * step
                if grading <= ceiling:
                    dims[grading] = dims.get(grading, 0) + 1
        return dict(sorted(dims.items()))

    def describe(self) -> str:
        parts = []
        if self.tower_bottom is not None:
            parts.append(f"T+[{self.tower_bottom}]")
        parts.extend(f"F[U]/U^{p.length}[{p.top}]" for p in self.torsion)
        return " + ".join(parts) if parts else "0"


class TowerNode(BaseModel):
    """A copy of T+ whose lowest element sits in grading `bottom`."""
    model_config = ConfigDict(frozen=True)

    name: str
    bottom: int


class MonomialEntry(BaseModel):
    """Matrix entry U^exponent from a domain tower to a codomain tower."""
    model_config = ConfigDict(frozen=True)

    source: str
    target: str
    exponent: int = Field(ge=0)


class MonomialTowerMap(BaseModel):
    """A map between direct sums of towers whose entries are powers of U."""
    model_config = ConfigDict(frozen=True)

    domain: Tuple[TowerNode, ...] = Field(default_factory=tuple)
    codomain: Tuple[TowerNode, ...] = Field(default_factory=tuple)
    entries: Tuple[MonomialEntry, ...] = Field(default_factory=tuple)

    @model_validator(mode="after")
    def check_references(self) -> "MonomialTowerMap":
        names = [node.name for node in self.domain] + [node.name for node in self.codomain]
        if len(names) != len(set(names)):
            raise ValueError("tower node names must be unique across domain and codomain")
        sources = {node.name for node in self.domain}
        targets = {node.name for node in self.codomain}
        seen = set()
        for entry in self.entries:
            if entry.source not in sources or entry.target not in targets:
                raise ValueError(f"entry {entry.source} -> {entry.target} references an unknown node")
            if (entry.source, entry.target) in seen:
                raise ValueError(f"duplicate entry {entry.source} -> {entry.target}")
            seen.add((entry.source, entry.target))
        return self

    @property
    def max_exponent(self) -> int:
        return max((entry.exponent for entry in self.entries), default=0)

    @property
    def node_count(self) -> int:
        return len(self.domain) + len(self.codomain)
