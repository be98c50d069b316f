"""
Data models for truncated mapping cone diagrams and per-Spin^c tables.
"""

from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.models.algebra_models import ChainComplexF2, F2Matrix, GradedModule, GradedVectorSpace


class TableFlavor(str, Enum):
    """Which Floer homology a table holds."""
    HAT = "hat"
    PLUS = "plus"
    CHECK = "check"


class Engine(str, Enum):
    """Which computation produced a table."""
    CLOSED = "closed"
    DIRECT = "direct"
    BOTH = "both"


class NodeKind(str, Enum):
    A = "A"
    B = "B"


class EdgeKind(str, Enum):
    V = "v"
    H = "h"


class ConeNode(BaseModel):
    """An A_t or B_t object of the truncated diagram.

    `offset` is the grading shift of the node inside the cone. Towers carry
    their bottom grading; chain-level nodes carry their hat complex.
    """
    model_config = ConfigDict(frozen=True)

    kind: NodeKind
    index: int
    offset: int = 0
    bottom: Optional[int] = None
    chain: Optional[ChainComplexF2] = None

    @property
    def name(self) -> str:
        return f"{self.kind.value}{self.index}"


class ConeEdge(BaseModel):
    """v_t: A_t -> B_t or h_t: A_t -> B_{t+p}."""
    model_config = ConfigDict(frozen=True)

    kind: EdgeKind
    source: int
    target: int
    exponent: Optional[int] = None
    matrix: Optional[F2Matrix] = None

    @property
    def label(self) -> str:
        suffix = "" if self.exponent is None else f"^{self.exponent}"
        return f"{self.kind.value}{suffix}"


class ConeDiagram(BaseModel):
    """The truncated mapping cone for slope p and Spin^c class [residue]."""
    model_config = ConfigDict(frozen=True)

    p: int
    residue: int
    genus: int
    flavor: TableFlavor
    truncation_base: int
    a_indices: Tuple[int, ...] = Field(default_factory=tuple)
    b_indices: Tuple[int, ...] = Field(default_factory=tuple)
    nodes: Tuple[ConeNode, ...] = Field(default_factory=tuple)
    edges: Tuple[ConeEdge, ...] = Field(default_factory=tuple)

    def node(self, kind: NodeKind, index: int) -> ConeNode:
        for node in self.nodes:
            if node.kind == kind and node.index == index:
                return node
        raise KeyError(f"{kind.value}{index}")

    @property
    def node_count(self) -> int:
        return len(self.nodes)


class SpincClass(BaseModel):
    """Floer data of one Spin^c class [residue]."""
    residue: int
    total: int = 0
    hat: Optional[GradedVectorSpace] = None
    module: Optional[GradedModule] = None
    check: Optional[GradedVectorSpace] = None
    gr_bot: Optional[int] = None
    gr_top: Optional[int] = None


class SpincTable(BaseModel):
    """One entry per residue 0, ..., |p| - 1."""
    knot: str
    p: int
    flavor: TableFlavor
    engine: Engine
    classes: List[SpincClass] = Field(default_factory=list)

    def get(self, residue: int) -> SpincClass:
        return self.classes[residue % abs(self.p)]

    def totals(self) -> Dict[int, int]:
        return {entry.residue: entry.total for entry in self.classes}


class ZTriple(BaseModel):
    """Relative gradings of the distinguished tower elements x_t, y_t, z_t of A+_t."""
    model_config = ConfigDict(frozen=True)

    t: int
    x: int
    y: int
    z: int


class ZElements(BaseModel):
    """x, y, z gradings per class, anchored at z = 0 for the smallest index of each class."""
    p: int
    classes: Dict[int, List[ZTriple]] = Field(default_factory=dict)

    def z(self, t: int) -> int:
        for triple in self.classes.get(t % abs(self.p), []):
            if triple.t == t:
                return triple.z
        raise KeyError(t)


class ComputeResult(BaseModel):
    """A table plus the optional extras of a compute run."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    table: SpincTable
    diagrams: Optional[List[str]] = None
    d_invariants: Optional[Dict[int, Fraction]] = None
