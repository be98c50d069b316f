"""
Data models for knot input: Alexander polynomials, model complexes and staircases.
"""

import re
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


GENERATOR_NAME = re.compile(r"^[A-Za-z0-9_]+$")


class SymmetricLaurent(BaseModel):
    """Integer Laurent polynomial in t with a_k = a_{-k}, kept as exponent -> coefficient.

    Zero coefficients are dropped. Symmetry and Δ(1) = 1 are checked by the
    parser, not here, so the type can also carry rejected input in errors.
    """
    model_config = ConfigDict(frozen=True)

    coefficients: Dict[int, int] = Field(default_factory=dict)

    @field_validator("coefficients")
    @classmethod
    def drop_zeros(cls, v: Dict[int, int]) -> Dict[int, int]:
        return {k: c for k, c in sorted(v.items(), reverse=True) if c != 0}

    @property
    def genus(self) -> int:
        """Top exponent; the Seifert genus for the knots handled here."""
        return max(self.coefficients, default=0)

    def coefficient(self, exponent: int) -> int:
        return self.coefficients.get(exponent, 0)

    def evaluate_at_one(self) -> int:
        return sum(self.coefficients.values())

    def nonzero_exponents(self) -> List[int]:
        """Exponents with non-zero coefficient, from the top down."""
        return sorted(self.coefficients, reverse=True)

    def is_symmetric(self) -> bool:
        return all(self.coefficient(-k) == c for k, c in self.coefficients.items())

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for exponent in self.nonzero_exponents():
            coefficient = self.coefficients[exponent]
            sign = "-" if coefficient < 0 else "+"
            magnitude = abs(coefficient)
            if exponent == 0:
                body = str(magnitude)
            else:
                power = "t" if exponent == 1 else f"t^{exponent}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


class Generator(BaseModel):
    """A basis element of a model complex at filtration (i, j) and Maslov grading gr."""
    model_config = ConfigDict(frozen=True)

    name: str
    i: int
    j: int
    gr: int

    @field_validator("name")
    @classmethod
    def check_name(cls, v: str) -> str:
        if not GENERATOR_NAME.match(v):
            raise ValueError(f"generator name '{v}' must match [A-Za-z0-9_]+")
        return v

    @property
    def alexander(self) -> int:
        return self.j - self.i


class BifilteredComplex(BaseModel):
    """A finite model of CFK∞: one generator per U-orbit, a mod-2 differential and a flip.

    Structural invariants (d∘d = 0, filtration, grading drop, flip) are
    enforced by `knotio.validate_complex`; this model only holds the data.
    """
    model_config = ConfigDict(frozen=True)

    generators: Tuple[Generator, ...] = Field(default_factory=tuple)
    differential: Dict[str, Tuple[str, ...]] = Field(default_factory=dict)
    flip: Dict[str, str] = Field(default_factory=dict)

    def by_name(self) -> Dict[str, Generator]:
        return {gen.name: gen for gen in self.generators}

    def targets(self, name: str) -> Tuple[str, ...]:
        return self.differential.get(name, ())

    def flipped(self, name: str) -> str:
        return self.flip.get(name, name)

    @property
    def alexander_amplitude(self) -> int:
        return max((abs(gen.alexander) for gen in self.generators), default=0)


class KnotKind(str, Enum):
    """How a knot was specified."""
    TORUS = "torus"
    ALEXANDER = "alex"
    CFK = "cfk"


class KnotSpec(BaseModel):
    """A parsed knot specification string."""
    model_config = ConfigDict(frozen=True)

    kind: KnotKind
    raw: str
    torus: Optional[Tuple[int, int]] = None
    alexander: Optional[SymmetricLaurent] = None
    complex: Optional[BifilteredComplex] = None
    source: Optional[str] = Field(default=None, description="File the complex was read from")

    @property
    def label(self) -> str:
        if self.kind == KnotKind.TORUS and self.torus:
            return f"T({self.torus[0]},{self.torus[1]})"
        return self.raw


class StaircaseKnot(BaseModel):
    """The model of an L-space knot.

    `v_values` holds V_s for -g <= s <= g; outside that window V_s = 0 for
    s >= g and V_s = -s for s <= -g. H_s is derived as V_{-s}.
    """
    model_config = ConfigDict(frozen=True)

    genus: int = Field(ge=0)
    alexander: SymmetricLaurent
    gaps: Tuple[int, ...] = Field(default_factory=tuple)
    v_values: Dict[int, int] = Field(default_factory=dict)
    complex: BifilteredComplex

    def V(self, s: int) -> int:
        if s >= self.genus:
            return 0
        if s <= -self.genus:
            return -s
        return self.v_values[s]

    def H(self, s: int) -> int:
        return self.V(-s)

    @property
    def is_trivial(self) -> bool:
        return self.genus == 0


class ResolvedKnot(BaseModel):
    """A knot spec resolved to the data the engines consume."""
    model_config = ConfigDict(frozen=True)

    spec: KnotSpec
    genus: int
    staircase: Optional[StaircaseKnot] = None
    complex: Optional[BifilteredComplex] = None
    admissible: bool = True
    inadmissible_reason: Optional[str] = None

    @property
    def label(self) -> str:
        return self.spec.label


class KnotSummary(BaseModel):
    """Invariants reported for a knot."""
    knot: str
    kind: KnotKind
    genus: int
    alexander: Optional[str] = None
    admissible: bool
    nu: Optional[int] = None
    v: Dict[int, int] = Field(default_factory=dict)
    h: Dict[int, int] = Field(default_factory=dict)
    torsion_coefficients: Dict[int, int] = Field(default_factory=dict)
    generators: int = 0
