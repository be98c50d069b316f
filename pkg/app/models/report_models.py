"""
Data models for obstruction reports and verification summaries.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from app.models.cone_models import TableFlavor


CAVEAT = (
    "Verdicts concern the Floer-theoretic data only; topological hypotheses such as "
    "hyperbolicity are not checked, and NOT_OBSTRUCTED does not assert reducibility."
)


class Verdict(str, Enum):
    """Outcome of an obstruction test."""
    OBSTRUCTED = "OBSTRUCTED"
    NOT_OBSTRUCTED = "NOT_OBSTRUCTED"
    CONSISTENT = "CONSISTENT"
    INCONCLUSIVE = "INCONCLUSIVE"
    OUT_OF_RANGE = "OUT_OF_RANGE"


class PeriodicityWitness(BaseModel):
    """The pair of classes and the data line where periodicity fails."""
    first: Optional[int] = Field(default=None, description="Residue of the first class")
    second: Optional[int] = Field(default=None, description="Residue of the second class")
    flavor: TableFlavor
    grading: Optional[int] = None
    second_grading: Optional[int] = Field(default=None, description="Grading read in the second class, when it differs")
    left: str
    right: str

    def describe(self) -> str:
        classes = ""
        if self.first is not None and self.second is not None:
            classes = f"[{self.first}] vs [{self.second}]: "
        if self.grading is not None and self.second_grading is not None:
            return f"{classes}{self.left} at grading {self.grading} != {self.right} at grading {self.second_grading}"
        where = "" if self.grading is None else f" at grading {self.grading}"
        return f"{classes}{self.left} != {self.right}{where}"


class SummandVerdict(BaseModel):
    """Verdict for one candidate summand order r."""
    r: int
    verdict: Verdict
    witness: Optional[PeriodicityWitness] = None


class SlopeVerdict(BaseModel):
    """Result of one test in the decision tree."""
    test: str
    p: Optional[int] = None
    verdict: Verdict
    reason: str
    summands: List[SummandVerdict] = Field(default_factory=list)
    witness: Optional[PeriodicityWitness] = None


class ObstructionReport(BaseModel):
    """Full reducibility report for one knot and slope."""
    knot: str
    p: int
    genus: int
    candidate_orders: List[int] = Field(default_factory=list)
    verdict: Verdict
    reason: str
    stage: str
    summands: List[SummandVerdict] = Field(default_factory=list)
    witness: Optional[PeriodicityWitness] = None
    steps: List[SlopeVerdict] = Field(default_factory=list)
    caveat: str = CAVEAT


class VerificationFailure(BaseModel):
    """First counterexample of a failed cross-check."""
    check: str
    knot: str
    p: Optional[int] = None
    residue: Optional[int] = None
    grading: Optional[int] = None
    expected: str
    actual: str

    def describe(self) -> str:
        where = [self.knot]
        if self.p is not None:
            where.append(f"p = {self.p}")
        if self.residue is not None:
            where.append(f"class [{self.residue}]")
        if self.grading is not None:
            where.append(f"grading {self.grading}")
        return f"{self.check} failed on {', '.join(where)}: expected {self.expected}, got {self.actual}"


class VerificationSummary(BaseModel):
    """Pass/fail summary of a verify run."""
    knots: List[str] = Field(default_factory=list)
    checks: int = 0
    failures: List[VerificationFailure] = Field(default_factory=list)
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures
