"""
Data models for the surgery calculator.
"""

from .algebra_models import ChainComplexF2, F2Matrix, GradedModule, GradedVectorSpace, TorsionSummand
from .cone_models import ConeDiagram, Engine, SpincClass, SpincTable, TableFlavor
from .knot_models import BifilteredComplex, Generator, KnotSpec, StaircaseKnot, SymmetricLaurent
from .report_models import ObstructionReport, Verdict
from .request_models import ComputeRequest, HealthResponse, ObstructRequest, RunConfig

__all__ = [
    "ChainComplexF2",
    "F2Matrix",
    "GradedModule",
    "GradedVectorSpace",
    "TorsionSummand",
    "ConeDiagram",
    "Engine",
    "SpincClass",
    "SpincTable",
    "TableFlavor",
    "BifilteredComplex",
    "Generator",
    "KnotSpec",
    "StaircaseKnot",
    "SymmetricLaurent",
    "ObstructionReport",
    "Verdict",
    "ComputeRequest",
    "HealthResponse",
    "ObstructRequest",
    "RunConfig",
]
