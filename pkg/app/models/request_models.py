"""
Request and configuration models shared by the CLI and the HTTP surface.
"""

from datetime import datetime
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from app.models.cone_models import Engine, TableFlavor


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class RunConfig(BaseModel):
    """Everything one CLI invocation needs."""
    knot: Optional[str] = Field(default=None, description="torus:a,b | alex:\"...\" | cfk:path")
    slope: Optional[int] = None
    slope_range: Optional[List[int]] = Field(default=None, description="Inclusive [A, B] from --slopes A..B")
    flavor: TableFlavor = TableFlavor.HAT
    engine: Engine = Engine.DIRECT
    output_format: OutputFormat = OutputFormat.TEXT
    out: Optional[str] = None
    diagram: bool = False
    family: Optional[str] = None
    max_q: Optional[int] = Field(default=None, ge=3)
    all_slopes: bool = False

    @model_validator(mode="after")
    def check_range(self) -> "RunConfig":
        if self.slope_range is not None:
            if len(self.slope_range) != 2 or self.slope_range[0] > self.slope_range[1]:
                raise ValueError("slope range must be A..B with A <= B")
        return self

    def slopes(self) -> List[int]:
        """Requested slopes in increasing order, zero excluded from ranges."""
        if self.slope_range is not None:
            low, high = self.slope_range
            return [p for p in range(low, high + 1) if p != 0]
        return [] if self.slope is None else [self.slope]


class ComputeRequest(BaseModel):
    """Request model for per-class Floer tables."""
    knot: str = Field(..., description="torus:a,b | alex:<polynomial> | cfk:<fixture>")
    slope: int
    flavor: TableFlavor = TableFlavor.HAT
    engine: Engine = Engine.DIRECT
    diagram: bool = False

    model_config = {
        "json_schema_extra": {
            "example": {"knot": "torus:2,5", "slope": 2, "flavor": "hat", "engine": "both"}
        }
    }


class ObstructRequest(BaseModel):
    """Request model for a reducibility report."""
    knot: str
    slope: int

    model_config = {
        "json_schema_extra": {"example": {"knot": "torus:2,11", "slope": 3}}
    }


class HealthResponse(BaseModel):
    """Health check response model."""
    status: str
    timestamp: datetime
    version: str
    uptime: float
    services: Dict[str, str]
