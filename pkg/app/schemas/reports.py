"""
Schemas for the JSON documents the commands write.
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.models.metrics import PrCurve, RetrievalTask


class PrPointSchema(BaseModel):
    r: int
    precision: float = Field(ge=0, le=1)
    recall: float = Field(ge=0, le=1)


class MetricsReport(BaseModel):
    """MAP and the hash-lookup curve of one retrieval task."""

    model_config = ConfigDict(use_enum_values=True)

    task: RetrievalTask
    L: int
    R: int
    map: float = Field(ge=0, le=1)
    pr_curve: List[PrPointSchema]
    omitted_radii: List[int] = []
    precision_pooling: str = "micro; radii where no query retrieves anything are omitted"
    relevance: str
    n_queries: int
    n_database: int
    config_echo: str

    @classmethod
    def from_curve(cls, curve: PrCurve, **fields) -> "MetricsReport":
        return cls(
            pr_curve=[PrPointSchema(r=p.radius, precision=p.precision, recall=p.recall) for p in curve.points],
            omitted_radii=list(curve.omitted_radii),
            **fields,
        )

    def curve_tsv(self) -> str:
        lines = ["r\tprecision\trecall"]
        lines.extend(f"{p.r}\t{p.precision!r}\t{p.recall!r}" for p in self.pr_curve)
        return "\n".join(lines) + "\n"


class TrainingReport(BaseModel):
    objective_trace: List[float]
    iterations: int
    converged: bool
    wall_time_seconds: float
    n_samples: int
    code_length: int
    n_classes: int
    anchor_sizes: Tuple[int, int, int]
    final_terms: Dict[str, float]
    ridge_used: Optional[float] = None
    evaluation: List[MetricsReport] = []
    config_echo: str
