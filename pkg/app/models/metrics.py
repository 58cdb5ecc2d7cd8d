import enum
from dataclasses import dataclass, field
from typing import List, Tuple

from app.errors import DimensionMismatchError, ErrorMessages, InvalidArgumentError
from app.models.kernel import Modality
from app.models.labels import LabelMatrix


class RetrievalTask(str, enum.Enum):
    I2T = "I2T"
    T2I = "T2I"
    I2I = "I2I"
    T2T = "T2T"

    @property
    def query_modality(self) -> Modality:
        return Modality.IMAGE if self.value[0] == "I" else Modality.TEXT

    @property
    def database_modality(self) -> Modality:
        return Modality.IMAGE if self.value[-1] == "I" else Modality.TEXT

    @property
    def is_cross_modal(self) -> bool:
        return self.query_modality is not self.database_modality


class RelevanceMode(str, enum.Enum):
    SINGLE_LABEL = "single_label"
    MULTI_LABEL = "multi_label"


@dataclass(frozen=True)
class RelevanceJudge:
    """Ground-truth relevance between query and database items."""

    mode: RelevanceMode
    query_labels: LabelMatrix
    db_labels: LabelMatrix

    def __post_init__(self) -> None:
        if self.query_labels.n_classes != self.db_labels.n_classes:
            raise DimensionMismatchError(
                "RelevanceJudge", self.query_labels.n_classes, self.db_labels.n_classes
            )
        if self.mode is RelevanceMode.SINGLE_LABEL and not (
            self.query_labels.is_one_hot and self.db_labels.is_one_hot
        ):
            raise InvalidArgumentError(ErrorMessages.Evaluation.SINGLE_LABEL_REQUIRED, "mode")

    @classmethod
    def infer(cls, query_labels: LabelMatrix, db_labels: LabelMatrix) -> "RelevanceJudge":
        single = query_labels.is_one_hot and db_labels.is_one_hot
        mode = RelevanceMode.SINGLE_LABEL if single else RelevanceMode.MULTI_LABEL
        return cls(mode, query_labels, db_labels)


@dataclass(frozen=True)
class PrPoint:
    radius: int
    precision: float
    recall: float


@dataclass(frozen=True)
class PrCurve:
    """Hash-lookup precision/recall per Hamming radius; radii with nothing retrieved are omitted."""

    points: Tuple[PrPoint, ...]
    omitted_radii: Tuple[int, ...] = field(default_factory=tuple)

    def recalls(self) -> List[float]:
        return [point.recall for point in self.points]
