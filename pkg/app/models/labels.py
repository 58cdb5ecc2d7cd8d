from dataclasses import dataclass
from typing import Sequence

import numpy as np

from app.errors import ErrorMessages, InvalidArgumentError


@dataclass(frozen=True, eq=False)
class LabelMatrix:
    """Label matrix Y of shape (c, n); column i is the (multi-)hot label vector of sample i."""

    Y: np.ndarray

    def __post_init__(self) -> None:
        Y = np.atleast_2d(np.asarray(self.Y, dtype=np.float64))
        if not np.all((Y == 0) | (Y == 1)):
            raise InvalidArgumentError(ErrorMessages.Optimizer.LABEL_ENTRIES, "Y")
        if Y.shape[1] and np.any(Y.sum(axis=0) == 0):
            raise InvalidArgumentError(ErrorMessages.Optimizer.EMPTY_LABEL_COLUMN, "Y")
        object.__setattr__(self, "Y", Y)

    @classmethod
    def from_indices(cls, labels: Sequence[Sequence[int]], n_classes: int) -> "LabelMatrix":
        Y = np.zeros((n_classes, len(labels)))
        for i, indices in enumerate(labels):
            for j in indices:
                if not 0 <= j < n_classes:
                    raise InvalidArgumentError(
                        f"Label index {j} outside [0, {n_classes})", "labels", j
                    )
                Y[j, i] = 1.0
        return cls(Y)

    @property
    def n_classes(self) -> int:
        return int(self.Y.shape[0])

    @property
    def n_samples(self) -> int:
        return int(self.Y.shape[1])

    @property
    def is_one_hot(self) -> bool:
        return bool(np.all(self.Y.sum(axis=0) == 1))

    def label_set(self, i: int) -> set[int]:
        return set(np.flatnonzero(self.Y[:, i]).tolist())

    def take(self, indices: Sequence[int]) -> "LabelMatrix":
        return LabelMatrix(self.Y[:, list(indices)])
