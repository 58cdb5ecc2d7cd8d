from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from app.errors import DimensionMismatchError, ErrorMessages, InvalidArgumentError
from app.models.descriptor import Dictionary
from app.models.kernel import AnchorSet, Modality

if TYPE_CHECKING:
    from app.schemas.config import KernelSettings


@dataclass(frozen=True, eq=False)
class TrainState:
    """
    Learned quantities of one training run.

    ``B`` is (L, n) in {-1, +1}; ``P_img`` and ``P_txt`` are (L, D); ``W`` is
    (L, c). ``objective_trace[0]`` is the objective of the initialization and
    one value follows per outer iteration.
    """

    B: np.ndarray
    P_img: np.ndarray
    P_txt: np.ndarray
    W: np.ndarray
    objective_trace: Tuple[float, ...] = ()
    image_anchors: Optional[AnchorSet] = None
    text_anchors: Optional[AnchorSet] = None
    kernel: Optional[KernelSettings] = None
    wall_time: float = 0.0
    converged: bool = False

    def __post_init__(self) -> None:
        B = np.asarray(self.B)
        if not np.all(np.abs(B) == 1):
            raise InvalidArgumentError(ErrorMessages.Optimizer.NON_BINARY_CODES, "B")
        object.__setattr__(self, "B", B.astype(np.int8))
        L = B.shape[0]
        if self.P_img.shape[0] != L or self.P_txt.shape[0] != L or self.W.shape[0] != L:
            raise DimensionMismatchError(
                "TrainState", L, (self.P_img.shape[0], self.P_txt.shape[0], self.W.shape[0])
            )
        for anchors, P in ((self.image_anchors, self.P_img), (self.text_anchors, self.P_txt)):
            if anchors is not None and anchors.total != P.shape[1]:
                raise DimensionMismatchError("TrainState anchors", P.shape[1], anchors.total)
        object.__setattr__(self, "objective_trace", tuple(float(v) for v in self.objective_trace))

    @property
    def code_length(self) -> int:
        return int(self.B.shape[0])

    @property
    def n_samples(self) -> int:
        return int(self.B.shape[1])

    @property
    def n_classes(self) -> int:
        return int(self.W.shape[1])

    @property
    def iterations(self) -> int:
        return max(len(self.objective_trace) - 1, 0)

    def projection(self, modality: Modality) -> np.ndarray:
        return self.P_img if modality is Modality.IMAGE else self.P_txt

    def anchors(self, modality: Modality) -> Optional[AnchorSet]:
        return self.image_anchors if modality is Modality.IMAGE else self.text_anchors


@dataclass(frozen=True, eq=False)
class HashingModel:
    """A trained state plus what is needed to featurize raw descriptor sets."""

    state: TrainState
    image_dictionary: Dictionary
    text_dictionary: Dictionary
    eps_spd: float
    echo: str = "{}"

    def dictionary(self, modality: Modality) -> Dictionary:
        return self.image_dictionary if modality is Modality.IMAGE else self.text_dictionary
