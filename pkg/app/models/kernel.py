import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.errors import ErrorMessages, InvalidArgumentError


class KernelKind(str, enum.Enum):
    RBF = "rbf"
    POLYNOMIAL = "polynomial"


class View(str, enum.Enum):
    HISTOGRAM = "histogram"
    MEAN = "mean"
    COVARIANCE = "covariance"

    @property
    def index(self) -> int:
        return VIEW_ORDER.index(self)


VIEW_ORDER: Tuple[View, View, View] = (View.HISTOGRAM, View.MEAN, View.COVARIANCE)


class Modality(str, enum.Enum):
    IMAGE = "image"
    TEXT = "text"


@dataclass(frozen=True, eq=False)
class AnchorSet:
    """
    Anchor samples per view, in each view's native representation.

    ``histogram`` is (d_1, k), ``mean`` is (d_2, d_mod) and ``covariance_log``
    is (d_3, d_mod, d_mod) holding the matrix logarithms of the anchor
    covariances. A view with zero anchors is disabled.
    """

    histogram: np.ndarray
    mean: np.ndarray
    covariance_log: np.ndarray

    def __post_init__(self) -> None:
        histogram = np.asarray(self.histogram, dtype=np.float64)
        mean = np.asarray(self.mean, dtype=np.float64)
        covariance_log = np.asarray(self.covariance_log, dtype=np.float64)
        if histogram.ndim != 2 or mean.ndim != 2 or covariance_log.ndim != 3:
            raise InvalidArgumentError("Anchor arrays have the wrong rank", "anchors")
        if covariance_log.shape[1:] != (mean.shape[1], mean.shape[1]):
            raise InvalidArgumentError(
                "Covariance anchors do not match the mean dimension", "anchors", covariance_log.shape
            )
        if not np.allclose(covariance_log, np.swapaxes(covariance_log, 1, 2), rtol=0.0, atol=1e-10):
            raise InvalidArgumentError("Log-mapped covariance anchors must be symmetric", "anchors")
        if sum(self._sizes(histogram, mean, covariance_log)) == 0:
            raise InvalidArgumentError(ErrorMessages.Kernel.NO_ACTIVE_VIEW, "anchors")
        object.__setattr__(self, "histogram", histogram)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance_log", covariance_log)

    @staticmethod
    def _sizes(*blocks: np.ndarray) -> Tuple[int, ...]:
        return tuple(int(block.shape[0]) for block in blocks)

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return self._sizes(self.histogram, self.mean, self.covariance_log)  # type: ignore[return-value]

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return int(self.histogram.shape[1])

    @property
    def dim(self) -> int:
        return int(self.mean.shape[1])

    def view(self, view: View) -> np.ndarray:
        return (self.histogram, self.mean, self.covariance_log)[view.index]


@dataclass(frozen=True, eq=False)
class KernelizedFeature:
    """Per-view kernel responses of one sample against the anchors."""

    blocks: Tuple[np.ndarray, np.ndarray, np.ndarray]

    @property
    def stacked(self) -> np.ndarray:
        return np.concatenate(self.blocks)

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return tuple(int(block.shape[0]) for block in self.blocks)  # type: ignore[return-value]
