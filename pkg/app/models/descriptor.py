from dataclasses import dataclass

import numpy as np

from app.errors import EmptyInputError, ErrorMessages, InvalidArgumentError, ManifoldDomainError


@dataclass(frozen=True, eq=False)
class DescriptorSet:
    """Local descriptor vectors of one sample in one modality, shape (N_i, d_mod)."""

    sample_id: str
    vectors: np.ndarray

    def __post_init__(self) -> None:
        vectors = np.asarray(self.vectors, dtype=np.float64)
        if vectors.ndim == 1:
            vectors = vectors.reshape(-1, 1) if vectors.size else vectors.reshape(0, 0)
        if vectors.ndim != 2:
            raise InvalidArgumentError(ErrorMessages.Descriptor.RAGGED_SET, "vectors", vectors.shape)
        if vectors.shape[0] == 0:
            raise EmptyInputError(ErrorMessages.Descriptor.EMPTY_SET, "vectors")
        if not np.all(np.isfinite(vectors)):
            raise InvalidArgumentError(ErrorMessages.Descriptor.NON_FINITE, "vectors", self.sample_id)
        object.__setattr__(self, "vectors", vectors)

    @property
    def count(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


@dataclass(frozen=True, eq=False)
class Dictionary:
    """BOVW codebook: k centers of dimension d_mod."""

    centers: np.ndarray

    def __post_init__(self) -> None:
        centers = np.atleast_2d(np.asarray(self.centers, dtype=np.float64))
        if centers.shape[0] < 1:
            raise InvalidArgumentError(
                ErrorMessages.Descriptor.INVALID_DICTIONARY_SIZE.format(k=0), "centers", centers.shape
            )
        if not np.all(np.isfinite(centers)):
            raise InvalidArgumentError(ErrorMessages.Descriptor.NON_FINITE_CENTER, "centers")
        object.__setattr__(self, "centers", centers)

    @property
    def k(self) -> int:
        return int(self.centers.shape[0])

    @property
    def dim(self) -> int:
        return int(self.centers.shape[1])


@dataclass(frozen=True, eq=False)
class MultiViewDescriptor:
    """Zeroth-, first- and second-order statistics of one sample."""

    histogram: np.ndarray
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        histogram = np.asarray(self.histogram, dtype=np.float64)
        mean = np.asarray(self.mean, dtype=np.float64)
        covariance = np.atleast_2d(np.asarray(self.covariance, dtype=np.float64))

        if np.any(histogram < 0) or abs(histogram.sum() - 1.0) > 1e-9:
            raise InvalidArgumentError(ErrorMessages.Descriptor.HISTOGRAM_NOT_NORMALIZED, "histogram")
        if covariance.shape != (mean.shape[0], mean.shape[0]):
            raise InvalidArgumentError(
                f"Covariance shape {covariance.shape} does not match mean length {mean.shape[0]}",
                "covariance",
                covariance.shape,
            )
        if not np.allclose(covariance, covariance.T, rtol=0.0, atol=1e-10):
            raise InvalidArgumentError(ErrorMessages.Descriptor.COVARIANCE_NOT_SYMMETRIC, "covariance")
        if covariance.size:
            smallest = float(np.linalg.eigvalsh(covariance).min())
            if smallest <= 0:
                raise ManifoldDomainError(smallest)

        object.__setattr__(self, "histogram", histogram)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", covariance)

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    @property
    def k(self) -> int:
        return int(self.histogram.shape[0])
