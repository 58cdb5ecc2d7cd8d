"""
Per-sample statistics of local descriptor sets.

A sample becomes a triplet of views: a BOVW histogram over a k-means
dictionary (zeroth order), the mean vector (first order) and the
regularized covariance matrix (second order).
"""

import logging
from typing import List, Sequence

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.cluster import KMeans

from app.core.config import settings
from app.errors import (
    DegenerateCovarianceError,
    DimensionMismatchError,
    EmptyInputError,
    ErrorMessages,
    InvalidArgumentError,
)
from app.models.descriptor import DescriptorSet, Dictionary, MultiViewDescriptor

logger = logging.getLogger(__name__)

KMEANS_MAX_ITER = 100


def pool_descriptors(sets: Sequence[DescriptorSet]) -> np.ndarray:
    """Stack every local descriptor of every set into one (sum N_i, d_mod) array."""
    if not sets:
        raise EmptyInputError(ErrorMessages.Descriptor.EMPTY_COLLECTION, "sets")
    dims = {s.dim for s in sets}
    if len(dims) != 1:
        raise DimensionMismatchError("pool_descriptors", sets[0].dim, sorted(dims))
    return np.vstack([s.vectors for s in sets])


def learn_dictionary(sets: Sequence[DescriptorSet], k: int, seed: int) -> Dictionary:
    """
    Learn a k-center BOVW dictionary with Lloyd's k-means.

    k-means++ seeding from ``seed``, at most 100 iterations, stops once no
    assignment changes; empty clusters are repaired with the points farthest
    from their centers.
    """
    if k < 1:
        raise InvalidArgumentError(ErrorMessages.Descriptor.INVALID_DICTIONARY_SIZE.format(k=k), "k", k)
    pooled = pool_descriptors(sets)
    if pooled.shape[0] < k:
        raise InvalidArgumentError(
            ErrorMessages.Descriptor.TOO_FEW_DESCRIPTORS.format(count=pooled.shape[0], k=k), "k", k
        )

    kmeans = KMeans(
        n_clusters=k,
        init="k-means++",
        n_init=1,
        max_iter=KMEANS_MAX_ITER,
        tol=0.0,
        algorithm="lloyd",
        random_state=seed,
    )
    kmeans.fit(pooled)
    logger.debug("Dictionary learned", extra={
        "k": k, "pooled": pooled.shape[0], "iterations": kmeans.n_iter_, "inertia": float(kmeans.inertia_),
    })
    return Dictionary(kmeans.cluster_centers_.copy())


def compute_histogram(descriptor_set: DescriptorSet, dictionary: Dictionary) -> np.ndarray:
    """L1-normalized hard-assignment histogram; ties go to the lowest center index."""
    if descriptor_set.dim != dictionary.dim:
        raise DimensionMismatchError("compute_histogram", dictionary.dim, descriptor_set.dim)
    distances = cdist(descriptor_set.vectors, dictionary.centers, metric="sqeuclidean")
    nearest = np.argmin(distances, axis=1)
    counts = np.bincount(nearest, minlength=dictionary.k).astype(np.float64)
    return counts / descriptor_set.count


def compute_mean(descriptor_set: DescriptorSet) -> np.ndarray:
    if descriptor_set.count < 1:
        raise EmptyInputError(ErrorMessages.Descriptor.EMPTY_SET, "vectors")
    return descriptor_set.vectors.mean(axis=0)


def compute_covariance(descriptor_set: DescriptorSet, eps_spd: float = settings.EPS_SPD) -> np.ndarray:
    """Unbiased sample covariance, symmetrized and shifted by ``eps_spd * I``."""
    if eps_spd < 0:
        raise InvalidArgumentError("eps_spd must be non-negative", "eps_spd", eps_spd)
    d = descriptor_set.dim
    if descriptor_set.count == 1:
        if eps_spd == 0:
            raise DegenerateCovarianceError(descriptor_set.sample_id)
        return eps_spd * np.eye(d)

    centered = descriptor_set.vectors - compute_mean(descriptor_set)
    covariance = centered.T @ centered / (descriptor_set.count - 1)
    covariance = (covariance + covariance.T) / 2.0
    return covariance + eps_spd * np.eye(d)


def build_multiview(
    descriptor_set: DescriptorSet,
    dictionary: Dictionary,
    eps_spd: float = settings.EPS_SPD,
) -> MultiViewDescriptor:
    return MultiViewDescriptor(
        histogram=compute_histogram(descriptor_set, dictionary),
        mean=compute_mean(descriptor_set),
        covariance=compute_covariance(descriptor_set, eps_spd),
    )


def build_multiviews(
    sets: Sequence[DescriptorSet],
    dictionary: Dictionary,
    eps_spd: float = settings.EPS_SPD,
) -> List[MultiViewDescriptor]:
    return [build_multiview(s, dictionary, eps_spd) for s in sets]
