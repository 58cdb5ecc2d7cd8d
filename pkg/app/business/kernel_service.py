"""
Anchor-based kernel feature maps over the three views.

Histogram and mean views use Euclidean geometry; the covariance view is
embedded with the matrix logarithm, so distances are Log-Euclidean and
polynomial inner products are Frobenius products of log-maps.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.cluster import KMeans

from app.errors import (
    DimensionMismatchError,
    EmptyInputError,
    ErrorMessages,
    InvalidArgumentError,
    ManifoldDomainError,
)
from app.models.descriptor import MultiViewDescriptor
from app.models.kernel import VIEW_ORDER, AnchorSet, KernelizedFeature, KernelKind, Modality, View
from app.schemas.config import KernelCombination, KernelFunctionSpec

logger = logging.getLogger(__name__)

Weights = Tuple[float, float, float]
UNIT_WEIGHTS: Weights = (1.0, 1.0, 1.0)


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + np.swapaxes(matrix, -1, -2)) / 2.0


def log_map(C: np.ndarray) -> np.ndarray:
    """Matrix logarithm of an SPD matrix via its symmetric eigendecomposition."""
    C = np.atleast_2d(np.asarray(C, dtype=np.float64))
    if not np.all(np.isfinite(C)):
        raise ManifoldDomainError(float("nan"))
    eigenvalues, eigenvectors = np.linalg.eigh(_symmetrize(C))
    smallest = float(eigenvalues.min())
    if smallest <= 0:
        raise ManifoldDomainError(smallest)
    return _symmetrize((eigenvectors * np.log(eigenvalues)) @ eigenvectors.T)


def exp_map(S: np.ndarray) -> np.ndarray:
    """Matrix exponential of a symmetric matrix; inverse of ``log_map``."""
    S = np.atleast_2d(np.asarray(S, dtype=np.float64))
    eigenvalues, eigenvectors = np.linalg.eigh(_symmetrize(S))
    return _symmetrize((eigenvectors * np.exp(eigenvalues)) @ eigenvectors.T)


def led_distance(C1: np.ndarray, C2: np.ndarray) -> float:
    """Log-Euclidean distance: Frobenius norm of log(C1) - log(C2)."""
    return float(np.linalg.norm(log_map(C1) - log_map(C2), ord="fro"))


def _check_view(view: int) -> View:
    if view not in (0, 1, 2):
        raise InvalidArgumentError(ErrorMessages.Kernel.INVALID_VIEW.format(view=view), "view", view)
    return VIEW_ORDER[view]


def _from_squared_distance(spec: KernelFunctionSpec, squared: np.ndarray) -> np.ndarray:
    return np.exp(-squared / (2.0 * spec.sigma ** 2))


def _from_inner_product(spec: KernelFunctionSpec, inner: np.ndarray) -> np.ndarray:
    return (inner + spec.a) ** spec.s


def kernel_eval(
    spec: KernelFunctionSpec,
    x: np.ndarray,
    y: np.ndarray,
    view: int,
    pre_mapped: bool = False,
) -> float:
    """
    Scalar kernel value between two values of one view.

    For view 2 the inputs are SPD matrices, or their log-maps when
    ``pre_mapped`` is set.
    """
    _check_view(view)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InvalidArgumentError(ErrorMessages.Kernel.NON_FINITE_INPUT, "x/y")
    if x.shape != y.shape:
        raise DimensionMismatchError("kernel_eval", x.shape, y.shape)

    if view == 2 and not pre_mapped:
        x, y = log_map(x), log_map(y)

    if spec.kind is KernelKind.RBF:
        squared = float(np.sum((x - y) ** 2))
        return float(_from_squared_distance(spec, np.float64(squared)))
    return float(_from_inner_product(spec, np.float64(np.sum(x * y))))


def _view_values(samples: Sequence[MultiViewDescriptor], view: View) -> np.ndarray:
    """Rows of native view values; covariances are log-mapped."""
    if view is View.HISTOGRAM:
        return np.stack([s.histogram for s in samples])
    if view is View.MEAN:
        return np.stack([s.mean for s in samples])
    return np.stack([log_map(s.covariance) for s in samples])


def select_anchors(
    samples: Sequence[MultiViewDescriptor],
    sizes: Sequence[int],
    seed: int,
    strategy: str = "random",
) -> AnchorSet:
    """
    Choose ``sizes[r]`` anchors per view.

    ``random`` draws training samples uniformly without replacement (the same
    seed and sample count always pick the same indices, so paired modalities
    share anchor samples); ``kmeans`` uses k-means centers of each view's
    values, computed in log-map space for covariances.
    """
    if not samples:
        raise EmptyInputError(ErrorMessages.Descriptor.EMPTY_COLLECTION, "samples")
    n = len(samples)
    if len(sizes) != 3:
        raise InvalidArgumentError("Anchor sizes need one entry per view", "sizes", sizes)
    for requested in sizes:
        if requested > n or requested < 0:
            raise InvalidArgumentError(
                ErrorMessages.Kernel.TOO_MANY_ANCHORS.format(requested=requested, available=n),
                "sizes",
                requested,
            )

    rng = np.random.default_rng(seed)
    k, d = samples[0].k, samples[0].dim
    empty_shapes = {View.HISTOGRAM: (0, k), View.MEAN: (0, d), View.COVARIANCE: (0, d, d)}
    blocks = []
    for view, size in zip(VIEW_ORDER, sizes):
        if size == 0:
            blocks.append(np.zeros(empty_shapes[view]))
            continue
        values = _view_values(samples, view)
        if strategy == "random":
            chosen = values[rng.choice(n, size=size, replace=False)]
        elif strategy == "kmeans":
            flat = values.reshape(n, -1)
            kmeans = KMeans(n_clusters=size, n_init=1, random_state=seed).fit(flat)
            chosen = kmeans.cluster_centers_.reshape((size,) + values.shape[1:])
        else:
            raise InvalidArgumentError(f"Unknown anchor strategy '{strategy}'", "strategy", strategy)
        if view is View.COVARIANCE:
            chosen = _symmetrize(chosen)
        blocks.append(chosen)

    logger.debug("Anchors selected", extra={"sizes": tuple(sizes), "strategy": strategy, "n": n})
    return AnchorSet(*blocks)


def _block(
    spec: KernelFunctionSpec,
    anchors: np.ndarray,
    values: np.ndarray,
) -> np.ndarray:
    """Kernel block of shape (d_r, n) between anchor rows and value rows."""
    anchor_rows = anchors.reshape(anchors.shape[0], -1)
    value_rows = values.reshape(values.shape[0], -1)
    if spec.kind is KernelKind.RBF:
        return _from_squared_distance(spec, cdist(anchor_rows, value_rows, metric="sqeuclidean"))
    return _from_inner_product(spec, anchor_rows @ value_rows.T)


def _check_compatible(samples: Sequence[MultiViewDescriptor], anchors: AnchorSet) -> None:
    for sample in samples:
        if sample.k != anchors.k:
            raise DimensionMismatchError("kernelize histogram", anchors.k, sample.k)
        if sample.dim != anchors.dim:
            raise DimensionMismatchError("kernelize mean", anchors.dim, sample.dim)


def build_kernel_matrix(
    samples: Sequence[MultiViewDescriptor],
    anchors: AnchorSet,
    combo: KernelCombination,
    modality: Modality = Modality.IMAGE,
    weights: Optional[Weights] = None,
) -> np.ndarray:
    """
    Stacked kernel matrix of shape (D, n), D = d_1 + d_2 + d_3.

    Block r is the kernel of view r against that view's anchors, scaled by
    the view weight; disabled views contribute no rows.
    """
    if not samples:
        return np.zeros((anchors.total, 0))
    _check_compatible(samples, anchors)
    specs = combo.for_modality(modality)
    weights = weights or UNIT_WEIGHTS

    blocks = []
    for view, spec, weight in zip(VIEW_ORDER, specs, weights):
        anchor_values = anchors.view(view)
        if anchor_values.shape[0] == 0:
            continue
        blocks.append(weight * _block(spec, anchor_values, _view_values(samples, view)))
    matrix = np.vstack(blocks)
    if not np.all(np.isfinite(matrix)):
        raise InvalidArgumentError(ErrorMessages.Kernel.NON_FINITE_INPUT, "kernel matrix")
    return matrix


def kernelize(
    sample: MultiViewDescriptor,
    anchors: AnchorSet,
    combo: KernelCombination,
    modality: Modality = Modality.IMAGE,
    weights: Optional[Weights] = None,
) -> KernelizedFeature:
    column = build_kernel_matrix([sample], anchors, combo, modality, weights)[:, 0]
    d1, d2, _ = anchors.sizes
    blocks = (column[:d1], column[d1:d1 + d2], column[d1 + d2:])
    return KernelizedFeature(blocks)  # type: ignore[arg-type]
