"""
Out-of-sample encoding and linear-scan Hamming search.
"""

import logging
from typing import List, Sequence, Set, Tuple

import numpy as np

from app.business.kernel_service import build_kernel_matrix
from app.business.optimizer_service import sgn
from app.errors import DimensionMismatchError, ErrorMessages, InvalidArgumentError
from app.models.codes import BinaryCode, HammingIndex
from app.models.descriptor import MultiViewDescriptor
from app.models.kernel import Modality
from app.models.state import TrainState
from app.schemas.config import KernelSettings

logger = logging.getLogger(__name__)


def _encoding_parts(state: TrainState, modality: Modality):
    anchors = state.anchors(modality)
    if anchors is None:
        raise InvalidArgumentError("The model carries no anchors for this modality", "modality", modality.value)
    return anchors, state.kernel or KernelSettings(), state.projection(modality)


def encode_matrix(
    samples: Sequence[MultiViewDescriptor],
    state: TrainState,
    modality: Modality,
) -> np.ndarray:
    """Codes of shape (n, L): sign(P X) for the kernelized, weighted features X."""
    anchors, kernel, P = _encoding_parts(state, modality)
    if not samples:
        return np.zeros((0, state.code_length), dtype=np.int8)
    X = build_kernel_matrix(
        samples, anchors, kernel.combination, modality, kernel.weights.for_modality(modality)
    )
    return sgn(P @ X).T


def encode(sample: MultiViewDescriptor, state: TrainState, modality: Modality) -> BinaryCode:
    return BinaryCode(encode_matrix([sample], state, modality)[0])


def hamming_distance(a: BinaryCode, b: BinaryCode) -> int:
    if a.length != b.length:
        raise InvalidArgumentError(
            ErrorMessages.Index.LENGTH_MISMATCH.format(left=a.length, right=b.length), "length"
        )
    return int(np.bitwise_count(a.packed ^ b.packed).sum())


def distances_to(query: BinaryCode, index: HammingIndex) -> np.ndarray:
    """Hamming distance from ``query`` to every code of ``index``, in insertion order."""
    if query.length != index.length:
        raise InvalidArgumentError(
            ErrorMessages.Index.LENGTH_MISMATCH.format(left=query.length, right=index.length), "length"
        )
    if len(index) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.bitwise_count(index.packed ^ query.packed[np.newaxis, :]).sum(axis=1).astype(np.int64)


def rank_positions(query: BinaryCode, index: HammingIndex, top_r: int) -> Tuple[np.ndarray, np.ndarray]:
    """Positions and distances of the ``top_r`` nearest codes; ties keep insertion order."""
    if top_r < 1:
        raise InvalidArgumentError(ErrorMessages.Index.INVALID_TOP_R.format(top_r=top_r), "top_r", top_r)
    distances = distances_to(query, index)
    order = np.argsort(distances, kind="stable")[:top_r]
    return order, distances[order]


def search_ranked(query: BinaryCode, index: HammingIndex, top_r: int) -> List[Tuple[str, int]]:
    order, distances = rank_positions(query, index, top_r)
    return [(index.ids[position], int(distance)) for position, distance in zip(order, distances)]


def search_radius(query: BinaryCode, index: HammingIndex, radius: int) -> Set[str]:
    if not 0 <= radius <= index.length:
        raise InvalidArgumentError(
            ErrorMessages.Index.RADIUS_OUT_OF_RANGE.format(length=index.length, radius=radius),
            "radius",
            radius,
        )
    distances = distances_to(query, index)
    return {index.ids[position] for position in np.flatnonzero(distances <= radius)}


def build_index(bits: np.ndarray, ids: Sequence[str]) -> HammingIndex:
    bits = np.atleast_2d(bits)
    if bits.shape[0] != len(ids):
        raise DimensionMismatchError("build_index", len(ids), bits.shape[0])
    logger.debug("Index built", extra={"n": len(ids), "L": int(bits.shape[1])})
    return HammingIndex.from_bits(bits, ids)
