"""
Retrieval metrics: mean average precision over Hamming rankings and
hash-lookup precision/recall per radius.
"""

import logging
from typing import Iterable, Optional, Sequence

import numpy as np

from app.business.index_service import distances_to, rank_positions
from app.errors import DimensionMismatchError, ErrorMessages, InvalidArgumentError
from app.models.codes import BinaryCode, HammingIndex
from app.models.metrics import PrCurve, PrPoint, RelevanceJudge

logger = logging.getLogger(__name__)


def relevance_matrix(judge: RelevanceJudge) -> np.ndarray:
    """Boolean (n_query, n_db) matrix; a shared label makes a pair relevant."""
    return (judge.query_labels.Y.T @ judge.db_labels.Y) > 0


def is_relevant(judge: RelevanceJudge, query_i: int, db_j: int) -> bool:
    query_set = judge.query_labels.label_set(query_i)
    db_set = judge.db_labels.label_set(db_j)
    return not query_set.isdisjoint(db_set)


def average_precision(ranked_relevance: Sequence[bool], R: Optional[int] = None) -> float:
    """
    AP over the top R positions: mean of precision@m at every relevant m.

    Returns 0.0 when nothing relevant is within the top R.
    """
    relevance = np.asarray(ranked_relevance, dtype=bool)
    R = relevance.shape[0] if R is None else R
    if R < 1 or R > relevance.shape[0]:
        raise InvalidArgumentError(
            ErrorMessages.Evaluation.INVALID_R.format(length=relevance.shape[0], r=R), "R", R
        )
    top = relevance[:R]
    hits = int(top.sum())
    if hits == 0:
        return 0.0
    precision_at = np.cumsum(top) / np.arange(1, R + 1)
    return float(precision_at[top].sum() / hits)


def _query_codes(queries: HammingIndex) -> Iterable[BinaryCode]:
    return (queries.code(i) for i in range(len(queries)))


def _check_judge(queries: HammingIndex, index: HammingIndex, judge: RelevanceJudge) -> None:
    if len(queries) == 0:
        raise InvalidArgumentError(ErrorMessages.Evaluation.EMPTY_QUERY_SET, "queries")
    if judge.query_labels.n_samples != len(queries):
        raise DimensionMismatchError("query labels", len(queries), judge.query_labels.n_samples)
    if judge.db_labels.n_samples != len(index):
        raise DimensionMismatchError("database labels", len(index), judge.db_labels.n_samples)


def per_query_average_precision(
    queries: HammingIndex,
    index: HammingIndex,
    judge: RelevanceJudge,
    R: Optional[int] = None,
) -> np.ndarray:
    _check_judge(queries, index, judge)
    R = len(index) if R is None else min(R, len(index))
    relevant = relevance_matrix(judge)
    scores = np.zeros(len(queries))
    if R == 0:
        return scores
    for i, code in enumerate(_query_codes(queries)):
        order, _ = rank_positions(code, index, R)
        scores[i] = average_precision(relevant[i, order], R)
    return scores


def mean_average_precision(
    queries: HammingIndex,
    index: HammingIndex,
    judge: RelevanceJudge,
    R: Optional[int] = None,
) -> float:
    """MAP over every query; R defaults to the whole database and is clipped to its size."""
    scores = per_query_average_precision(queries, index, judge, R)
    value = float(scores.mean())
    logger.debug("MAP computed", extra={"queries": len(queries), "R": R, "map": value})
    return value


def pr_curve(
    queries: HammingIndex,
    index: HammingIndex,
    judge: RelevanceJudge,
    radii: Optional[Sequence[int]] = None,
) -> PrCurve:
    """
    Pooled hash-lookup precision and recall for each radius (default 0..L).

    Precision pools retrieved items over all queries; a radius where no query
    retrieves anything has no defined precision and is listed as omitted.
    """
    _check_judge(queries, index, judge)
    radii = list(range(index.length + 1)) if radii is None else sorted(set(radii))
    for radius in radii:
        if not 0 <= radius <= index.length:
            raise InvalidArgumentError(
                ErrorMessages.Index.RADIUS_OUT_OF_RANGE.format(length=index.length, radius=radius),
                "radii",
                radius,
            )

    relevant = relevance_matrix(judge)
    distances = np.stack([distances_to(code, index) for code in _query_codes(queries)])
    total_relevant = int(relevant.sum())

    points, omitted = [], []
    for radius in radii:
        retrieved = distances <= radius
        n_retrieved = int(retrieved.sum())
        if n_retrieved == 0:
            omitted.append(radius)
            continue
        hits = int((retrieved & relevant).sum())
        recall = hits / total_relevant if total_relevant else 0.0
        points.append(PrPoint(radius=radius, precision=hits / n_retrieved, recall=recall))

    curve = PrCurve(points=tuple(points), omitted_radii=tuple(omitted))
    recalls = curve.recalls()
    assert all(a <= b for a, b in zip(recalls, recalls[1:])), "recall must not decrease with radius"
    return curve
