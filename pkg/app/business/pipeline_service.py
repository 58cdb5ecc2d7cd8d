"""
End-to-end stages: featurize paired descriptor sets, fit a hashing model,
encode new samples and evaluate retrieval tasks.
"""

import dataclasses
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.business.descriptor_service import build_multiviews, learn_dictionary
from app.business.evaluation_service import mean_average_precision, pr_curve
from app.business.index_service import build_index, encode_matrix
from app.business.kernel_service import build_kernel_matrix, select_anchors
from app.business.optimizer_service import HashingTrainer
from app.errors import ErrorMessages, FileFormatError
from app.models.codes import HammingIndex
from app.models.descriptor import DescriptorSet, Dictionary, MultiViewDescriptor
from app.models.kernel import AnchorSet, Modality
from app.models.labels import LabelMatrix
from app.models.metrics import RelevanceJudge, RelevanceMode, RetrievalTask
from app.models.state import HashingModel
from app.schemas.config import KernelSettings, RunConfig
from app.schemas.reports import MetricsReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FitResult:
    model: HashingModel
    Psi: np.ndarray
    Phi: np.ndarray
    final_terms: Dict[str, float]
    ridge: Dict[Modality, float]


def align_pairs(
    image_sets: Sequence[DescriptorSet],
    text_sets: Sequence[DescriptorSet],
    source: str = "text descriptors",
) -> Tuple[List[DescriptorSet], List[DescriptorSet]]:
    """Pair text sets with image sets by sample id, in image order."""
    by_id = {s.sample_id: s for s in text_sets}
    missing = [s.sample_id for s in image_sets if s.sample_id not in by_id]
    if missing:
        raise FileFormatError(
            ErrorMessages.FileFormat.UNKNOWN_SAMPLE.format(sample_id=missing[0], path=source),
            source, None, f"{len(missing)} image sample(s) have no text pair",
        )
    if len(by_id) != len(image_sets):
        extra = sorted(set(by_id) - {s.sample_id for s in image_sets})
        raise FileFormatError(
            ErrorMessages.FileFormat.UNKNOWN_SAMPLE.format(sample_id=extra[0], path="image descriptors"),
            source, None, f"{len(extra)} text sample(s) have no image pair",
        )
    return list(image_sets), [by_id[s.sample_id] for s in image_sets]


def kernel_features(
    samples: Sequence[MultiViewDescriptor],
    anchors: AnchorSet,
    kernel: KernelSettings,
    modality: Modality,
) -> np.ndarray:
    return build_kernel_matrix(
        samples, anchors, kernel.combination, modality, kernel.weights.for_modality(modality)
    )


def fit_pipeline(
    image_sets: Sequence[DescriptorSet],
    text_sets: Sequence[DescriptorSet],
    labels: LabelMatrix,
    config: RunConfig,
    echo: str = "{}",
) -> FitResult:
    """
    Learn both dictionaries, featurize, pick anchors and train.

    Both modalities draw anchors with the same seed and sizes, so anchor j of
    every view is the same training pair in image and text.
    """
    seed = config.seed
    eps_spd = config.descriptors.eps_spd
    kernel = config.kernel

    image_dictionary = learn_dictionary(image_sets, config.descriptors.k_img, seed)
    text_dictionary = learn_dictionary(text_sets, config.descriptors.k_txt, seed)
    image_views = build_multiviews(image_sets, image_dictionary, eps_spd)
    text_views = build_multiviews(text_sets, text_dictionary, eps_spd)

    sizes = kernel.anchors.resolve(len(image_views), kernel.views)
    image_anchors = select_anchors(image_views, sizes, seed, kernel.anchors.strategy)
    text_anchors = select_anchors(text_views, sizes, seed, kernel.anchors.strategy)
    Psi = kernel_features(image_views, image_anchors, kernel, Modality.IMAGE)
    Phi = kernel_features(text_views, text_anchors, kernel, Modality.TEXT)
    logger.info("Kernel features built", extra={"n": Psi.shape[1], "D": Psi.shape[0], "anchors": sizes})

    trainer = HashingTrainer(config.effective_train_config())
    state = trainer.train(Psi, Phi, labels)
    state = dataclasses.replace(state, image_anchors=image_anchors, text_anchors=text_anchors, kernel=kernel)
    model = HashingModel(state, image_dictionary, text_dictionary, eps_spd, echo)
    return FitResult(model, Psi, Phi, trainer.terms(state, labels, Psi, Phi), dict(trainer.ridge))


def multiviews_for(model: HashingModel, sets: Sequence[DescriptorSet], modality: Modality) -> List[MultiViewDescriptor]:
    dictionary: Dictionary = model.dictionary(modality)
    return build_multiviews(sets, dictionary, model.eps_spd)


def encode_sets(model: HashingModel, sets: Sequence[DescriptorSet], modality: Modality) -> HammingIndex:
    """Codes of new samples for one modality, ids in input order."""
    bits = encode_matrix(multiviews_for(model, sets, modality), model.state, modality)
    index = build_index(bits.reshape(len(sets), model.state.code_length), [s.sample_id for s in sets])
    logger.info("Samples encoded", extra={"modality": modality.value, "n": len(index)})
    return index


def evaluate_task(
    task: RetrievalTask,
    queries: HammingIndex,
    database: HammingIndex,
    query_labels: LabelMatrix,
    db_labels: LabelMatrix,
    top_r: Optional[int] = None,
    radii: Optional[Sequence[int]] = None,
    relevance: Optional[RelevanceMode] = None,
    echo: str = "{}",
) -> MetricsReport:
    judge = (
        RelevanceJudge(relevance, query_labels, db_labels) if relevance is not None
        else RelevanceJudge.infer(query_labels, db_labels)
    )
    R = len(database) if top_r is None else min(top_r, len(database))
    value = mean_average_precision(queries, database, judge, R)
    curve = pr_curve(queries, database, judge, radii)
    logger.info("Task evaluated", extra={"task": task.value, "map": round(value, 6), "R": R})
    return MetricsReport.from_curve(
        curve,
        task=task,
        L=database.length,
        R=R,
        map=value,
        relevance=judge.mode.value,
        n_queries=len(queries),
        n_database=len(database),
        config_echo=echo,
    )
