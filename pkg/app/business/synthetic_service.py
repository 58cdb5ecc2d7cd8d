"""
Synthetic paired bimodal data with well-separated classes.

Each class owns a Gaussian per modality (its own center and per-dimension
spread); a sample draws 20 to 40 local descriptors around a slightly
jittered copy of its class center, independently for image and text.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from app.infrastructure.descriptor_io import write_descriptor_file
from app.infrastructure.label_io import write_label_file
from app.models.descriptor import DescriptorSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntheticSpec:
    n_classes: int = 3
    n_train: int = 300
    n_query: int = 90
    d_img: int = 8
    d_txt: int = 6
    min_descriptors: int = 20
    max_descriptors: int = 40
    class_separation: float = 4.0
    sample_jitter: float = 0.3
    code_length: int = 16
    anchors_per_view: int = 64
    k_img: int = 32
    k_txt: int = 16


@dataclass(frozen=True, eq=False)
class SyntheticSplit:
    image_sets: List[DescriptorSet]
    text_sets: List[DescriptorSet]
    labels: List[int]


class SyntheticGenerator:
    def __init__(self, spec: SyntheticSpec = SyntheticSpec(), seed: int = 0):
        self.spec = spec
        self.rng = np.random.default_rng(seed)
        self.centers = {
            "image": self.rng.normal(0.0, spec.class_separation, (spec.n_classes, spec.d_img)),
            "text": self.rng.normal(0.0, spec.class_separation, (spec.n_classes, spec.d_txt)),
        }
        self.spreads = {
            "image": self.rng.uniform(0.5, 1.5, (spec.n_classes, spec.d_img)),
            "text": self.rng.uniform(0.5, 1.5, (spec.n_classes, spec.d_txt)),
        }

    def _sample(self, sample_id: str, modality: str, label: int) -> DescriptorSet:
        spec = self.spec
        center = self.centers[modality][label]
        center = center + self.rng.normal(0.0, spec.sample_jitter, center.shape)
        count = int(self.rng.integers(spec.min_descriptors, spec.max_descriptors + 1))
        noise = self.rng.normal(0.0, 1.0, (count, center.shape[0])) * self.spreads[modality][label]
        return DescriptorSet(sample_id, center + noise)

    def split(self, prefix: str, n: int) -> SyntheticSplit:
        # balanced classes in a seeded order
        labels = self.rng.permutation(np.arange(n) % self.spec.n_classes).tolist()
        image_sets, text_sets = [], []
        for i, label in enumerate(labels):
            sample_id = f"{prefix}{i:05d}"
            image_sets.append(self._sample(sample_id, "image", label))
            text_sets.append(self._sample(sample_id, "text", label))
        return SyntheticSplit(image_sets, text_sets, labels)

    def run_config(self) -> Dict:
        spec = self.spec
        return {
            "paths": {
                "image_descriptors": "train_image.desc",
                "text_descriptors": "train_text.desc",
                "labels": "train_labels.txt",
                "output_dir": "out",
                "query_image_descriptors": "query_image.desc",
                "query_text_descriptors": "query_text.desc",
                "query_labels": "query_labels.txt",
            },
            "descriptors": {"k_img": spec.k_img, "k_txt": spec.k_txt},
            "kernel": {
                "combination": {"mode": "mode1"},
                "anchors": {"per_view": [spec.anchors_per_view] * 3, "strategy": "random"},
            },
            "train": {"L": spec.code_length},
            "evaluation": {"tasks": ["I2T", "T2I", "I2I", "T2T"]},
        }


def _write_split(out_dir: Path, prefix: str, split: SyntheticSplit, spec: SyntheticSpec) -> None:
    write_descriptor_file(out_dir / f"{prefix}_image.desc", split.image_sets, spec.d_img)
    write_descriptor_file(out_dir / f"{prefix}_text.desc", split.text_sets, spec.d_txt)
    write_label_file(
        out_dir / f"{prefix}_labels.txt",
        [s.sample_id for s in split.image_sets],
        [[label] for label in split.labels],
        spec.n_classes,
    )


def generate_dataset(out_dir: Path, seed: int = 0, spec: SyntheticSpec = SyntheticSpec()) -> Tuple[Path, Dict[str, int]]:
    """Write train/query splits and a ready-to-train ``config.json``; returns the config path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    generator = SyntheticGenerator(spec, seed)
    train_split = generator.split("tr", spec.n_train)
    query_split = generator.split("q", spec.n_query)
    _write_split(out_dir, "train", train_split, spec)
    _write_split(out_dir, "query", query_split, spec)

    config = generator.run_config()
    config["seed"] = seed
    config_path = out_dir / "config.json"
    config_path.write_text(json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    counts = {"train": spec.n_train, "query": spec.n_query, "classes": spec.n_classes}
    logger.info("Synthetic data written", extra={"out_dir": str(out_dir), **counts})
    return config_path, counts
