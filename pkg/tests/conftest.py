"""
Shared fixtures: seeded generators, random SPD matrices, small multi-view
sample sets and a trained synthetic run.
"""

from pathlib import Path
from typing import Callable, List

import numpy as np
import pytest

from app.business.descriptor_service import build_multiviews
from app.models.descriptor import DescriptorSet, Dictionary, MultiViewDescriptor


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def make_spd(rng: np.random.Generator, d: int) -> np.ndarray:
    A = rng.normal(size=(d, d))
    return A @ A.T + d * np.eye(d) * 0.1 + np.eye(d) * 1e-3


@pytest.fixture
def random_spd(rng) -> Callable[[int], np.ndarray]:
    return lambda d: make_spd(rng, d)


def make_descriptor_sets(
    rng: np.random.Generator,
    n: int,
    dim: int,
    n_classes: int = 2,
    count_range=(6, 12),
    prefix: str = "s",
) -> List[DescriptorSet]:
    centers = rng.normal(0.0, 3.0, (n_classes, dim))
    sets = []
    for i in range(n):
        count = int(rng.integers(count_range[0], count_range[1] + 1))
        vectors = centers[i % n_classes] + rng.normal(size=(count, dim))
        sets.append(DescriptorSet(f"{prefix}{i}", vectors))
    return sets


@pytest.fixture
def multiviews(rng) -> Callable[..., List[MultiViewDescriptor]]:
    """Factory of random multi-view samples over a random (not learned) dictionary."""

    def build(n: int = 12, dim: int = 3, k: int = 4) -> List[MultiViewDescriptor]:
        sets = make_descriptor_sets(rng, n, dim)
        dictionary = Dictionary(rng.normal(0.0, 3.0, (k, dim)))
        return build_multiviews(sets, dictionary, eps_spd=1e-6)

    return build


@pytest.fixture(scope="session")
def synthetic_dir(tmp_path_factory) -> Path:
    """The default synthetic dataset, generated once per session."""
    from app.business.synthetic_service import generate_dataset

    out_dir = tmp_path_factory.mktemp("synthetic")
    generate_dataset(out_dir, seed=7)
    return out_dir


@pytest.fixture(scope="session")
def trained_dir(synthetic_dir) -> Path:
    """A full ``train`` run over the synthetic dataset."""
    from app.main import main

    out_dir = synthetic_dir / "run"
    assert main(["train", "--config", str(synthetic_dir / "config.json"), "--out", str(out_dir)]) == 0
    return out_dir
