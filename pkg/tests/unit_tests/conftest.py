"""Need for pytest or else it will cause an import error in pytest."""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from pycovd.models.observation import ObservationSet


@pytest.fixture
def data_folder(request) -> str:
    """Return the folder containing test files."""
    return f"{Path(request.module.__file__).parent}/data"


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator shared by a single test."""
    return np.random.default_rng(20240519)


@pytest.fixture
def make_observations(rng) -> Callable[[int, int], ObservationSet]:
    """Factory of observation sets with a random rotation and moderate scales."""

    def make(n: int, m: int) -> ObservationSet:
        rotation, _ = np.linalg.qr(rng.standard_normal((n, n)))
        mixing = rotation * rng.uniform(0.7, 1.5, size=n)
        return ObservationSet(mixing @ rng.standard_normal((n, m)))

    return make


@pytest.fixture
def make_spd(rng) -> Callable[[int], np.ndarray]:
    """Factory of well-conditioned random SPD matrices."""

    def make(n: int) -> np.ndarray:
        a = rng.standard_normal((n, n))
        return a @ a.T + n * np.eye(n)

    return make


@pytest.fixture
def two_clusters(rng) -> tuple[list[ObservationSet], list[str]]:
    """Ten observation sets per class with clearly different covariances."""
    scales = {"narrow": np.array([1.0, 1.0]), "wide": np.array([3.0, 0.3])}
    sets, labels = [], []
    for label, scale in scales.items():
        for _ in range(10):
            sets.append(ObservationSet(scale[:, None] * rng.standard_normal((2, 60))))
            labels.append(label)
    return sets, labels
