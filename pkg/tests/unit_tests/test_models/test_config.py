"""Tests for the run configuration models."""

from __future__ import annotations

import json

import pytest
from pydantic import ValidationError

from pycovd.divergences import DivergenceKind, PracticalKind
from pycovd.exceptions import ConfigError
from pycovd.models.config import (
    BenchConfig,
    ClassifierKind,
    CvConfig,
    RunConfig,
    Space,
    load_config,
)
from pycovd.models.kernel import KernelKind


def test_defaults() -> None:
    """An absent config file means every documented default."""
    config = load_config(None)

    assert config.kernel.kind == KernelKind.RBF
    assert config.kernel.sigma is None
    assert config.rho is None
    assert config.rho_scale == 1e-6
    assert config.r == 10
    assert config.divergence == PracticalKind.STEIN_HAT
    assert config.space == Space.RKHS
    assert config.classifier.kind == ClassifierKind.NN
    assert config.cv is None
    assert config.seed == 0
    assert config.io.output_dir == "pycovd-out"


def test_load_full_config(tmp_path) -> None:
    """Nested sections parse into their models."""
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps(
            {
                "kernel": {"kind": "polynomial", "degree": 2, "offset": 1.0},
                "divergence": "jeffreys",
                "space": "observation",
                "classifier": {"kind": "svm", "svm": {"beta": 0.5, "c": 2.0}},
                "cv": {"folds": 3, "beta": [0.1, 1.0]},
                "seed": 11,
            }
        ),
        encoding="utf-8",
    )

    config = load_config(path)

    assert config.kernel.degree == 2
    assert config.divergence == DivergenceKind.JEFFREYS
    assert config.classifier.svm.c == 2.0
    assert config.cv is not None
    assert config.cv.folds == 3
    assert config.cv.r is None


@pytest.mark.parametrize(
    "payload",
    [
        pytest.param({"space": "observation", "divergence": "stein_hat"}, id="hat"),
        pytest.param(
            {"classifier": {"kind": "svm"}, "divergence": "burg"}, id="svm_burg"
        ),
        pytest.param({"r": 0}, id="zero_rank"),
        pytest.param({"rho": -1.0}, id="negative_rho"),
        pytest.param({"kernel": {"kind": "polynomial"}}, id="degree_missing"),
        pytest.param({"kernel": {"kind": "linear", "sigma": 1.0}}, id="linear_sigma"),
        pytest.param({"cv": {"folds": 1}}, id="one_fold"),
        pytest.param({"bench": {"m_values": [10, 20]}}, id="two_sizes"),
        pytest.param({"bench": {"pairs": 10}}, id="few_pairs"),
        pytest.param({"verbose": True}, id="unknown_key"),
    ],
)
def test_invalid_configs_are_rejected(payload, tmp_path) -> None:
    """Invalid combinations and values surface as ConfigError."""
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload), encoding="utf-8")

    with pytest.raises(ConfigError):
        load_config(path)


def test_unreadable_and_malformed_files(tmp_path) -> None:
    """A missing file and broken JSON are both ConfigError."""
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"seed\": ,\n}", encoding="utf-8")

    with pytest.raises(ConfigError, match="cannot read config"):
        load_config(tmp_path / "missing.json")
    with pytest.raises(ConfigError, match="broken.json"):
        load_config(broken)


def test_overrides_are_revalidated() -> None:
    """Command-line overrides go through the same validation."""
    config = RunConfig().with_overrides(seed=5, rho=0.01, r=3, output_dir="elsewhere")

    assert (config.seed, config.rho, config.r) == (5, 0.01, 3)
    assert config.io.output_dir == "elsewhere"
    with pytest.raises(ConfigError):
        RunConfig().with_overrides(r=0)


def test_overrides_keep_unset_values() -> None:
    """None means keep the configured value."""
    base = RunConfig(r=4, seed=9)

    config = base.with_overrides()

    assert config == base


def test_cv_grid_values_must_be_positive() -> None:
    """Grid values are range checked."""
    with pytest.raises(ValidationError):
        CvConfig(sigma=[1.0, -1.0])
    with pytest.raises(ValidationError):
        CvConfig(r=[0])


def test_bench_needs_distinct_sizes() -> None:
    """Repeated sizes do not count twice."""
    with pytest.raises(ValidationError):
        BenchConfig(m_values=[50, 50, 100])
    assert BenchConfig(m_values=[10, 20, 40]).pairs == 200
