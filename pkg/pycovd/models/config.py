"""Run configuration models loaded from a single JSON file."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any

from loguru import logger
from pydantic import Field, ValidationError, model_validator

from pycovd.const import (
    BENCH_MIN_PAIRS,
    BENCH_MIN_SIZES,
    DEFAULT_RANK,
    DEFAULT_RHO_SCALE,
    DEFAULT_SVM_BETA,
    DEFAULT_SVM_C,
    DEFAULT_SVM_TOL,
)
from pycovd.divergences import AnyDivergenceKind, DivergenceKind, PracticalKind
from pycovd.exceptions import ConfigError
from pycovd.models.kernel import KernelSpec
from pycovd.utils.models import StrictModel


class Space(str, Enum):
    """Where covariance descriptors live."""

    OBSERVATION = "observation"
    RKHS = "rkhs"


class ClassifierKind(str, Enum):
    """Distance-based classifiers."""

    NN = "nn"
    SVM = "svm"


class SvmConfig(StrictModel):
    """Gaussian divergence-kernel SVM settings."""

    beta: float = Field(default=DEFAULT_SVM_BETA, gt=0.0)
    c: float = Field(default=DEFAULT_SVM_C, gt=0.0)
    tol: float = Field(default=DEFAULT_SVM_TOL, gt=0.0)
    force_beta: bool = False
    clip_spectrum: bool = False


class ClassifierConfig(StrictModel):
    """Classifier choice."""

    kind: ClassifierKind = ClassifierKind.NN
    svm: SvmConfig = Field(default_factory=SvmConfig)


class CvGrid(StrictModel):
    """Cross-validation grid; an omitted list keeps the configured value."""

    sigma: list[float] | None = None
    r: list[int] | None = None
    beta: list[float] | None = None
    c: list[float] | None = None

    @model_validator(mode="after")
    def _check_values(self) -> CvGrid:
        for name in ("sigma", "beta", "c"):
            values = getattr(self, name)
            if values is not None and any(v <= 0 for v in values):
                msg = f"cv.{name} values must be positive"
                raise ValueError(msg)
        if self.r is not None and any(v < 1 for v in self.r):
            msg = "cv.r values must be >= 1"
            raise ValueError(msg)
        return self


class CvConfig(CvGrid):
    """Cross-validation folds and grid."""

    folds: int = Field(default=5, ge=2)


class BenchConfig(StrictModel):
    """Runtime-scaling benchmark settings."""

    m_values: list[int] = Field(default_factory=lambda: [50, 100, 200, 400])
    n: int = Field(default=10, ge=1)
    r: int = Field(default=10, ge=1)
    pairs: int = Field(default=200, ge=BENCH_MIN_PAIRS)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_sizes(self) -> BenchConfig:
        too_few = len(set(self.m_values)) < BENCH_MIN_SIZES
        if too_few or min(self.m_values) < 2:  # noqa: PLR2004
            msg = f"bench needs >= {BENCH_MIN_SIZES} distinct m values, each >= 2"
            raise ValueError(msg)
        return self


class IoConfig(StrictModel):
    """Output locations."""

    output_dir: str = "pycovd-out"


class RunConfig(StrictModel):
    """Complete configuration of a pycovd run.

    Attributes:
        kernel: Reproducing kernel; an RBF sigma left unset is resolved by the
            median heuristic on the training pool.
        rho: Common regularizer, or None for rho_scale times the pooled mean
            retained eigenvalue.
        rho_scale: Relative regularizer used when rho is None.
        r: Rank cap of every RKHS descriptor.
        divergence: Divergence used for distances and classifiers.
        space: Observation-space or RKHS descriptors.
        classifier: NN or SVM settings.
        cv: Cross-validation grid, or None to skip it.
        seed: The single seed every random choice flows from.
        workers: Thread count for pairwise work (None = default).
        bench: Benchmark settings.
        io: Output locations.

    """

    kernel: KernelSpec = Field(default_factory=KernelSpec.rbf)
    rho: float | None = Field(default=None, ge=0.0)
    rho_scale: float = Field(default=DEFAULT_RHO_SCALE, gt=0.0)
    r: int = Field(default=DEFAULT_RANK, ge=1)
    divergence: AnyDivergenceKind = PracticalKind.STEIN_HAT
    space: Space = Space.RKHS
    classifier: ClassifierConfig = Field(default_factory=ClassifierConfig)
    cv: CvConfig | None = None
    seed: int = Field(default=0, ge=0, lt=2**64)
    workers: int | None = Field(default=None, ge=1)
    bench: BenchConfig = Field(default_factory=BenchConfig)
    io: IoConfig = Field(default_factory=IoConfig)

    @model_validator(mode="after")
    def _check_combination(self) -> RunConfig:
        if self.space == Space.OBSERVATION and isinstance(
            self.divergence, PracticalKind
        ):
            msg = f"{self.divergence.value} is only defined in the RKHS space"
            raise ValueError(msg)
        if (
            self.classifier.kind == ClassifierKind.SVM
            and self.divergence == DivergenceKind.BURG
        ):
            msg = "the SVM needs a symmetric divergence; burg is asymmetric"
            raise ValueError(msg)
        return self

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        rho: float | None = None,
        r: int | None = None,
        output_dir: str | None = None,
    ) -> RunConfig:
        """Return a re-validated copy with command-line overrides applied.

        Raises:
            ConfigError: If an override violates a constraint.

        """
        data: dict[str, Any] = self.model_dump(mode="json")
        for key, value in (("seed", seed), ("rho", rho), ("r", r)):
            if value is not None:
                data[key] = value
        if output_dir is not None:
            data["io"]["output_dir"] = output_dir
        try:
            return RunConfig.model_validate(data)
        except ValidationError as error:
            msg = f"invalid override: {error}"
            raise ConfigError(msg) from error


def load_config(path: str | Path | None) -> RunConfig:
    """Load and validate a JSON run configuration.

    Args:
        path: Config file, or None for all defaults.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: If the file is unreadable, not JSON, or fails validation;
            the message carries pydantic's location (and line for syntax errors).

    """
    if path is None:
        return RunConfig()
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as error:
        msg = f"{config_path}: cannot read config: {error}"
        raise ConfigError(msg) from error
    try:
        config = RunConfig.model_validate_json(text)
    except ValidationError as error:
        msg = f"{config_path}: {error}"
        raise ConfigError(msg) from error
    logger.debug("Loaded config from {}", config_path)
    return config
