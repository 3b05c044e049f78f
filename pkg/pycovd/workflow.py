"""Config-bound facade that the command line drives.

Example:
    ```python
    workflow = CovdWorkflow(load_config("run.json"))
    outcome = workflow.classify("train/manifest.json", "test/manifest.json")
    print(outcome.report.as_table())
    ```

"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from pycovd.bench import run_scaling
from pycovd.classify import (
    LabeledSet,
    cross_validate,
    nn_classify_many,
    svm_predict_many,
    svm_train,
)
from pycovd.dataset import load_dataset, load_manifest, save_dataset
from pycovd.exceptions import DataError
from pycovd.features import SyntheticMode, synthetic_two_class
from pycovd.models.config import ClassifierKind, RunConfig, Space
from pycovd.models.reports import AccuracyReport, CrossValidationResult
from pycovd.rkhs_covd import fit_rkhs_covds, resolve_kernel
from pycovd.rkhs_divergences import divergence_matrix
from pycovd.spd_core import covariance_descriptor
from pycovd.verify import run_verification

if TYPE_CHECKING:
    from collections.abc import Sequence

    from pycovd.classify import Descriptor, SvmModel
    from pycovd.models.kernel import KernelSpec
    from pycovd.models.observation import ObservationSet
    from pycovd.models.reports import BenchReport, VerificationReport


@dataclass(frozen=True)
class DistanceOutcome:
    """Pairwise divergences of one dataset."""

    matrix: np.ndarray
    labels: list[str]
    paths: list[str]
    kernel: KernelSpec | None
    rho: float | None


@dataclass(frozen=True)
class ClassificationOutcome:
    """Predictions and accuracy on a test dataset."""

    report: AccuracyReport
    paths: list[str]
    truth: list[str]
    predicted: list[str]
    kernel: KernelSpec | None
    rho: float | None
    model: SvmModel | None = None


@dataclass(frozen=True)
class _Fitted:
    descriptors: list[Descriptor]
    kernel: KernelSpec | None
    rho: float | None


class CovdWorkflow:
    """Runs descriptor fitting, distances and classifiers from one RunConfig.

    Attributes:
        config: The validated run configuration.

    """

    def __init__(self, config: RunConfig) -> None:
        """Bind the workflow to a configuration.

        Args:
            config: Validated run configuration.

        """
        self.config = config
        logger.debug(
            "Workflow initialized: space={}, divergence={}, classifier={}",
            config.space.value,
            config.divergence.value,
            config.classifier.kind.value,
        )

    @property
    def in_rkhs(self) -> bool:
        """Whether descriptors live in the RKHS."""
        return self.config.space == Space.RKHS

    def fit(
        self,
        sets: Sequence[ObservationSet],
        *,
        kernel: KernelSpec | None = None,
        r: int | None = None,
        rho: float | None = None,
    ) -> _Fitted:
        """Build descriptors for a pool of observation sets.

        In observation space these are the n x n covariance matrices. In the
        RKHS the kernel bandwidth and the common rho are resolved on the pool
        unless given.
        """
        if not self.in_rkhs:
            return _Fitted([covariance_descriptor(x) for x in sets], None, None)
        if not sets:
            return _Fitted([], kernel or self.config.kernel, rho)
        resolved = resolve_kernel(
            kernel or self.config.kernel, sets, seed=self.config.seed
        )
        descriptors = fit_rkhs_covds(
            resolved,
            sets,
            r or self.config.r,
            rho if rho is not None else self.config.rho,
            rho_scale=self.config.rho_scale,
            seed=self.config.seed,
            workers=self.config.workers,
        )
        return _Fitted(list(descriptors), resolved, descriptors[0].rho)

    def distance_matrix(self, manifest: str | Path) -> DistanceOutcome:
        """Fit every sample of a manifest and compute all pairwise divergences."""
        samples = load_dataset(manifest, workers=self.config.workers)
        paths = [entry.path for entry in load_manifest(manifest).samples]
        fitted = self.fit([x for x, _ in samples])
        matrix = divergence_matrix(
            fitted.descriptors, self.config.divergence, workers=self.config.workers
        )
        logger.info(
            "Computed {} divergences over {} samples",
            self.config.divergence.value,
            len(samples),
        )
        return DistanceOutcome(
            matrix=matrix,
            labels=[label for _, label in samples],
            paths=paths,
            kernel=fitted.kernel,
            rho=fitted.rho,
        )

    def _cross_validate(self, train: LabeledSet) -> CrossValidationResult:
        cv = self.config.cv
        svm = self.config.classifier.svm
        return cross_validate(
            train,
            cv,
            cv.folds,
            kind=self.config.divergence,
            svm=self.config.classifier.kind == ClassifierKind.SVM,
            beta=svm.beta,
            c=svm.c,
            tol=svm.tol,
            seed=self.config.seed,
            rho=self.config.rho,
            rho_scale=self.config.rho_scale,
            force=svm.force_beta,
            workers=self.config.workers,
        )

    def classify(
        self, train_manifest: str | Path, test_manifest: str | Path
    ) -> ClassificationOutcome:
        """Train on one manifest and predict the samples of another.

        Cross-validation runs first when the config has a cv section; its best
        r and sigma refit the training descriptors and its best beta and C
        train the SVM. Test descriptors reuse the training kernel and rho.

        Raises:
            DataError: If the training set is empty.

        """
        train_samples = load_dataset(train_manifest, workers=self.config.workers)
        test_samples = load_dataset(test_manifest, workers=self.config.workers)
        if not train_samples:
            msg = f"{train_manifest}: training set is empty"
            raise DataError(msg)
        train_sets = [x for x, _ in train_samples]
        train_labels = [label for _, label in train_samples]
        fitted = self.fit(train_sets)
        svm = self.config.classifier.svm
        r, kernel, beta, c = self.config.r, fitted.kernel, svm.beta, svm.c
        cv_result = None
        if self.config.cv is not None:
            cv_result = self._cross_validate(
                LabeledSet(tuple(fitted.descriptors), tuple(train_labels))
            )
            best = cv_result.best
            logger.info("Cross-validation picked {}", best)
            r = best.r if best.r is not None else r
            if best.sigma is not None and kernel is not None:
                kernel = kernel.with_sigma(best.sigma)
            beta = best.beta if best.beta is not None else beta
            c = best.c if best.c is not None else c
            fitted = self.fit(train_sets, kernel=kernel, r=r)
        train = LabeledSet(tuple(fitted.descriptors), tuple(train_labels))
        queries = self.fit(
            [x for x, _ in test_samples], kernel=fitted.kernel, r=r, rho=fitted.rho
        ).descriptors
        model = None
        if self.config.classifier.kind == ClassifierKind.SVM:
            model = svm_train(
                train,
                self.config.divergence,
                beta,
                c,
                svm.tol,
                force=svm.force_beta,
                clip_spectrum=svm.clip_spectrum,
                workers=self.config.workers,
            )
            predicted = svm_predict_many(model, queries, workers=self.config.workers)
        else:
            predicted = nn_classify_many(
                train, queries, self.config.divergence, workers=self.config.workers
            )
        truth = [label for _, label in test_samples]
        report = AccuracyReport.from_predictions(truth, predicted).model_copy(
            update={"cross_validation": cv_result}
        )
        logger.info(
            "Classified {} test samples, accuracy {}", report.total, report.accuracy
        )
        return ClassificationOutcome(
            report=report,
            paths=[entry.path for entry in load_manifest(test_manifest).samples],
            truth=truth,
            predicted=predicted,
            kernel=fitted.kernel,
            rho=fitted.rho,
            model=model,
        )

    def verify(self, *, corrupt: bool = False) -> VerificationReport:
        """Run the identity suite with the configured seed."""
        return run_verification(self.config.seed, corrupt=corrupt)

    def bench(self) -> BenchReport:
        """Run the scaling benchmark with the configured sizes."""
        settings = self.config.bench
        return run_scaling(
            settings.m_values,
            settings.r,
            settings.pairs,
            self.config.seed,
            n=settings.n,
            workers=settings.workers,
        )

    def synth(  # noqa: PLR0913
        self,
        directory: str | Path,
        *,
        mode: SyntheticMode | str,
        train_per_class: int,
        test_per_class: int,
        n: int,
        m: int,
        separation: float = 4.0,
    ) -> tuple[Path, Path]:
        """Write seeded train and test datasets drawn from one synthetic law.

        Returns:
            Paths of the train and test manifests.

        """
        per_class = train_per_class + test_per_class
        sets, labels = synthetic_two_class(
            self.config.seed, per_class, n, m, mode, separation
        )
        train, test = [], []
        for index, sample in enumerate(zip(sets, labels, strict=True)):
            (train if index % per_class < train_per_class else test).append(sample)
        out = Path(directory)
        return (
            save_dataset(out / "train", train, seed=self.config.seed),
            save_dataset(out / "test", test, seed=self.config.seed),
        )
