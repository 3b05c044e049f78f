"""Nearest-neighbor and divergence-kernel SVM classifiers.

Both classifiers work from divergence matrices. The SVM is one-vs-rest over
the sorted class labels; each binary problem is solved by sequential minimal
optimization with the maximal-violating-pair working set.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger
from pydantic import ValidationError

from pycovd.const import (
    DEFAULT_SVM_C,
    DEFAULT_SVM_TOL,
    GRAM_PSD_TOL,
    SMO_MAX_ITER,
    SMO_TAU,
)
from pycovd.divergences import (
    AnyDivergenceKind,
    DivergenceKernelSpec,
    check_kernel_beta,
    gaussian_kernel_matrix,
    kernel_family,
)
from pycovd.exceptions import (
    ConfigError,
    DataError,
    DimensionMismatchError,
    EmptyGridError,
    NonConvergenceError,
)
from pycovd.models.kernel import KernelKind
from pycovd.models.reports import (
    CrossValidationResult,
    GridPoint,
    GridScore,
    PartitionAccuracy,
)
from pycovd.rkhs_covd import RkhsCovd, fit_rkhs_covds
from pycovd.rkhs_divergences import cross_divergence_matrix, divergence_matrix
from pycovd.utils.helpers import exact_sum

if TYPE_CHECKING:
    from collections.abc import Sequence

    from pycovd.models.config import CvGrid

    Descriptor = RkhsCovd | np.ndarray


@dataclass(frozen=True, eq=False)
class LabeledSet:
    """Descriptors with one class label each.

    Attributes:
        descriptors: RkhsCovd values, or SPD arrays for observation space.
        labels: Class label of each descriptor.

    """

    descriptors: tuple[Descriptor, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        """Freeze the sequences and check that they line up."""
        object.__setattr__(self, "descriptors", tuple(self.descriptors))
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        if len(self.descriptors) != len(self.labels):
            msg = (
                f"{len(self.descriptors)} descriptors but {len(self.labels)} labels"
            )
            raise DimensionMismatchError(msg)
        if any(not label for label in self.labels):
            msg = "labels must be non-empty"
            raise DataError(msg)
        kinds = {isinstance(d, RkhsCovd) for d in self.descriptors}
        if len(kinds) > 1:
            msg = "cannot mix RKHS descriptors and SPD matrices"
            raise DataError(msg)

    def __len__(self) -> int:
        """Number of samples."""
        return len(self.labels)

    @cached_property
    def classes(self) -> tuple[str, ...]:
        """Sorted distinct labels."""
        return tuple(sorted(set(self.labels)))

    @property
    def class_count(self) -> int:
        """Number of distinct labels."""
        return len(self.classes)

    @property
    def is_rkhs(self) -> bool:
        """Whether the descriptors are RKHS descriptors."""
        return bool(self.descriptors) and isinstance(self.descriptors[0], RkhsCovd)

    @property
    def dimension(self) -> int | None:
        """SPD matrix dimension, or None for infinite-dimensional RKHS."""
        if not self.descriptors or self.is_rkhs:
            return None
        return int(np.asarray(self.descriptors[0]).shape[0])

    def subset(self, indices: Sequence[int]) -> LabeledSet:
        """Select samples by index, keeping the given order."""
        return LabeledSet(
            tuple(self.descriptors[i] for i in indices),
            tuple(self.labels[i] for i in indices),
        )


def nn_predict_from_matrix(
    distances: np.ndarray, train_labels: Sequence[str]
) -> list[str]:
    """Label of the nearest training sample for every query row.

    Ties go to the lowest training index.

    Args:
        distances: Query x training divergence matrix.
        train_labels: Labels of the training columns.

    Returns:
        One predicted label per query row.

    """
    matrix = np.asarray(distances, dtype=float)
    if matrix.shape[0] == 0:
        return []
    if matrix.ndim != 2 or matrix.shape[1] != len(train_labels):  # noqa: PLR2004
        msg = (
            f"distance matrix {matrix.shape} does not match "
            f"{len(train_labels)} labels"
        )
        raise DimensionMismatchError(msg)
    nearest = np.argmin(matrix, axis=1)
    return [train_labels[int(i)] for i in nearest]


def _require_training(train: LabeledSet) -> None:
    if len(train) == 0:
        msg = "training set is empty"
        raise DataError(msg)


def nn_classify(
    train: LabeledSet, query: Descriptor, kind: AnyDivergenceKind
) -> str:
    """Classify one descriptor by its nearest training descriptor.

    Raises:
        DataError: If the training set is empty.

    """
    return nn_classify_many(train, [query], kind)[0]


def nn_classify_many(
    train: LabeledSet,
    queries: Sequence[Descriptor],
    kind: AnyDivergenceKind,
    *,
    workers: int | None = None,
) -> list[str]:
    """Nearest-neighbor labels for several queries.

    Raises:
        DataError: If the training set is empty.

    """
    _require_training(train)
    if not queries:
        return []
    distances = cross_divergence_matrix(
        queries, train.descriptors, kind, workers=workers
    )
    return nn_predict_from_matrix(distances, train.labels)


@dataclass(frozen=True, eq=False)
class BinarySvm:
    """Solution of one binary SVM dual.

    Attributes:
        alpha: Dual coefficients, 0 <= alpha_i <= C.
        bias: Offset b of the decision function.
        converged: Whether the KKT gap fell below the tolerance.
        iterations: SMO iterations taken.

    """

    alpha: np.ndarray
    bias: float
    converged: bool
    iterations: int


def _violating_scores(
    alpha: np.ndarray, gradient: np.ndarray, targets: np.ndarray, c: float
) -> tuple[np.ndarray, np.ndarray]:
    """Scores -y G restricted to I_up (others -inf) and I_low (others +inf)."""
    score = -targets * gradient
    positive = targets > 0
    up = (positive & (alpha < c)) | (~positive & (alpha > 0))
    low = (positive & (alpha > 0)) | (~positive & (alpha < c))
    return np.where(up, score, -np.inf), np.where(low, score, np.inf)


def smo_binary(
    gram: np.ndarray,
    targets: np.ndarray,
    c: float = DEFAULT_SVM_C,
    tol: float = DEFAULT_SVM_TOL,
    max_iter: int = SMO_MAX_ITER,
) -> BinarySvm:
    """Solve a binary SVM dual by sequential minimal optimization.

    Each step picks the maximal KKT-violating pair (i in I_up with the largest
    -y G, j in I_low with the smallest) and stops once the gap is below tol.
    Non-positive curvature is replaced by a small tau, so indefinite Gram
    matrices still make progress.

    Args:
        gram: Training kernel matrix.
        targets: Labels in {-1, +1}.
        c: Box constraint C > 0.
        tol: KKT tolerance.
        max_iter: Iteration cap.

    Returns:
        The dual solution; converged is False if the cap was hit.

    """
    y = np.asarray(targets, dtype=float)
    count = y.shape[0]
    alpha = np.zeros(count)
    gradient = -np.ones(count)
    converged = False
    iterations = 0
    while iterations < max_iter:
        up_scores, low_scores = _violating_scores(alpha, gradient, y, c)
        i = int(np.argmax(up_scores))
        j = int(np.argmin(low_scores))
        gap = up_scores[i] - low_scores[j]
        if not np.isfinite(gap) or gap < tol:
            converged = True
            break
        curvature = gram[i, i] + gram[j, j] - 2.0 * gram[i, j]
        if curvature <= 0:
            curvature = SMO_TAU
        bound_i = c - alpha[i] if y[i] > 0 else alpha[i]
        bound_j = alpha[j] if y[j] > 0 else c - alpha[j]
        step = min(gap / curvature, bound_i, bound_j)
        alpha[i] = min(max(alpha[i] + y[i] * step, 0.0), c)
        alpha[j] = min(max(alpha[j] - y[j] * step, 0.0), c)
        gradient += y * step * (gram[:, i] - gram[:, j])
        iterations += 1

    free = (alpha > 0) & (alpha < c)
    if free.any():
        bias = float(np.mean(-y[free] * gradient[free]))
    else:
        up_scores, low_scores = _violating_scores(alpha, gradient, y, c)
        finite = [
            v for v in (up_scores.max(), low_scores.min()) if np.isfinite(v)
        ]
        bias = float(np.mean(finite)) if finite else 0.0
    return BinarySvm(alpha=alpha, bias=bias, converged=converged, iterations=iterations)


def _one_vs_rest_targets(labels: Sequence[str], classes: Sequence[str]) -> np.ndarray:
    names = np.asarray(labels)
    return np.vstack([np.where(names == label, 1.0, -1.0) for label in classes])


def svm_fit_gram(  # noqa: PLR0913
    gram: np.ndarray,
    labels: Sequence[str],
    classes: Sequence[str],
    c: float = DEFAULT_SVM_C,
    tol: float = DEFAULT_SVM_TOL,
    *,
    max_iter: int = SMO_MAX_ITER,
    workers: int | None = None,
) -> list[BinarySvm]:
    """Train one binary SVM per class on a precomputed Gram matrix."""
    targets = _one_vs_rest_targets(labels, classes)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(lambda y: smo_binary(gram, y, c, tol, max_iter), list(targets))
        )


def _decision_from_kernel(
    rows: np.ndarray,
    machines: Sequence[BinarySvm],
    targets: np.ndarray,
) -> np.ndarray:
    """Decision values sum_i alpha_i y_i k(d_i, q) + b, one column per class."""
    coefficients = np.vstack([m.alpha for m in machines]) * targets
    biases = np.array([m.bias for m in machines])
    return rows @ coefficients.T + biases


@dataclass(frozen=True, eq=False)
class SvmModel:
    """One-vs-rest SVM over a Gaussian divergence kernel.

    Attributes:
        train: Training descriptors and labels.
        kind: Divergence behind the kernel.
        kernel: Divergence kernel family and beta.
        c: Box constraint.
        tol: KKT tolerance used in training.
        machines: One binary SVM per class, in sorted class order.
        indefinite: Whether the training Gram failed the PSD check.
        min_eigenvalue: Smallest eigenvalue of the training Gram.
        clip_spectrum: Whether negative Gram eigenvalues were clipped.

    """

    train: LabeledSet
    kind: AnyDivergenceKind
    kernel: DivergenceKernelSpec
    c: float
    tol: float
    machines: tuple[BinarySvm, ...]
    indefinite: bool
    min_eigenvalue: float
    clip_spectrum: bool = False

    @property
    def classes(self) -> tuple[str, ...]:
        """Class labels in decision-value column order."""
        return self.train.classes

    @property
    def converged(self) -> bool:
        """Whether every binary problem converged."""
        return all(m.converged for m in self.machines)

    @cached_property
    def targets(self) -> np.ndarray:
        """One-vs-rest targets, one row per class."""
        return _one_vs_rest_targets(self.train.labels, self.classes)

    @property
    def alphas(self) -> np.ndarray:
        """Dual coefficients, one row per class."""
        return np.vstack([m.alpha for m in self.machines])

    @property
    def biases(self) -> np.ndarray:
        """Biases, one per class."""
        return np.array([m.bias for m in self.machines])

    def decision_from_kernel(self, rows: np.ndarray) -> np.ndarray:
        """Decision values from query x training kernel rows."""
        return _decision_from_kernel(np.atleast_2d(rows), self.machines, self.targets)


def _kernel_spec(kind: AnyDivergenceKind, beta: float) -> DivergenceKernelSpec:
    try:
        return DivergenceKernelSpec(kind=kernel_family(kind), beta=beta)
    except ValidationError as error:
        msg = f"invalid divergence kernel: {error}"
        raise ConfigError(msg) from error


def gram_min_eigenvalue(gram: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric Gram matrix."""
    return float(np.linalg.eigvalsh(0.5 * (gram + gram.T))[0])


def _clip(gram: np.ndarray) -> np.ndarray:
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (gram + gram.T))
    return (eigenvectors * np.maximum(eigenvalues, 0.0)) @ eigenvectors.T


def svm_train(  # noqa: PLR0913
    train: LabeledSet,
    kind: AnyDivergenceKind,
    beta: float,
    c: float = DEFAULT_SVM_C,
    tol: float = DEFAULT_SVM_TOL,
    *,
    force: bool = False,
    clip_spectrum: bool = False,
    strict: bool = False,
    max_iter: int = SMO_MAX_ITER,
    workers: int | None = None,
) -> SvmModel:
    """Train a one-vs-rest SVM with kernel exp(-beta d).

    The Gram matrix is used as is, indefinite or not; clip_spectrum replaces
    it by its PSD part for training only.

    Args:
        train: Labeled descriptors with at least two classes.
        kind: Symmetric divergence behind the kernel.
        beta: Kernel sharpness.
        c: Box constraint.
        tol: KKT tolerance.
        force: Train even when the Stein beta is outside the valid set.
        clip_spectrum: Clip negative Gram eigenvalues before training.
        strict: Raise instead of warning when SMO hits its iteration cap.
        max_iter: SMO iteration cap.
        workers: Thread count for divergences and binary problems.

    Returns:
        The trained model.

    Raises:
        DataError: If fewer than two classes are present.
        ConfigError: If the divergence is asymmetric or C, beta are invalid.
        SteinBetaInvalidError: If the Stein beta is invalid and not forced.
        NonConvergenceError: If strict and some binary problem did not converge.

    """
    if train.class_count < 2:  # noqa: PLR2004
        msg = f"SVM training needs at least two classes, got {train.class_count}"
        raise DataError(msg)
    if c <= 0 or tol <= 0:
        msg = f"need C > 0 and tol > 0, got C={c}, tol={tol}"
        raise ConfigError(msg)
    spec = _kernel_spec(kind, beta)
    check_kernel_beta(spec, train.dimension, force=force)
    distances = divergence_matrix(train.descriptors, kind, workers=workers)
    gram = gaussian_kernel_matrix(distances, spec, train.dimension, force=True)
    min_eigenvalue = gram_min_eigenvalue(gram)
    indefinite = min_eigenvalue < -GRAM_PSD_TOL * float(np.trace(gram))
    if indefinite:
        logger.warning(
            "Training Gram is indefinite (min eigenvalue {:.3g})", min_eigenvalue
        )
    solve_gram = _clip(gram) if clip_spectrum and indefinite else gram
    machines = svm_fit_gram(
        solve_gram,
        train.labels,
        train.classes,
        c,
        tol,
        max_iter=max_iter,
        workers=workers,
    )
    if not all(m.converged for m in machines):
        msg = f"SMO hit the iteration cap of {max_iter}"
        if strict:
            raise NonConvergenceError(msg)
        logger.warning("{}; keeping the best-so-far solution", msg)
    logger.debug(
        "Trained SVM on {} samples, {} classes, beta={}, C={}",
        len(train),
        train.class_count,
        beta,
        c,
    )
    return SvmModel(
        train=train,
        kind=kind,
        kernel=spec,
        c=c,
        tol=tol,
        machines=tuple(machines),
        indefinite=bool(indefinite),
        min_eigenvalue=min_eigenvalue,
        clip_spectrum=clip_spectrum,
    )


def svm_decision_values(
    model: SvmModel,
    queries: Sequence[Descriptor],
    *,
    workers: int | None = None,
) -> np.ndarray:
    """Decision values of every query, one column per class."""
    if not queries:
        return np.zeros((0, len(model.classes)))
    distances = cross_divergence_matrix(
        queries, model.train.descriptors, model.kind, workers=workers
    )
    rows = gaussian_kernel_matrix(
        distances, model.kernel, model.train.dimension, force=True
    )
    return model.decision_from_kernel(rows)


def svm_predict_many(
    model: SvmModel,
    queries: Sequence[Descriptor],
    *,
    workers: int | None = None,
) -> list[str]:
    """Argmax of decision values; ties go to the first class in sorted order."""
    values = svm_decision_values(model, queries, workers=workers)
    return [model.classes[int(i)] for i in np.argmax(values, axis=1)]


def svm_predict(model: SvmModel, query: Descriptor) -> str:
    """Predict the class of one descriptor."""
    return svm_predict_many(model, [query])[0]


def fold_assignment(count: int, folds: int, seed: int) -> np.ndarray:
    """Seeded fold id for each of count samples (round-robin over a permutation)."""
    order = np.random.default_rng(seed).permutation(count)
    assignment = np.empty(count, dtype=int)
    assignment[order] = np.arange(count) % folds
    return assignment


def _grid_points(
    grid: CvGrid, *, rkhs: bool, rbf: bool, svm: bool
) -> list[GridPoint]:
    for name in ("sigma", "r", "beta", "c"):
        if getattr(grid, name) == []:
            msg = f"cross-validation grid list {name!r} is empty"
            raise EmptyGridError(msg)
    rs = grid.r if rkhs and grid.r else [None]
    sigmas = grid.sigma if rkhs and rbf and grid.sigma else [None]
    betas = grid.beta if svm and grid.beta else [None]
    cs = grid.c if svm and grid.c else [None]
    points = [
        GridPoint(r=r, sigma=sigma, beta=beta, c=c)
        for r, sigma, beta, c in itertools.product(rs, sigmas, betas, cs)
    ]
    return sorted(points, key=GridPoint.sort_key)


def _refit(
    train: LabeledSet,
    point: GridPoint,
    rho: float | None,
    rho_scale: float,
    workers: int | None,
) -> LabeledSet:
    if not train.is_rkhs or (point.r is None and point.sigma is None):
        return train
    base = train.descriptors[0].kernel
    kernel = base.with_sigma(point.sigma) if point.sigma is not None else base
    r = point.r if point.r is not None else max(d.rank for d in train.descriptors)
    refitted = fit_rkhs_covds(
        kernel,
        [d.observations for d in train.descriptors],
        r,
        rho,
        rho_scale=rho_scale,
        workers=workers,
    )
    return LabeledSet(tuple(refitted), train.labels)


def _split_accuracy(  # noqa: PLR0913
    distances: np.ndarray,
    labels: Sequence[str],
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    spec: DivergenceKernelSpec | None,
    c: float,
    tol: float,
) -> float:
    train_labels = [labels[i] for i in train_idx]
    truth = [labels[i] for i in test_idx]
    block = distances[np.ix_(test_idx, train_idx)]
    if spec is None:
        predicted = nn_predict_from_matrix(block, train_labels)
    else:
        classes = sorted(set(train_labels))
        gram = gaussian_kernel_matrix(
            distances[np.ix_(train_idx, train_idx)], spec, force=True
        )
        machines = svm_fit_gram(gram, train_labels, classes, c, tol)
        rows = gaussian_kernel_matrix(block, spec, force=True)
        values = _decision_from_kernel(
            rows, machines, _one_vs_rest_targets(train_labels, classes)
        )
        predicted = [classes[int(i)] for i in np.argmax(values, axis=1)]
    return sum(t == p for t, p in zip(truth, predicted, strict=True)) / len(truth)


def cross_validate(  # noqa: PLR0913, C901
    train: LabeledSet,
    grid: CvGrid,
    folds: int,
    *,
    kind: AnyDivergenceKind,
    svm: bool = False,
    beta: float = 1.0,
    c: float = DEFAULT_SVM_C,
    tol: float = DEFAULT_SVM_TOL,
    seed: int = 0,
    rho: float | None = None,
    rho_scale: float = 1e-6,
    force: bool = False,
    workers: int | None = None,
) -> CrossValidationResult:
    """Exhaustive k-fold grid search over (r, sigma, beta, C).

    Descriptors are refitted once per (r, sigma) and every divergence is
    computed once per refit. A fold whose training part misses a class of
    the full set, or whose test part is empty, is skipped with a warning.
    The best point has the highest mean fold accuracy; ties go to the
    smaller r, then sigma, then beta, then C.

    Args:
        train: Labeled descriptors; RKHS descriptors keep their observations
            so they can be refitted.
        grid: Lists of values to try; omitted lists keep current values.
        folds: Number of folds, k >= 2.
        kind: Divergence.
        svm: Cross-validate the SVM instead of NN.
        beta: SVM beta used when the grid has no beta list.
        c: SVM C used when the grid has no C list.
        tol: SVM tolerance.
        seed: Seed of the fold assignment.
        rho: Common rho for refits (None = pooled default).
        rho_scale: Relative rho for refits.
        force: Allow invalid Stein betas.
        workers: Thread count.

    Returns:
        The best grid point with its fold scores and the full score list.

    Raises:
        ConfigError: If folds < 2.
        EmptyGridError: If a grid list is empty.
        DataError: If every fold had to be skipped.

    """
    if folds < 2:  # noqa: PLR2004
        msg = f"cross-validation needs k >= 2 folds, got {folds}"
        raise ConfigError(msg)
    _require_training(train)
    rbf = train.is_rkhs and train.descriptors[0].kernel.kind == KernelKind.RBF
    points = _grid_points(grid, rkhs=train.is_rkhs, rbf=rbf, svm=svm)
    assignment = fold_assignment(len(train), folds, seed)
    all_classes = set(train.labels)
    splits = []
    skipped = 0
    for fold in range(folds):
        test_idx = np.flatnonzero(assignment == fold)
        train_idx = np.flatnonzero(assignment != fold)
        if test_idx.size == 0 or {train.labels[i] for i in train_idx} != all_classes:
            logger.warning("Skipping fold {}: empty test part or missing class", fold)
            skipped += 1
            continue
        splits.append((train_idx, test_idx))
    if not splits:
        msg = "every cross-validation fold was skipped"
        raise DataError(msg)

    cache: dict[tuple[int | None, float | None], np.ndarray] = {}
    scores: list[GridScore] = []
    best: GridScore | None = None
    for point in points:
        key = (point.r, point.sigma)
        if key not in cache:
            refitted = _refit(train, point, rho, rho_scale, workers)
            cache[key] = divergence_matrix(refitted.descriptors, kind, workers=workers)
        spec = None
        if svm:
            spec = _kernel_spec(kind, point.beta if point.beta is not None else beta)
            check_kernel_beta(spec, train.dimension, force=force)
        fold_scores = [
            _split_accuracy(
                cache[key],
                train.labels,
                train_idx,
                test_idx,
                spec,
                point.c if point.c is not None else c,
                tol,
            )
            for train_idx, test_idx in splits
        ]
        score = GridScore(
            point=point,
            mean_accuracy=exact_sum(fold_scores) / len(fold_scores),
            fold_scores=fold_scores,
        )
        logger.debug("Grid point {} mean accuracy {}", point, score.mean_accuracy)
        scores.append(score)
        if best is None or score.mean_accuracy > best.mean_accuracy:
            best = score
    return CrossValidationResult(
        best=best.point,
        mean_accuracy=best.mean_accuracy,
        fold_scores=best.fold_scores,
        evaluated=scores,
        skipped_folds=skipped,
    )


def random_partition_accuracy(  # noqa: PLR0913
    samples: LabeledSet,
    per_class_train: int,
    repeats: int,
    seed: int,
    *,
    kind: AnyDivergenceKind,
    svm: bool = False,
    beta: float = 1.0,
    c: float = DEFAULT_SVM_C,
    tol: float = DEFAULT_SVM_TOL,
    force: bool = False,
    workers: int | None = None,
) -> PartitionAccuracy:
    """Mean and spread of accuracy over repeated random class-wise splits.

    Each repeat draws per_class_train training samples from every class and
    tests on the rest. Divergences are computed once for the whole set.

    Raises:
        ConfigError: If per_class_train < 1 or repeats < 1.
        DataError: If some class has no sample left for testing.

    """
    if per_class_train < 1 or repeats < 1:
        msg = "need per_class_train >= 1 and repeats >= 1"
        raise ConfigError(msg)
    by_class = {
        label: np.flatnonzero(np.asarray(samples.labels) == label)
        for label in samples.classes
    }
    short = [k for k, v in by_class.items() if v.size <= per_class_train]
    if short:
        msg = f"classes {short} have no samples left for testing"
        raise DataError(msg)
    spec = None
    if svm:
        spec = _kernel_spec(kind, beta)
        check_kernel_beta(spec, samples.dimension, force=force)
    distances = divergence_matrix(samples.descriptors, kind, workers=workers)
    rng = np.random.default_rng(seed)
    accuracies = []
    for _ in range(repeats):
        train_parts, test_parts = [], []
        for label in samples.classes:
            shuffled = rng.permutation(by_class[label])
            train_parts.append(shuffled[:per_class_train])
            test_parts.append(shuffled[per_class_train:])
        accuracies.append(
            _split_accuracy(
                distances,
                samples.labels,
                np.concatenate(train_parts),
                np.concatenate(test_parts),
                spec,
                c,
                tol,
            )
        )
    mean = exact_sum(accuracies) / repeats
    spread = math.sqrt(exact_sum([(a - mean) ** 2 for a in accuracies]) / repeats)
    return PartitionAccuracy(mean=mean, std=spread, accuracies=accuracies)
