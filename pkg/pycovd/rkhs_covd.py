"""Kernel evaluation and fitting of regularized RKHS covariance descriptors.

A descriptor keeps the observations X together with W and Lambda such that
the regularized covariance operator is C = Phi W W' Phi' + rho I, where Phi
holds the (implicit) feature maps of the columns of X. The eigenpairs
(Lambda, V) come from the centered Gram matrix J' K J and
W = J V (I - rho Lambda^-1)^(1/2); the fit guarantees W' K W = Lambda - rho I.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.spatial.distance import cdist, pdist

from pycovd.const import DEFAULT_RHO_SCALE, MEDIAN_HEURISTIC_MAX_POINTS
from pycovd.exceptions import (
    ConfigError,
    DimensionMismatchError,
    RankDeficientError,
    RhoTooLargeError,
)
from pycovd.models.kernel import KernelKind, KernelSpec
from pycovd.models.observation import ObservationSet
from pycovd.spd_core import centering_matrix, numerical_rank, sym_eig, symmetrize
from pycovd.utils.helpers import array_fingerprint
from pycovd.utils.log_utils import format_array_summary

if TYPE_CHECKING:
    from collections.abc import Sequence


def _columns(x: ObservationSet | npt.ArrayLike) -> np.ndarray:
    if isinstance(x, ObservationSet):
        return x.data
    array = np.asarray(x, dtype=np.float64)
    if array.ndim == 1:
        array = array[:, None]
    if array.ndim != 2:  # noqa: PLR2004
        msg = f"observations must be an n x m matrix, got shape {array.shape}"
        raise DimensionMismatchError(msg)
    return array


def _require_resolved(spec: KernelSpec) -> None:
    if not spec.is_resolved:
        msg = "RBF sigma is unresolved; call median_heuristic_sigma first"
        raise ConfigError(msg)


def kernel_eval(spec: KernelSpec, x: npt.ArrayLike, y: npt.ArrayLike) -> float:
    """Evaluate k(x, y) for two vectors.

    Examples:
        >>> kernel_eval(KernelSpec.linear(), [1, 2], [3, 4])
        11.0

    """
    first = np.asarray(x, dtype=np.float64).ravel()
    second = np.asarray(y, dtype=np.float64).ravel()
    if first.shape != second.shape:
        msg = f"vector dimensions differ: {first.shape[0]} vs {second.shape[0]}"
        raise DimensionMismatchError(msg)
    return float(kernel_matrix(spec, first[:, None], second[:, None])[0, 0])


def kernel_matrix(
    spec: KernelSpec,
    x: ObservationSet | npt.ArrayLike,
    y: ObservationSet | npt.ArrayLike,
) -> np.ndarray:
    """Evaluate the m_X x m_Y kernel matrix between observation columns.

    Args:
        spec: Resolved kernel.
        x: n x m_X observations (ObservationSet or array).
        y: n x m_Y observations (ObservationSet or array).

    Returns:
        Matrix with entries k(x_i, y_j).

    Raises:
        DimensionMismatchError: If the feature dimensions differ.
        ConfigError: If the RBF bandwidth is unresolved.

    """
    _require_resolved(spec)
    first = _columns(x)
    second = _columns(y)
    if first.shape[0] != second.shape[0]:
        msg = f"feature dimensions differ: {first.shape[0]} vs {second.shape[0]}"
        raise DimensionMismatchError(msg)
    if spec.kind == KernelKind.LINEAR:
        return first.T @ second
    if spec.kind == KernelKind.POLYNOMIAL:
        return (first.T @ second + spec.offset) ** spec.degree
    squared = cdist(first.T, second.T, metric="sqeuclidean")
    return np.exp(-squared / (2.0 * spec.sigma**2))


def median_heuristic_sigma(
    sets: Sequence[ObservationSet],
    *,
    seed: int = 0,
    max_points: int = MEDIAN_HEURISTIC_MAX_POINTS,
) -> float:
    """Median pairwise distance between pooled observations.

    Observations are pooled over all sets and subsampled to at most
    max_points columns with a seeded generator.

    Args:
        sets: Training observation sets.
        seed: Seed for the subsampling.
        max_points: Cap on pooled observations.

    Returns:
        A positive RBF bandwidth.

    Raises:
        ConfigError: If the pool is empty or all observations coincide.

    """
    if not sets:
        msg = "median heuristic needs at least one observation set"
        raise ConfigError(msg)
    pooled = np.concatenate([s.data for s in sets], axis=1).T
    if pooled.shape[0] > max_points:
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(pooled.shape[0], size=max_points, replace=False))
        pooled = pooled[keep]
    sigma = float(np.median(pdist(pooled)))
    if sigma <= 0.0:
        msg = "median pairwise distance is zero; set sigma explicitly"
        raise ConfigError(msg)
    logger.debug("Median heuristic sigma {} over {} points", sigma, pooled.shape[0])
    return sigma


def resolve_kernel(
    spec: KernelSpec, sets: Sequence[ObservationSet], *, seed: int = 0
) -> KernelSpec:
    """Fill in an unresolved RBF bandwidth from the training pool."""
    if spec.is_resolved:
        return spec
    return spec.with_sigma(median_heuristic_sigma(sets, seed=seed))


def resolve_rho(
    eigenvalue_lists: Sequence[np.ndarray],
    rho: float | None = None,
    rho_scale: float = DEFAULT_RHO_SCALE,
) -> float:
    """Choose the common regularizer rho.

    Args:
        eigenvalue_lists: Retained eigenvalues of every descriptor in the pool.
        rho: Explicit rho; returned unchanged when given.
        rho_scale: Factor applied to the pooled mean eigenvalue otherwise.

    Returns:
        rho >= 0.

    Raises:
        ConfigError: If rho or rho_scale is negative, or the pool is empty.

    """
    if rho is not None:
        if rho < 0:
            msg = f"rho must be non-negative, got {rho}"
            raise ConfigError(msg)
        return float(rho)
    if rho_scale < 0:
        msg = f"rho_scale must be non-negative, got {rho_scale}"
        raise ConfigError(msg)
    pooled = np.concatenate([np.asarray(v, dtype=float) for v in eigenvalue_lists])
    if pooled.size == 0:
        msg = "cannot pool rho over an empty set of eigenvalues"
        raise ConfigError(msg)
    return float(rho_scale * pooled.mean())


@dataclass(frozen=True, eq=False)
class RkhsCovd:
    """Implicit regularized covariance descriptor in an RKHS.

    Attributes:
        kernel: The (resolved) reproducing kernel.
        observations: The fitted observation set, kept for cross-kernel matrices.
        weights: m x r matrix W.
        eigenvalues: Length-r vector Lambda, descending, all > rho.
        rho: Regularizer shared by every descriptor compared with this one.

    """

    kernel: KernelSpec
    observations: ObservationSet
    weights: np.ndarray
    eigenvalues: np.ndarray
    rho: float

    def __post_init__(self) -> None:
        """Store read-only arrays and check their shapes."""
        weights = np.array(self.weights, dtype=np.float64, copy=True)
        eigenvalues = np.array(self.eigenvalues, dtype=np.float64, copy=True)
        if weights.shape != (self.observations.m, eigenvalues.shape[0]):
            msg = (
                f"W has shape {weights.shape}, expected "
                f"({self.observations.m}, {eigenvalues.shape[0]})"
            )
            raise DimensionMismatchError(msg)
        weights.setflags(write=False)
        eigenvalues.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "eigenvalues", eigenvalues)

    @property
    def n(self) -> int:
        """Feature dimension of the observations."""
        return self.observations.n

    @property
    def m(self) -> int:
        """Observation count."""
        return self.observations.m

    @property
    def rank(self) -> int:
        """Retained rank r."""
        return self.eigenvalues.shape[0]

    @cached_property
    def gram(self) -> np.ndarray:
        """Kernel matrix K_XX."""
        return kernel_matrix(self.kernel, self.observations, self.observations)

    @cached_property
    def projected_gram(self) -> np.ndarray:
        """W' K_XX W, equal to Lambda - rho I for a consistent fit."""
        return symmetrize(self.weights.T @ self.gram @ self.weights)

    @cached_property
    def unregularized_weights(self) -> np.ndarray:
        """W at rho = 0, i.e. J V, recovered as W (I - rho Lambda^-1)^(-1/2)."""
        return self.weights / np.sqrt(1.0 - self.rho / self.eigenvalues)

    @cached_property
    def log_eigen_ratio(self) -> float:
        """Sum of log(lambda_i / rho) = logdet(rho^-1 Lambda)."""
        return float(np.sum(np.log(self.eigenvalues / self.rho)))

    @cached_property
    def fingerprint(self) -> str:
        """Content hash over kernel, rho and arrays."""
        return array_fingerprint(
            str(self.kernel),
            self.rho,
            self.observations.data,
            self.weights,
            self.eigenvalues,
        )

    def __repr__(self) -> str:
        """Represent the descriptor by its shapes and parameters."""
        return (
            f"RkhsCovd(kernel={self.kernel}, n={self.n}, m={self.m}, "
            f"r={self.rank}, rho={self.rho:.6g})"
        )


class _Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    basis: np.ndarray


def _centered_spectrum(
    spec: KernelSpec, x: ObservationSet, r: int, label: str
) -> _Spectrum:
    """Eigendecompose J' K J and keep the leading min(r, rank) eigenpairs."""
    center = centering_matrix(x.m)
    gram = kernel_matrix(spec, x, x)
    decomposition = sym_eig(center.T @ gram @ center)
    rank = numerical_rank(decomposition.eigenvalues)
    if rank == 0:
        msg = f"{label}: centered Gram matrix has no positive eigenvalue"
        raise RankDeficientError(msg)
    if rank < r:
        logger.warning(
            "{}: requested r={} but numerical rank is {}; truncating", label, r, rank
        )
    kept = decomposition.truncate(min(r, rank))
    logger.debug("{}: {}", label, format_array_summary("lambdas", kept.eigenvalues))
    return _Spectrum(kept.eigenvalues, center @ kept.eigenvectors)


def _assemble(
    spec: KernelSpec, x: ObservationSet, spectrum: _Spectrum, rho: float, label: str
) -> RkhsCovd:
    smallest = float(spectrum.eigenvalues[-1])
    if rho > 0 and rho >= smallest:
        msg = (
            f"{label}: rho={rho:.6g} is not below the smallest retained "
            f"eigenvalue {smallest:.6g}"
        )
        raise RhoTooLargeError(msg)
    weights = spectrum.basis * np.sqrt(1.0 - rho / spectrum.eigenvalues)
    return RkhsCovd(
        kernel=spec,
        observations=x,
        weights=weights,
        eigenvalues=spectrum.eigenvalues,
        rho=rho,
    )


def _check_request(r: int, rho: float | None) -> None:
    if r < 1:
        msg = f"rank request must be >= 1, got {r}"
        raise ConfigError(msg)
    if rho is not None and rho < 0:
        msg = f"rho must be non-negative, got {rho}"
        raise ConfigError(msg)


def fit_rkhs_covd(
    spec: KernelSpec,
    x: ObservationSet,
    r: int,
    rho: float | None = None,
    *,
    rho_scale: float = DEFAULT_RHO_SCALE,
) -> RkhsCovd:
    """Fit the regularized RKHS covariance descriptor of one observation set.

    Args:
        spec: Resolved kernel.
        x: Observation set.
        r: Rank cap; the fitted rank is min(r, numerical rank).
        rho: Regularizer; None selects rho_scale times the mean eigenvalue.
        rho_scale: Relative regularizer used when rho is None.

    Returns:
        The fitted descriptor.

    Raises:
        ConfigError: If r < 1, rho < 0 or the kernel is unresolved.
        RankDeficientError: If the centered Gram matrix is zero.
        RhoTooLargeError: If rho is not below the smallest retained eigenvalue.

    """
    _check_request(r, rho)
    _require_resolved(spec)
    spectrum = _centered_spectrum(spec, x, r, "descriptor")
    chosen = resolve_rho([spectrum.eigenvalues], rho, rho_scale)
    return _assemble(spec, x, spectrum, chosen, "descriptor")


def fit_rkhs_covds(  # noqa: PLR0913
    spec: KernelSpec,
    sets: Sequence[ObservationSet],
    r: int,
    rho: float | None = None,
    *,
    rho_scale: float = DEFAULT_RHO_SCALE,
    seed: int = 0,
    workers: int | None = None,
) -> list[RkhsCovd]:
    """Fit descriptors for a pool of observation sets with one common rho.

    An unresolved RBF bandwidth is set by the median heuristic on the pool.
    When rho is None it is rho_scale times the mean retained eigenvalue over
    the whole pool.

    Args:
        spec: Kernel, possibly with an unresolved bandwidth.
        sets: Observation sets to fit.
        r: Rank cap.
        rho: Common regularizer, or None for the pooled default.
        rho_scale: Relative regularizer used when rho is None.
        seed: Seed for the median-heuristic subsampling.
        workers: Thread count for the eigendecompositions (None = default).

    Returns:
        Descriptors in input order.

    Raises:
        ConfigError: If r < 1 or rho < 0.
        RankDeficientError: If some centered Gram matrix is zero.
        RhoTooLargeError: If rho is not below every retained eigenvalue.

    """
    _check_request(r, rho)
    if not sets:
        return []
    resolved = resolve_kernel(spec, sets, seed=seed)

    def decompose(item: tuple[int, ObservationSet]) -> _Spectrum:
        index, x = item
        return _centered_spectrum(resolved, x, r, f"sample {index}")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        spectra = list(pool.map(decompose, enumerate(sets)))
    chosen = resolve_rho([s.eigenvalues for s in spectra], rho, rho_scale)
    logger.debug(
        "Fitting {} descriptors with kernel {} and common rho {}",
        len(sets),
        resolved,
        chosen,
    )
    return [
        _assemble(resolved, x, spectrum, chosen, f"sample {index}")
        for index, (x, spectrum) in enumerate(zip(sets, spectra, strict=True))
    ]


def weight_identity_residual(covd: RkhsCovd) -> float:
    """Return ||W' K W - (Lambda - rho I)||_F / ||Lambda||_F."""
    expected = np.diag(covd.eigenvalues - covd.rho)
    residual = np.linalg.norm(covd.projected_gram - expected)
    return float(residual / np.linalg.norm(covd.eigenvalues))
