"""Bregman divergences between SPD matrices and Gaussian divergence kernels.

Traces such as Tr(C2^-1 C1) are computed from Cholesky factors through
triangular solves: with C1 = L1 L1' and C2 = L2 L2',
Tr(C2^-1 C1) = ||L2^-1 L1||_F^2.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
import numpy.typing as npt
import scipy.linalg
from loguru import logger
from pydantic import Field, model_validator

from pycovd.const import OBSERVATION_CLAMP_TOL, STEIN_BETA_TOL
from pycovd.exceptions import (
    CholeskyFailureError,
    ConfigError,
    DimensionMismatchError,
    SteinBetaInvalidError,
)
from pycovd.spd_core import check_symmetric, cholesky_factor, logdet_from_factor
from pycovd.utils.helpers import clamp_divergence
from pycovd.utils.models import FrozenModel


class DivergenceKind(str, Enum):
    """Bregman divergences on SPD matrices (and their RKHS counterparts)."""

    FROBENIUS_SQ = "frobenius_sq"
    BURG = "burg"
    JEFFREYS = "jeffreys"
    STEIN = "stein"

    @property
    def is_symmetric(self) -> bool:
        """Whether d(A, B) = d(B, A)."""
        return self != DivergenceKind.BURG


class PracticalKind(str, Enum):
    """rho-robust RKHS forms of the Jeffreys and Stein divergences."""

    JEFFREYS_HAT = "jeffreys_hat"
    STEIN_HAT = "stein_hat"

    @property
    def is_symmetric(self) -> bool:
        """Both practical forms are symmetric."""
        return True


AnyDivergenceKind = DivergenceKind | PracticalKind


def parse_divergence_kind(value: str | AnyDivergenceKind) -> AnyDivergenceKind:
    """Parse a divergence name into its enum member.

    Args:
        value: A member or its string value, e.g. "stein" or "stein_hat".

    Returns:
        The matching DivergenceKind or PracticalKind.

    Raises:
        ConfigError: If the name is unknown.

    """
    if isinstance(value, (DivergenceKind, PracticalKind)):
        return value
    for enum in (DivergenceKind, PracticalKind):
        try:
            return enum(value)
        except ValueError:
            continue
    msg = f"unknown divergence {value!r}"
    raise ConfigError(msg)


def kernel_family(kind: AnyDivergenceKind) -> DivergenceKind:
    """Map a divergence to the family its Gaussian kernel belongs to.

    Args:
        kind: Divergence used to build an SVM Gram matrix.

    Returns:
        FROBENIUS_SQ, JEFFREYS or STEIN.

    Raises:
        ConfigError: For Burg, which is asymmetric and has no Gaussian kernel.

    """
    families = {
        DivergenceKind.FROBENIUS_SQ: DivergenceKind.FROBENIUS_SQ,
        DivergenceKind.JEFFREYS: DivergenceKind.JEFFREYS,
        PracticalKind.JEFFREYS_HAT: DivergenceKind.JEFFREYS,
        DivergenceKind.STEIN: DivergenceKind.STEIN,
        PracticalKind.STEIN_HAT: DivergenceKind.STEIN,
    }
    if kind not in families:
        msg = f"{kind.value} is asymmetric and cannot define a Gaussian kernel"
        raise ConfigError(msg)
    return families[kind]


class DivergenceKernelSpec(FrozenModel):
    """Gaussian divergence kernel k(C1, C2) = exp(-beta d(C1, C2)).

    Attributes:
        kind: Divergence family (Jeffreys or Stein; Frobenius gives the plain
            Gaussian kernel).
        beta: Kernel sharpness, beta > 0.

    """

    kind: DivergenceKind
    beta: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _check_kind(self) -> DivergenceKernelSpec:
        if self.kind == DivergenceKind.BURG:
            msg = "Burg divergence cannot define a Gaussian kernel"
            raise ValueError(msg)
        return self


def _pair(c1: npt.ArrayLike, c2: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    first = check_symmetric(c1, "C1")
    second = check_symmetric(c2, "C2")
    if first.shape != second.shape:
        msg = f"dimension mismatch: {first.shape} vs {second.shape}"
        raise DimensionMismatchError(msg)
    return first, second


def _factor(c: np.ndarray, name: str) -> np.ndarray:
    try:
        return cholesky_factor(c)
    except CholeskyFailureError as error:
        msg = f"{name} is not positive definite"
        raise CholeskyFailureError(msg) from error


def _solved_trace(lower: np.ndarray, rhs_factor: np.ndarray) -> float:
    """Return ||lower^-1 rhs_factor||_F^2 = Tr((L L')^-1 R R')."""
    solved = scipy.linalg.solve_triangular(
        lower, rhs_factor, lower=True, check_finite=False
    )
    return float(np.sum(solved * solved))


def frobenius_sq(c1: npt.ArrayLike, c2: npt.ArrayLike) -> float:
    """Squared Frobenius distance ||C1 - C2||_F^2 (PSD inputs allowed).

    Examples:
        >>> frobenius_sq(2 * np.eye(2), np.eye(2))
        2.0

    """
    first, second = _pair(c1, c2)
    difference = first - second
    return float(np.sum(difference * difference))


def burg(c1: npt.ArrayLike, c2: npt.ArrayLike) -> float:
    """Burg divergence Tr(C1 C2^-1) - logdet(C1 C2^-1) - n.

    Asymmetric in its arguments.

    Args:
        c1: First SPD matrix.
        c2: Second SPD matrix.

    Returns:
        The non-negative divergence.

    Raises:
        CholeskyFailureError: If either matrix is not positive definite.

    """
    first, second = _pair(c1, c2)
    l1 = _factor(first, "C1")
    l2 = _factor(second, "C2")
    trace = _solved_trace(l2, l1)
    logdet_ratio = logdet_from_factor(l1) - logdet_from_factor(l2)
    n = first.shape[0]
    value = trace - logdet_ratio - n
    scale = abs(trace) + abs(logdet_ratio) + n
    return clamp_divergence(value, scale, OBSERVATION_CLAMP_TOL, "burg")


def jeffreys(c1: npt.ArrayLike, c2: npt.ArrayLike) -> float:
    """Jeffreys divergence 1/2 Tr(C1 C2^-1) + 1/2 Tr(C2 C1^-1) - n.

    Raises:
        CholeskyFailureError: If either matrix is not positive definite.

    """
    first, second = _pair(c1, c2)
    l1 = _factor(first, "C1")
    l2 = _factor(second, "C2")
    forward = _solved_trace(l2, l1)
    backward = _solved_trace(l1, l2)
    n = first.shape[0]
    value = 0.5 * forward + 0.5 * backward - n
    scale = 0.5 * (forward + backward) + n
    return clamp_divergence(value, scale, OBSERVATION_CLAMP_TOL, "jeffreys")


def stein(c1: npt.ArrayLike, c2: npt.ArrayLike) -> float:
    """Stein (Jensen-Bregman LogDet) divergence.

    logdet((C1 + C2)/2) - 1/2 logdet(C1 C2).

    Raises:
        CholeskyFailureError: If either matrix is not positive definite.

    Examples:
        >>> round(stein(2 * np.eye(2), np.eye(2)), 6)
        0.117783

    """
    first, second = _pair(c1, c2)
    logdet_1 = logdet_from_factor(_factor(first, "C1"))
    logdet_2 = logdet_from_factor(_factor(second, "C2"))
    logdet_mean = logdet_from_factor(_factor(0.5 * (first + second), "(C1 + C2)/2"))
    value = logdet_mean - 0.5 * (logdet_1 + logdet_2)
    scale = abs(logdet_mean) + 0.5 * (abs(logdet_1) + abs(logdet_2))
    return clamp_divergence(value, scale, OBSERVATION_CLAMP_TOL, "stein")


_OBSERVATION_DIVERGENCES = {
    DivergenceKind.FROBENIUS_SQ: frobenius_sq,
    DivergenceKind.BURG: burg,
    DivergenceKind.JEFFREYS: jeffreys,
    DivergenceKind.STEIN: stein,
}


def divergence(kind: DivergenceKind, c1: npt.ArrayLike, c2: npt.ArrayLike) -> float:
    """Evaluate an observation-space divergence by kind.

    Raises:
        ConfigError: If the kind has no observation-space form.

    """
    if kind not in _OBSERVATION_DIVERGENCES:
        msg = f"{kind.value} is only defined between RKHS descriptors"
        raise ConfigError(msg)
    return _OBSERVATION_DIVERGENCES[kind](c1, c2)


def is_valid_stein_beta(n: int, beta: float) -> bool:
    """Check whether exp(-beta S) is positive definite on n x n SPD matrices.

    Valid betas are the half-integers 1/2, 1, ..., (n-1)/2 and every
    beta > (n-1)/2.

    Args:
        n: Matrix dimension, n >= 1.
        beta: Kernel sharpness, beta > 0.

    Returns:
        True if beta lies in the valid set.

    Raises:
        ConfigError: If n < 1 or beta <= 0.

    Examples:
        >>> is_valid_stein_beta(4, 1.25)
        False
        >>> is_valid_stein_beta(2, 0.75)
        True

    """
    if n < 1 or beta <= 0:
        msg = f"need n >= 1 and beta > 0, got n={n}, beta={beta}"
        raise ConfigError(msg)
    if beta > (n - 1) / 2:
        return True
    twice = 2.0 * beta
    nearest = round(twice)
    return nearest >= 1 and abs(twice - nearest) <= 2.0 * STEIN_BETA_TOL


def is_valid_stein_beta_rkhs(beta: float) -> bool:
    """Check beta for an infinite-dimensional RKHS: only half-integers remain."""
    if beta <= 0:
        msg = f"need beta > 0, got {beta}"
        raise ConfigError(msg)
    twice = 2.0 * beta
    nearest = round(twice)
    return nearest >= 1 and abs(twice - nearest) <= 2.0 * STEIN_BETA_TOL


def check_kernel_beta(
    spec: DivergenceKernelSpec,
    dimension: int | None,
    *,
    force: bool = False,
) -> bool:
    """Check the Stein beta condition for a divergence kernel.

    Args:
        spec: The divergence kernel.
        dimension: Matrix dimension n, or None for an infinite-dimensional RKHS.
        force: Proceed with a warning instead of raising.

    Returns:
        True if the kernel is known to be positive definite.

    Raises:
        SteinBetaInvalidError: If beta is invalid and force is False.

    """
    if spec.kind != DivergenceKind.STEIN:
        return True
    valid = (
        is_valid_stein_beta_rkhs(spec.beta)
        if dimension is None
        else is_valid_stein_beta(dimension, spec.beta)
    )
    if valid:
        return True
    where = "RKHS" if dimension is None else f"n={dimension}"
    msg = f"Stein kernel beta={spec.beta} is not positive definite for {where}"
    if not force:
        raise SteinBetaInvalidError(msg)
    logger.warning("{}; proceeding because force is set", msg)
    return False


def divergence_gaussian_kernel(
    d: float,
    spec: DivergenceKernelSpec,
    dimension: int | None = None,
    *,
    force: bool = False,
) -> float:
    """Evaluate exp(-beta d).

    Args:
        d: Divergence value, d >= 0.
        spec: Kernel family and beta.
        dimension: Matrix dimension for the Stein beta check (None = RKHS).
        force: Evaluate even when the Stein beta is invalid.

    Returns:
        A value in (0, 1].

    Raises:
        ConfigError: If d is negative.
        SteinBetaInvalidError: If the Stein beta is invalid and not forced.

    """
    if d < 0 or not math.isfinite(d):
        msg = f"divergence must be finite and non-negative, got {d}"
        raise ConfigError(msg)
    check_kernel_beta(spec, dimension, force=force)
    return math.exp(-spec.beta * d)


def gaussian_kernel_matrix(
    distances: npt.ArrayLike,
    spec: DivergenceKernelSpec,
    dimension: int | None = None,
    *,
    force: bool = False,
) -> np.ndarray:
    """Apply the divergence kernel to a whole divergence matrix.

    Raises:
        ConfigError: If any divergence is negative or non-finite.
        SteinBetaInvalidError: If the Stein beta is invalid and not forced.

    """
    matrix = np.asarray(distances, dtype=np.float64)
    if not np.all(np.isfinite(matrix)) or np.any(matrix < 0):
        msg = "divergence matrix must be finite and non-negative"
        raise ConfigError(msg)
    check_kernel_beta(spec, dimension, force=force)
    return np.exp(-spec.beta * matrix)


def covariance_many(observations: npt.ArrayLike) -> np.ndarray:
    """Covariance descriptors of a stack of observation sets.

    Args:
        observations: Array of shape (P, n, m).

    Returns:
        Array of shape (P, n, n).

    """
    stack = np.asarray(observations, dtype=np.float64)
    centered = stack - stack.mean(axis=2, keepdims=True)
    covariances = centered @ np.swapaxes(centered, 1, 2) / stack.shape[2]
    return 0.5 * (covariances + np.swapaxes(covariances, 1, 2))


def _stacked_factors(stack: np.ndarray, name: str) -> np.ndarray:
    try:
        return np.linalg.cholesky(stack)
    except np.linalg.LinAlgError as error:
        msg = f"a matrix in {name} is not positive definite"
        raise CholeskyFailureError(msg) from error


def _stacked_logdet(factors: np.ndarray) -> np.ndarray:
    return 2.0 * np.sum(np.log(np.diagonal(factors, axis1=1, axis2=2)), axis=1)


def _stacked_solved_trace(lower: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    solved = np.linalg.solve(lower, rhs)
    return np.sum(solved * solved, axis=(1, 2))


def stein_many(c1s: npt.ArrayLike, c2s: npt.ArrayLike) -> np.ndarray:
    """Stein divergences between paired stacks of SPD matrices.

    Args:
        c1s: Array of shape (P, n, n).
        c2s: Array of shape (P, n, n).

    Returns:
        Length-P vector of divergences, round-off negatives clamped to 0.

    """
    first = np.asarray(c1s, dtype=np.float64)
    second = np.asarray(c2s, dtype=np.float64)
    if first.shape != second.shape:
        msg = f"stack shapes differ: {first.shape} vs {second.shape}"
        raise DimensionMismatchError(msg)
    logdet_1 = _stacked_logdet(_stacked_factors(first, "C1"))
    logdet_2 = _stacked_logdet(_stacked_factors(second, "C2"))
    logdet_mean = _stacked_logdet(_stacked_factors(0.5 * (first + second), "mean"))
    values = logdet_mean - 0.5 * (logdet_1 + logdet_2)
    scale = np.abs(logdet_mean) + 0.5 * (np.abs(logdet_1) + np.abs(logdet_2))
    return np.array(
        [
            clamp_divergence(float(v), float(s), OBSERVATION_CLAMP_TOL, "stein")
            for v, s in zip(values, scale, strict=True)
        ]
    )


def jeffreys_many(c1s: npt.ArrayLike, c2s: npt.ArrayLike) -> np.ndarray:
    """Jeffreys divergences between paired stacks of SPD matrices.

    Args:
        c1s: Array of shape (P, n, n).
        c2s: Array of shape (P, n, n).

    Returns:
        Length-P vector of divergences, round-off negatives clamped to 0.

    """
    first = np.asarray(c1s, dtype=np.float64)
    second = np.asarray(c2s, dtype=np.float64)
    if first.shape != second.shape:
        msg = f"stack shapes differ: {first.shape} vs {second.shape}"
        raise DimensionMismatchError(msg)
    l1 = _stacked_factors(first, "C1")
    l2 = _stacked_factors(second, "C2")
    forward = _stacked_solved_trace(l2, l1)
    backward = _stacked_solved_trace(l1, l2)
    n = first.shape[1]
    values = 0.5 * (forward + backward) - n
    scale = 0.5 * (forward + backward) + n
    return np.array(
        [
            clamp_divergence(float(v), float(s), OBSERVATION_CLAMP_TOL, "jeffreys")
            for v, s in zip(values, scale, strict=True)
        ]
    )
