"""Dense symmetric linear algebra and finite covariance descriptors.

Every matrix is symmetrized as (A + A')/2 before it reaches an eigensolver or
a Cholesky factorization; log-determinants are always taken from Cholesky
factors and determinants are never formed.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
import scipy.linalg
from loguru import logger

from pycovd.const import CHOLESKY_JITTER, RANK_EPS, SYMMETRY_TOL
from pycovd.exceptions import (
    CholeskyFailureError,
    DimensionMismatchError,
    EigenDecompositionError,
    InvalidObservationError,
)
from pycovd.models.observation import EigDecomposition, ObservationSet


def as_square(a: npt.ArrayLike, name: str = "matrix") -> np.ndarray:
    """Convert to a finite float64 square matrix.

    Args:
        a: Matrix-like input.
        name: Label used in error messages.

    Returns:
        The matrix as a float64 array.

    Raises:
        DimensionMismatchError: If the input is not square.
        InvalidObservationError: If the input has NaN or Inf entries.

    """
    array = np.asarray(a, dtype=np.float64)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:  # noqa: PLR2004
        msg = f"{name} must be square, got shape {array.shape}"
        raise DimensionMismatchError(msg)
    if not np.all(np.isfinite(array)):
        msg = f"{name} contains NaN or Inf"
        raise InvalidObservationError(msg)
    return array


def symmetrize(a: npt.ArrayLike) -> np.ndarray:
    """Return (A + A') / 2."""
    array = as_square(a)
    return 0.5 * (array + array.T)


def check_symmetric(a: npt.ArrayLike, name: str = "matrix") -> np.ndarray:
    """Check symmetry within max|A - A'| <= 1e-12 max|A| and symmetrize.

    Args:
        a: Matrix to check.
        name: Label used in error messages.

    Returns:
        The symmetrized matrix.

    Raises:
        InvalidObservationError: If the asymmetry exceeds the tolerance.

    """
    array = as_square(a, name)
    scale = float(np.max(np.abs(array))) if array.size else 0.0
    asymmetry = float(np.max(np.abs(array - array.T))) if array.size else 0.0
    if asymmetry > SYMMETRY_TOL * scale:
        msg = f"{name} is not symmetric (max |A - A'| = {asymmetry:.3g})"
        raise InvalidObservationError(msg)
    return 0.5 * (array + array.T)


def centering_matrix(m: int) -> np.ndarray:
    """Build J = m^(-3/2) (m I - 1).

    J J' = (1/m)(I - 1/m), so X J J' X' is the mean-centered covariance.

    Args:
        m: Observation count, m >= 1.

    Returns:
        The m x m centering matrix.

    Examples:
        >>> centering_matrix(1)
        array([[0.]])

    """
    if m < 1:
        msg = f"centering matrix needs m >= 1, got {m}"
        raise DimensionMismatchError(msg)
    return (m * np.eye(m) - np.ones((m, m))) * m**-1.5


def covariance_descriptor(x: ObservationSet) -> np.ndarray:
    """Compute C = X J J' X' = (1/m) sum (x_i - mu)(x_i - mu)'.

    Args:
        x: Observation set with n feature rows and m observation columns.

    Returns:
        The n x n positive semidefinite covariance descriptor.

    """
    data = x.data
    centered = data - data.mean(axis=1, keepdims=True)
    return symmetrize(centered @ centered.T / x.m)


def sym_eig(a: npt.ArrayLike) -> EigDecomposition:
    """Eigendecompose a symmetric matrix.

    Eigenvalues are returned in descending order; each eigenvector is signed
    so that its largest-magnitude component is positive, which makes the
    output byte-stable across runs.

    Args:
        a: Symmetric matrix (symmetrized before solving).

    Returns:
        The eigendecomposition.

    Raises:
        EigenDecompositionError: If the eigensolver does not converge.

    """
    matrix = symmetrize(a)
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(matrix)
    except (np.linalg.LinAlgError, ValueError) as error:
        msg = f"symmetric eigensolver failed: {error}"
        raise EigenDecompositionError(msg) from error
    eigenvalues = eigenvalues[::-1].copy()
    eigenvectors = eigenvectors[:, ::-1].copy()
    if eigenvectors.size:
        pivots = np.argmax(np.abs(eigenvectors), axis=0)
        signs = np.sign(eigenvectors[pivots, np.arange(eigenvectors.shape[1])])
        signs[signs == 0] = 1.0
        eigenvectors *= signs
    return EigDecomposition(eigenvalues, eigenvectors)


def numerical_rank(eigenvalues: npt.ArrayLike, eps: float = RANK_EPS) -> int:
    """Count eigenvalues above eps * lambda_max.

    Args:
        eigenvalues: Eigenvalues in any order.
        eps: Relative threshold.

    Returns:
        The number of eigenvalues treated as positive; 0 if lambda_max <= 0.

    """
    values = np.asarray(eigenvalues, dtype=float)
    if values.size == 0:
        return 0
    top = float(values.max())
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(values > eps * top))


def cholesky_factor(a: npt.ArrayLike, *, jitter: bool = False) -> np.ndarray:
    """Return the lower Cholesky factor of a positive definite matrix.

    Args:
        a: Symmetric positive definite matrix.
        jitter: Retry once with 1e-12 * trace(A) added to the diagonal.

    Returns:
        Lower-triangular L with A = L L'.

    Raises:
        CholeskyFailureError: If A is not positive definite.

    """
    matrix = symmetrize(a)
    try:
        return scipy.linalg.cholesky(matrix, lower=True, check_finite=False)
    except np.linalg.LinAlgError as error:
        if not jitter:
            msg = f"matrix of size {matrix.shape[0]} is not positive definite"
            raise CholeskyFailureError(msg) from error
        shift = CHOLESKY_JITTER * float(np.trace(matrix))
        logger.debug("Cholesky failed, retrying with diagonal jitter {}", shift)
        try:
            return scipy.linalg.cholesky(
                matrix + shift * np.eye(matrix.shape[0]), lower=True, check_finite=False
            )
        except np.linalg.LinAlgError as retry_error:
            msg = (
                f"matrix of size {matrix.shape[0]} is not positive definite "
                f"even with jitter {shift:.3g}"
            )
            raise CholeskyFailureError(msg) from retry_error


def logdet_from_factor(factor: np.ndarray) -> float:
    """Return log det(L L') = 2 sum log L_ii."""
    return 2.0 * float(np.sum(np.log(np.diag(factor))))


def cholesky_logdet(a: npt.ArrayLike, *, jitter: bool = False) -> float:
    """Compute log det A through a Cholesky factorization.

    Args:
        a: Symmetric positive definite matrix.
        jitter: Allow a single jittered retry.

    Returns:
        log det A, without forming det A.

    Raises:
        CholeskyFailureError: If A is not positive definite.

    Examples:
        >>> round(cholesky_logdet(np.diag([2.0, 2.0])), 6)
        1.386294

    """
    return logdet_from_factor(cholesky_factor(a, jitter=jitter))


def spd_inverse(a: npt.ArrayLike) -> np.ndarray:
    """Invert a positive definite matrix via Cholesky solves.

    Args:
        a: Symmetric positive definite matrix.

    Returns:
        The symmetric inverse.

    Raises:
        CholeskyFailureError: If A is not positive definite.

    """
    matrix = symmetrize(a)
    try:
        factor = scipy.linalg.cho_factor(matrix, lower=True, check_finite=False)
    except np.linalg.LinAlgError as error:
        msg = f"matrix of size {matrix.shape[0]} is not positive definite"
        raise CholeskyFailureError(msg) from error
    inverse = scipy.linalg.cho_solve(factor, np.eye(matrix.shape[0]))
    return 0.5 * (inverse + inverse.T)
