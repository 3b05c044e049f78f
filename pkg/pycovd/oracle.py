"""Explicit feature-space references for finite-dimensional kernels.

For linear and polynomial kernels the feature map phi is a finite monomial
expansion, so the regularized covariance C = Phi W W' Phi' + rho I can be
materialized and compared with the kernel-side divergences. The verify
command runs its identity suite through this module.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement

import numpy as np
import numpy.typing as npt
from loguru import logger

from pycovd.const import ORACLE_MAX_FEATURE_DIM
from pycovd.divergences import DivergenceKind, divergence
from pycovd.exceptions import (
    DimensionMismatchError,
    FeatureDimTooLargeError,
    RhoMismatchError,
    UnsupportedKernelError,
)
from pycovd.models.kernel import KernelKind, KernelSpec
from pycovd.models.observation import ObservationSet
from pycovd.rkhs_covd import RkhsCovd, fit_rkhs_covd, kernel_matrix
from pycovd.spd_core import cholesky_logdet, spd_inverse, symmetrize


@dataclass(frozen=True)
class ExplicitMapKernel:
    """A linear or polynomial kernel together with its explicit feature map.

    Attributes:
        base: The kernel; RBF kernels are rejected.
        n: Input dimension.

    """

    base: KernelSpec
    n: int

    def __post_init__(self) -> None:
        """Reject kernels without a finite feature map."""
        if not self.base.has_explicit_map:
            msg = f"{self.base} has no finite explicit feature map"
            raise UnsupportedKernelError(msg)
        if self.n < 1:
            msg = f"input dimension must be >= 1, got {self.n}"
            raise DimensionMismatchError(msg)

    @cached_property
    def monomials(self) -> tuple[tuple[tuple[int, ...], float], ...]:
        """Index tuples of the augmented input with sqrt-multinomial weights.

        A polynomial kernel with offset c > 0 appends sqrt(c) as an extra
        coordinate, so (x'y + c)^d expands over degree-d monomials in n + 1
        variables.
        """
        if self.base.kind == KernelKind.LINEAR:
            return tuple(((i,), 1.0) for i in range(self.n))
        degree = self.base.degree
        variables = self.n + (1 if self.base.offset > 0 else 0)
        terms = []
        for combination in combinations_with_replacement(range(variables), degree):
            coefficient = math.factorial(degree)
            for power in Counter(combination).values():
                coefficient //= math.factorial(power)
            terms.append((combination, math.sqrt(coefficient)))
        return tuple(terms)

    @property
    def feature_dim(self) -> int:
        """|H|: n, C(n+d, d) for c > 0, C(n+d-1, d) for c = 0."""
        return len(self.monomials)


def _augmented(k: ExplicitMapKernel, x: np.ndarray) -> np.ndarray:
    if x.shape[0] != k.n:
        msg = f"expected {k.n}-dimensional inputs, got {x.shape[0]}"
        raise DimensionMismatchError(msg)
    if k.base.kind == KernelKind.POLYNOMIAL and k.base.offset > 0:
        extra = np.full((1, x.shape[1]), math.sqrt(k.base.offset))
        return np.vstack([x, extra])
    return x


def feature_matrix(
    k: ExplicitMapKernel, x: ObservationSet | npt.ArrayLike
) -> np.ndarray:
    """Map every observation column: Phi with shape |H| x m."""
    data = x.data if isinstance(x, ObservationSet) else np.asarray(x, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    augmented = _augmented(k, data)
    rows = [
        weight * np.prod(augmented[list(indices), :], axis=0)
        for indices, weight in k.monomials
    ]
    return np.vstack(rows)


def explicit_feature_map(k: ExplicitMapKernel, x: npt.ArrayLike) -> np.ndarray:
    """Explicit feature vector phi(x) with phi(x)'phi(y) = k(x, y).

    Examples:
        >>> k = ExplicitMapKernel(KernelSpec.polynomial(2), n=2)
        >>> explicit_feature_map(k, [1.0, 2.0]).round(6).tolist()
        [1.0, 2.828427, 4.0]

    """
    vector = np.asarray(x, dtype=float).ravel()
    return feature_matrix(k, vector[:, None])[:, 0]


def materialize(
    k: ExplicitMapKernel,
    covd: RkhsCovd,
    *,
    max_dim: int = ORACLE_MAX_FEATURE_DIM,
) -> np.ndarray:
    """Build Phi W W' Phi' + rho I explicitly.

    Raises:
        FeatureDimTooLargeError: If |H| exceeds max_dim.

    """
    if k.feature_dim > max_dim:
        msg = f"|H| = {k.feature_dim} exceeds the materialization cap {max_dim}"
        raise FeatureDimTooLargeError(msg)
    factor = feature_matrix(k, covd.observations) @ covd.weights
    return symmetrize(factor @ factor.T + covd.rho * np.eye(k.feature_dim))


def explicit_rkhs_covariance(
    k: ExplicitMapKernel,
    x: ObservationSet,
    r: int,
    rho: float,
) -> np.ndarray:
    """Fit a descriptor and materialize its regularized covariance.

    Returns:
        The |H| x |H| matrix with eigenvalues Lambda and rho (|H| - r times).

    Raises:
        FeatureDimTooLargeError: If |H| exceeds the materialization cap.

    """
    if k.feature_dim > ORACLE_MAX_FEATURE_DIM:
        msg = (
            f"|H| = {k.feature_dim} exceeds the materialization cap "
            f"{ORACLE_MAX_FEATURE_DIM}"
        )
        raise FeatureDimTooLargeError(msg)
    covd = fit_rkhs_covd(k.base, x, r, rho)
    logger.debug("Materializing {} in |H| = {}", covd, k.feature_dim)
    return materialize(k, covd)


def explicit_divergence(
    kind: DivergenceKind, c1: npt.ArrayLike, c2: npt.ArrayLike
) -> float:
    """Reference divergence between materialized covariances."""
    return divergence(kind, c1, c2)


def _require_rho(covd: RkhsCovd) -> float:
    if covd.rho <= 0:
        msg = "explicit identities need rho > 0"
        raise RhoMismatchError(msg)
    return covd.rho


def determinant_lemma(k: ExplicitMapKernel, covd: RkhsCovd) -> tuple[float, float]:
    """Compare logdet(C) with |H| log rho + sum log(lambda_i / rho).

    Returns:
        (explicit value, kernel-side value).

    """
    rho = _require_rho(covd)
    explicit = cholesky_logdet(materialize(k, covd))
    kernel_side = k.feature_dim * math.log(rho) + covd.log_eigen_ratio
    return explicit, kernel_side


def woodbury_inverse(
    k: ExplicitMapKernel, covd: RkhsCovd
) -> tuple[np.ndarray, np.ndarray]:
    """Compare C^-1 with rho^-1 I - rho^-1 Phi W Lambda^-1 W' Phi'.

    Returns:
        (explicit inverse, Woodbury form).

    """
    rho = _require_rho(covd)
    explicit = spd_inverse(materialize(k, covd))
    factor = feature_matrix(k, covd.observations) @ covd.weights
    woodbury = (np.eye(k.feature_dim) - (factor / covd.eigenvalues) @ factor.T) / rho
    return explicit, symmetrize(woodbury)


def trace_identity(
    k: ExplicitMapKernel, a: RkhsCovd, b: RkhsCovd
) -> tuple[float, float]:
    """Compare Tr(C_A C_B^-1) explicitly and from kernel matrices.

    The kernel side is |H| + rho^-1 Tr(Lambda_A - rho I) - Tr(I - rho Lambda_B^-1)
    - rho^-1 Tr(W_A' K_AB W_B Lambda_B^-1 W_B' K_BA W_A).

    Returns:
        (explicit trace, kernel-side trace).

    """
    rho = _require_rho(a)
    explicit = float(np.trace(materialize(k, a) @ spd_inverse(materialize(k, b))))
    cross = a.weights.T @ kernel_matrix(a.kernel, a.observations, b.observations)
    cross = cross @ b.weights
    kernel_side = (
        k.feature_dim
        + float(np.sum(a.eigenvalues - rho)) / rho
        - float(np.sum(1.0 - rho / b.eigenvalues))
        - float(np.sum(cross * cross / b.eigenvalues[None, :])) / rho
    )
    return explicit, kernel_side
