"""Bregman divergences between RKHS covariance descriptors.

Every expression below is evaluated from kernel matrices only; the feature
space dimension never appears. With C = W_X' K_XY W_Y (r_X x r_Y), the
building blocks are Tr(C Lambda_Y^-1 C') and Tr(C' Lambda_X^-1 C), plus
log(lambda / rho) sums from the determinant lemma.

Symmetric divergences evaluate their arguments in a canonical order (by
descriptor fingerprint) so that d(A, B) and d(B, A) agree bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg
from loguru import logger

from pycovd.const import RKHS_CLAMP_TOL
from pycovd.divergences import (
    AnyDivergenceKind,
    DivergenceKind,
    PracticalKind,
    divergence,
)
from pycovd.exceptions import (
    ConfigError,
    CovdError,
    DimensionMismatchError,
    KernelMismatchError,
    RankMismatchError,
    RhoMismatchError,
)
from pycovd.rkhs_covd import RkhsCovd, kernel_matrix
from pycovd.spd_core import cholesky_logdet
from pycovd.utils.helpers import clamp_divergence, exact_sum

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    Descriptor = RkhsCovd | np.ndarray


@dataclass(frozen=True, eq=False)
class BlockGram:
    """Joint kernel matrix of two descriptors and their stacked weights.

    Attributes:
        full: (m_X + m_Y) square matrix [[K_XX, K_XY], [K_YX, K_YY]].
        q: (m_X + m_Y) x (r_X + r_Y) block-diagonal of W_X and W_Y.

    """

    full: np.ndarray
    q: np.ndarray

    @property
    def projected(self) -> np.ndarray:
        """Q' K Q, symmetrized."""
        inner = self.q.T @ self.full @ self.q
        return 0.5 * (inner + inner.T)


def block_gram(a: RkhsCovd, b: RkhsCovd) -> BlockGram:
    """Assemble the joint kernel matrix and block weights of two descriptors.

    Raises:
        KernelMismatchError: If the kernels differ.

    """
    _check_compatible(a, b)
    cross = kernel_matrix(a.kernel, a.observations, b.observations)
    full = np.block([[a.gram, cross], [cross.T, b.gram]])
    q = scipy.linalg.block_diag(a.weights, b.weights)
    return BlockGram(full=full, q=q)


def _check_compatible(a: RkhsCovd, b: RkhsCovd) -> None:
    if a.kernel != b.kernel:
        msg = f"kernel mismatch: {a.kernel} vs {b.kernel}"
        raise KernelMismatchError(msg)
    if a.n != b.n:
        msg = f"feature dimension mismatch: {a.n} vs {b.n}"
        raise DimensionMismatchError(msg)


def _common_rho(a: RkhsCovd, b: RkhsCovd, *, positive: bool) -> float:
    _check_compatible(a, b)
    if not math.isclose(a.rho, b.rho, rel_tol=1e-12, abs_tol=0.0):
        msg = f"descriptors use different rho: {a.rho!r} vs {b.rho!r}"
        raise RhoMismatchError(msg)
    if positive and a.rho <= 0.0:
        msg = "this divergence needs a common rho > 0"
        raise RhoMismatchError(msg)
    return a.rho


def _canonical(a: RkhsCovd, b: RkhsCovd) -> tuple[RkhsCovd, RkhsCovd]:
    return (b, a) if a.fingerprint > b.fingerprint else (a, b)


def _cross(a: RkhsCovd, b: RkhsCovd, *, unregularized: bool = False) -> np.ndarray:
    """Return W_A' K_AB W_B (or the rho = 0 weights)."""
    left = a.unregularized_weights if unregularized else a.weights
    right = b.unregularized_weights if unregularized else b.weights
    return left.T @ kernel_matrix(a.kernel, a.observations, b.observations) @ right


def _finish(terms: list[float], name: str) -> float:
    value = exact_sum(terms)
    scale = exact_sum([abs(t) for t in terms])
    return clamp_divergence(value, scale, RKHS_CLAMP_TOL, name)


def euclidean_sq_h(a: RkhsCovd, b: RkhsCovd) -> float:
    """Squared Hilbert-Schmidt distance between two RKHS descriptors.

    ||Lambda_X - rho I||^2 + ||Lambda_Y - rho I||^2 - 2 ||W_Y' K_YX W_X||^2.
    rho may be zero.

    Raises:
        KernelMismatchError: If the kernels differ.
        RhoMismatchError: If the descriptors use different rho.

    """
    rho = _common_rho(a, b, positive=False)
    first, second = _canonical(a, b)
    cross = _cross(first, second)
    terms = [
        *((first.eigenvalues - rho) ** 2).tolist(),
        *((second.eigenvalues - rho) ** 2).tolist(),
        *(-2.0 * (cross * cross)).ravel().tolist(),
    ]
    return _finish(terms, "euclidean_sq_h")


def _burg_terms(
    a: RkhsCovd, b: RkhsCovd, cross: np.ndarray, rho: float
) -> list[float]:
    """Atomic terms of the Burg divergence B(A, B) given cross = W_A' K_AB W_B."""
    lambdas_a = a.eigenvalues
    lambdas_b = b.eigenvalues
    return [
        *(lambdas_a / rho).tolist(),
        -float(a.rank),
        -float(b.rank),
        *(rho / lambdas_b).tolist(),
        *(-(cross * cross) / (rho * lambdas_b[None, :])).ravel().tolist(),
        *np.log(lambdas_b / rho).tolist(),
        *(-np.log(lambdas_a / rho)).tolist(),
    ]


def burg_h(a: RkhsCovd, b: RkhsCovd) -> float:
    """Burg divergence B(C_A, C_B) between RKHS descriptors.

    Tr(rho^-1 Lambda_X - I) - Tr(I - rho Lambda_Y^-1)
    - rho^-1 Tr(W_X' K_XY W_Y Lambda_Y^-1 W_Y' K_YX W_X)
    + logdet(rho^-1 Lambda_Y) - logdet(rho^-1 Lambda_X).

    Raises:
        KernelMismatchError: If the kernels differ.
        RhoMismatchError: If rho differs or is zero.

    """
    rho = _common_rho(a, b, positive=True)
    return _finish(_burg_terms(a, b, _cross(a, b), rho), "burg_h")


def jeffreys_h(a: RkhsCovd, b: RkhsCovd) -> float:
    """Jeffreys divergence 1/2 B(A, B) + 1/2 B(B, A) between RKHS descriptors.

    The log-determinant terms cancel, leaving the six trace terms.

    Raises:
        KernelMismatchError: If the kernels differ.
        RhoMismatchError: If rho differs or is zero.

    """
    rho = _common_rho(a, b, positive=True)
    first, second = _canonical(a, b)
    cross = _cross(first, second)
    squared = cross * cross
    lambdas_a = first.eigenvalues
    lambdas_b = second.eigenvalues
    terms = [
        *(0.5 * lambdas_a / rho).tolist(),
        *(0.5 * lambdas_b / rho).tolist(),
        -float(first.rank),
        -float(second.rank),
        *(0.5 * rho / lambdas_a).tolist(),
        *(0.5 * rho / lambdas_b).tolist(),
        *(-0.5 * squared / (rho * lambdas_b[None, :])).ravel().tolist(),
        *(-0.5 * squared / (rho * lambdas_a[:, None])).ravel().tolist(),
    ]
    return _finish(terms, "jeffreys_h")


def _joint_logdet(first: RkhsCovd, second: RkhsCovd, rho: float) -> float:
    """logdet(rho I + 1/2 Q' K Q) for the canonical pair."""
    cross = _cross(first, second)
    joint = np.block(
        [
            [first.projected_gram, cross],
            [cross.T, second.projected_gram],
        ]
    )
    matrix = rho * np.eye(joint.shape[0]) + 0.5 * joint
    return cholesky_logdet(matrix, jitter=True)


def stein_h(a: RkhsCovd, b: RkhsCovd) -> float:
    """Stein divergence between RKHS descriptors.

    Evaluated as logdet(rho I + 1/2 Q' K Q) - (r_X + r_Y) log rho
    - 1/2 logdet(rho^-1 Lambda_X) - 1/2 logdet(rho^-1 Lambda_Y). The first
    two terms equal logdet(I + Q' K Q / (2 rho)) but never divide by rho;
    stein_h_reference evaluates that literal form.

    Raises:
        KernelMismatchError: If the kernels differ.
        RhoMismatchError: If rho differs or is zero.
        CholeskyFailureError: If the joint matrix is not positive definite.

    """
    rho = _common_rho(a, b, positive=True)
    first, second = _canonical(a, b)
    log_rho = math.log(rho)
    terms = [
        _joint_logdet(first, second, rho),
        -(first.rank + second.rank) * log_rho,
        *(-0.5 * np.log(first.eigenvalues / rho)).tolist(),
        *(-0.5 * np.log(second.eigenvalues / rho)).tolist(),
    ]
    return _finish(terms, "stein_h")


def stein_h_reference(a: RkhsCovd, b: RkhsCovd) -> float:
    """Stein divergence from the full block Gram matrix.

    logdet(I + Q' K Q / (2 rho)) - 1/2 logdet(rho^-1 Lambda_X)
    - 1/2 logdet(rho^-1 Lambda_Y). Overflows for tiny rho; kept as the
    reference that stein_h is checked against.

    Raises:
        KernelMismatchError: If the kernels differ.
        RhoMismatchError: If rho differs or is zero.
        CholeskyFailureError: If the joint matrix is not positive definite.

    """
    rho = _common_rho(a, b, positive=True)
    first, second = _canonical(a, b)
    blocks = block_gram(first, second)
    size = first.rank + second.rank
    logdet = cholesky_logdet(np.eye(size) + blocks.projected / (2.0 * rho), jitter=True)
    terms = [
        logdet,
        -0.5 * first.log_eigen_ratio,
        -0.5 * second.log_eigen_ratio,
    ]
    return _finish(terms, "stein_h_reference")


def stein_h_hat(a: RkhsCovd, b: RkhsCovd) -> float:
    """Practical Stein divergence for descriptors of equal rank.

    logdet(rho I + 1/2 Q' K Q) - 1/2 sum log lambda_X - 1/2 sum log lambda_Y,
    shifted by -1/2 (r_X + r_Y) log rho so that the self-divergence is zero.
    With that shift it coincides with stein_h. log rho is undefined at rho = 0,
    so zero-rho descriptors are rejected.

    Raises:
        RankMismatchError: If r_X != r_Y.
        KernelMismatchError: If the kernels differ.
        RhoMismatchError: If rho differs or is zero.

    """
    if a.rank != b.rank:
        msg = f"stein_h_hat needs equal ranks, got {a.rank} and {b.rank}"
        raise RankMismatchError(msg)
    rho = _common_rho(a, b, positive=True)
    first, second = _canonical(a, b)
    terms = [
        _joint_logdet(first, second, rho),
        *(-0.5 * np.log(first.eigenvalues)).tolist(),
        *(-0.5 * np.log(second.eigenvalues)).tolist(),
        -0.5 * (first.rank + second.rank) * math.log(rho),
    ]
    return _finish(terms, "stein_h_hat")


def jeffreys_h_hat(a: RkhsCovd, b: RkhsCovd) -> float:
    """Limit form lim_{rho -> 0} 2 rho J_H of the Jeffreys divergence.

    Tr Lambda_X + Tr Lambda_Y - Tr(C Lambda_Y^-1 C') - Tr(C' Lambda_X^-1 C)
    with C = W_X' K_XY W_Y built from the rho = 0 weights J V, so descriptors
    fitted at any rho give the same value.

    Raises:
        KernelMismatchError: If the kernels differ.

    """
    _check_compatible(a, b)
    first, second = _canonical(a, b)
    cross = _cross(first, second, unregularized=True)
    squared = cross * cross
    terms = [
        *first.eigenvalues.tolist(),
        *second.eigenvalues.tolist(),
        *(-squared / second.eigenvalues[None, :]).ravel().tolist(),
        *(-squared / first.eigenvalues[:, None]).ravel().tolist(),
    ]
    return _finish(terms, "jeffreys_h_hat")


RKHS_DIVERGENCES: dict[AnyDivergenceKind, Callable[[RkhsCovd, RkhsCovd], float]] = {
    DivergenceKind.FROBENIUS_SQ: euclidean_sq_h,
    DivergenceKind.BURG: burg_h,
    DivergenceKind.JEFFREYS: jeffreys_h,
    DivergenceKind.STEIN: stein_h,
    PracticalKind.JEFFREYS_HAT: jeffreys_h_hat,
    PracticalKind.STEIN_HAT: stein_h_hat,
}


def pair_divergence(kind: AnyDivergenceKind, a: Descriptor, b: Descriptor) -> float:
    """Evaluate a divergence between two descriptors of the same space.

    RkhsCovd pairs use the kernel-side forms; SPD arrays use the
    observation-space forms.

    Raises:
        ConfigError: If the descriptors are of different types or the kind
            has no form in their space.

    """
    if isinstance(a, RkhsCovd) and isinstance(b, RkhsCovd):
        return RKHS_DIVERGENCES[kind](a, b)
    if isinstance(a, RkhsCovd) or isinstance(b, RkhsCovd):
        msg = "cannot compare an RKHS descriptor with an SPD matrix"
        raise ConfigError(msg)
    if not isinstance(kind, DivergenceKind):
        msg = f"{kind.value} is only defined between RKHS descriptors"
        raise ConfigError(msg)
    return divergence(kind, a, b)


def _evaluate(
    kind: AnyDivergenceKind,
    pairs: list[tuple[int, int]],
    rows: Sequence[Descriptor],
    columns: Sequence[Descriptor],
    workers: int | None,
) -> list[float]:
    def evaluate(pair: tuple[int, int]) -> float:
        i, j = pair
        try:
            return pair_divergence(kind, rows[i], columns[j])
        except CovdError as error:
            msg = f"{kind.value} failed for pair ({i}, {j}): {error}"
            raise type(error)(msg) from error

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, pairs))


def divergence_matrix(
    descriptors: Sequence[Descriptor],
    kind: AnyDivergenceKind,
    *,
    workers: int | None = None,
) -> np.ndarray:
    """Pairwise divergence matrix over a set of descriptors.

    Symmetric kinds are evaluated once per unordered pair and mirrored. Burg
    is asymmetric: entry (i, j) is B(D_i, D_j) and both triangles are filled.
    Pairs run in a thread pool; results are placed by index.

    Args:
        descriptors: RkhsCovd values or SPD arrays, all of one kind.
        kind: Divergence to evaluate.
        workers: Thread count (None = default).

    Returns:
        N x N matrix with a zero diagonal.

    Raises:
        CovdError: Any element failure, re-raised with its (i, j) index.

    """
    count = len(descriptors)
    matrix = np.zeros((count, count))
    if kind.is_symmetric:
        pairs = [(i, j) for i in range(count) for j in range(i + 1, count)]
    else:
        pairs = [(i, j) for i in range(count) for j in range(count) if i != j]
    logger.debug(
        "Evaluating {} {} pairs over {} descriptors", len(pairs), kind.value, count
    )
    values = _evaluate(kind, pairs, descriptors, descriptors, workers)
    for (i, j), value in zip(pairs, values, strict=True):
        matrix[i, j] = value
        if kind.is_symmetric:
            matrix[j, i] = value
    return matrix


def cross_divergence_matrix(
    queries: Sequence[Descriptor],
    references: Sequence[Descriptor],
    kind: AnyDivergenceKind,
    *,
    workers: int | None = None,
) -> np.ndarray:
    """Divergences d(query_i, reference_j) between two descriptor lists.

    Returns:
        len(queries) x len(references) matrix.

    """
    pairs = [(i, j) for i in range(len(queries)) for j in range(len(references))]
    matrix = np.zeros((len(queries), len(references)))
    values = _evaluate(kind, pairs, queries, references, workers)
    for (i, j), value in zip(pairs, values, strict=True):
        matrix[i, j] = value
    return matrix
