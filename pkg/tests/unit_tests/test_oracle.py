"""Test the explicit feature-space references for finite kernels."""

import numpy as np
import pytest

from pycovd.divergences import DivergenceKind
from pycovd.exceptions import FeatureDimTooLargeError, UnsupportedKernelError
from pycovd.models.kernel import KernelSpec
from pycovd.oracle import (
    ExplicitMapKernel,
    determinant_lemma,
    explicit_divergence,
    explicit_feature_map,
    explicit_rkhs_covariance,
    feature_matrix,
    materialize,
    trace_identity,
    woodbury_inverse,
)
from pycovd.rkhs_covd import fit_rkhs_covds, kernel_eval, kernel_matrix
from pycovd.rkhs_divergences import pair_divergence

QUADRATIC = KernelSpec.polynomial(2, 1.0)


@pytest.fixture
def quadratic_pair(make_observations):
    """Two rank-4 descriptors under (x'y + 1)^2 on the plane."""
    sets = [make_observations(2, 30), make_observations(2, 30)]
    return fit_rkhs_covds(QUADRATIC, sets, r=4, rho_scale=1e-2)


@pytest.mark.parametrize(
    "spec, n, expected",
    [
        pytest.param(KernelSpec.linear(), 4, 4, id="linear"),
        pytest.param(KernelSpec.polynomial(2), 2, 3, id="homogeneous_quadratic"),
        pytest.param(QUADRATIC, 2, 6, id="quadratic_with_offset"),
        pytest.param(KernelSpec.polynomial(3, 1.0), 3, 20, id="cubic_with_offset"),
    ],
)
def test_feature_dim(spec, n, expected):  # noqa: D103
    assert ExplicitMapKernel(spec, n).feature_dim == expected


@pytest.mark.parametrize(
    "spec",
    [
        pytest.param(KernelSpec.linear(), id="linear"),
        pytest.param(KernelSpec.polynomial(3), id="cubic"),
        pytest.param(KernelSpec.polynomial(2, 0.5), id="quadratic_with_offset"),
    ],
)
def test_feature_map_reproduces_kernel(spec, rng):  # noqa: D103
    # Arrange
    k = ExplicitMapKernel(spec, 3)
    x, y = rng.standard_normal(3), rng.standard_normal(3)

    # Act
    inner = explicit_feature_map(k, x) @ explicit_feature_map(k, y)

    # Assert
    assert inner == pytest.approx(kernel_eval(spec, x, y), rel=1e-12)


def test_feature_matrix_reproduces_gram(make_observations):  # noqa: D103
    # Arrange
    x = make_observations(2, 12)
    phi = feature_matrix(ExplicitMapKernel(QUADRATIC, 2), x)

    # Act / Assert
    assert phi.shape == (6, 12)
    np.testing.assert_allclose(phi.T @ phi, kernel_matrix(QUADRATIC, x, x), atol=1e-10)


def test_rbf_has_no_explicit_map():  # noqa: D103
    with pytest.raises(UnsupportedKernelError):
        ExplicitMapKernel(KernelSpec.rbf(1.0), 2)


def test_materialization_cap(make_observations):  # noqa: D103
    # Arrange
    k = ExplicitMapKernel(KernelSpec.polynomial(3, 1.0), 5)

    # Act / Assert
    assert k.feature_dim == 56
    with pytest.raises(FeatureDimTooLargeError):
        explicit_rkhs_covariance(k, make_observations(5, 20), r=3, rho=1e-3)


def test_materialize_respects_max_dim(quadratic_pair):  # noqa: D103
    with pytest.raises(FeatureDimTooLargeError):
        materialize(ExplicitMapKernel(QUADRATIC, 2), quadratic_pair[0], max_dim=5)


def test_materialized_spectrum(quadratic_pair):  # noqa: D103
    # Arrange
    covd = quadratic_pair[0]

    # Act
    matrix = materialize(ExplicitMapKernel(QUADRATIC, 2), covd)

    # Assert
    spectrum = np.sort(np.linalg.eigvalsh(matrix))[::-1]
    expected = np.concatenate([covd.eigenvalues, np.full(2, covd.rho)])
    np.testing.assert_allclose(spectrum, expected, rtol=1e-8)


def test_linear_materialization_is_the_covariance(make_observations):  # noqa: D103
    # Arrange
    x = make_observations(3, 40)
    k = ExplicitMapKernel(KernelSpec.linear(), 3)

    # Act
    matrix = explicit_rkhs_covariance(k, x, r=3, rho=1e-4)

    # Assert
    np.testing.assert_allclose(matrix, np.cov(x.data, bias=True), atol=1e-10)


@pytest.mark.parametrize("kind", list(DivergenceKind), ids=lambda k: k.value)
def test_kernel_side_matches_materialized(kind, quadratic_pair):  # noqa: D103
    # Arrange
    k = ExplicitMapKernel(QUADRATIC, 2)
    a, b = quadratic_pair

    # Act
    explicit = explicit_divergence(kind, materialize(k, a), materialize(k, b))

    # Assert
    assert pair_divergence(kind, a, b) == pytest.approx(explicit, rel=1e-6)


def test_determinant_lemma(quadratic_pair):  # noqa: D103
    # Act
    explicit, kernel_side = determinant_lemma(
        ExplicitMapKernel(QUADRATIC, 2), quadratic_pair[0]
    )

    # Assert
    assert explicit == pytest.approx(kernel_side, rel=1e-9)


def test_woodbury_inverse(quadratic_pair):  # noqa: D103
    # Act
    explicit, woodbury = woodbury_inverse(
        ExplicitMapKernel(QUADRATIC, 2), quadratic_pair[1]
    )

    # Assert
    np.testing.assert_allclose(woodbury, explicit, rtol=1e-7, atol=1e-7)


def test_trace_identity(quadratic_pair):  # noqa: D103
    # Act
    explicit, kernel_side = trace_identity(
        ExplicitMapKernel(QUADRATIC, 2), *quadratic_pair
    )

    # Assert
    assert explicit == pytest.approx(kernel_side, rel=1e-8)
