"""Test dense symmetric linear algebra and finite covariance descriptors."""

import math

import numpy as np
import pytest

from pycovd.exceptions import (
    CholeskyFailureError,
    DimensionMismatchError,
    InvalidObservationError,
)
from pycovd.models.observation import ObservationSet
from pycovd.spd_core import (
    as_square,
    centering_matrix,
    check_symmetric,
    cholesky_factor,
    cholesky_logdet,
    covariance_descriptor,
    numerical_rank,
    spd_inverse,
    sym_eig,
    symmetrize,
)


@pytest.mark.parametrize("m", [1, 2, 7, 40])
def test_centering_matrix_product(m):  # noqa: D103
    # Act
    center = centering_matrix(m)

    # Assert
    expected = (np.eye(m) - np.ones((m, m)) / m) / m
    np.testing.assert_allclose(center @ center.T, expected, atol=1e-15)


def test_centering_matrix_rejects_zero():  # noqa: D103
    with pytest.raises(DimensionMismatchError):
        centering_matrix(0)


def test_covariance_matches_biased_np_cov(make_observations):  # noqa: D103
    # Arrange
    x = make_observations(4, 30)

    # Act
    c = covariance_descriptor(x)

    # Assert
    np.testing.assert_allclose(c, np.cov(x.data, bias=True), rtol=1e-12)
    np.testing.assert_array_equal(c, c.T)


def test_covariance_descriptor_equals_x_j_j_x(make_observations):  # noqa: D103
    # Arrange
    x = make_observations(3, 12)
    center = centering_matrix(x.m)

    # Act
    c = covariance_descriptor(x)

    # Assert
    np.testing.assert_allclose(c, x.data @ center @ center.T @ x.data.T, atol=1e-12)


def test_sym_eig_orders_and_signs(make_spd):  # noqa: D103
    # Arrange
    a = make_spd(5)

    # Act
    decomposition = sym_eig(a)

    # Assert
    assert np.all(np.diff(decomposition.eigenvalues) <= 0)
    np.testing.assert_allclose(decomposition.reconstruct(), a, atol=1e-10)
    vectors = decomposition.eigenvectors
    pivots = vectors[np.argmax(np.abs(vectors), axis=0), np.arange(vectors.shape[1])]
    assert np.all(pivots > 0)


def test_sym_eig_is_deterministic(make_spd):  # noqa: D103
    # Arrange
    a = make_spd(6)

    # Act
    first = sym_eig(a)
    second = sym_eig(a.copy())

    # Assert
    np.testing.assert_array_equal(first.eigenvalues, second.eigenvalues)
    np.testing.assert_array_equal(first.eigenvectors, second.eigenvectors)


@pytest.mark.parametrize(
    "eigenvalues, expected",
    [
        pytest.param([3.0, 1.0, 1e-12], 2, id="tiny_tail"),
        pytest.param([3.0, 1.0, 0.5], 3, id="full_rank"),
        pytest.param([0.0, 0.0], 0, id="all_zero"),
        pytest.param([-1.0, -2.0], 0, id="negative"),
        pytest.param([], 0, id="empty"),
    ],
)
def test_numerical_rank(eigenvalues, expected):  # noqa: D103
    assert numerical_rank(eigenvalues) == expected


def test_cholesky_logdet_of_diagonal():  # noqa: D103
    assert cholesky_logdet(np.diag([2.0, 3.0])) == pytest.approx(math.log(6.0))


def test_cholesky_logdet_matches_slogdet(make_spd):  # noqa: D103
    # Arrange
    a = make_spd(7)

    # Act
    value = cholesky_logdet(a)

    # Assert
    assert value == pytest.approx(np.linalg.slogdet(a)[1], rel=1e-12)


def test_cholesky_rejects_indefinite():  # noqa: D103
    with pytest.raises(CholeskyFailureError):
        cholesky_factor(np.diag([1.0, -1.0]))


def test_cholesky_jitter_rescues_singular_psd():  # noqa: D103
    # Arrange
    singular = np.ones((2, 2))

    # Act / Assert
    with pytest.raises(CholeskyFailureError):
        cholesky_factor(singular)
    factor = cholesky_factor(singular, jitter=True)
    np.testing.assert_allclose(factor @ factor.T, singular, atol=1e-10)


def test_spd_inverse(make_spd):  # noqa: D103
    # Arrange
    a = make_spd(5)

    # Act
    inverse = spd_inverse(a)

    # Assert
    np.testing.assert_allclose(inverse @ a, np.eye(5), atol=1e-10)
    np.testing.assert_array_equal(inverse, inverse.T)


def test_symmetrize():  # noqa: D103
    np.testing.assert_array_equal(
        symmetrize([[1.0, 2.0], [0.0, 1.0]]), [[1.0, 1.0], [1.0, 1.0]]
    )


def test_check_symmetric_rejects_asymmetry():  # noqa: D103
    with pytest.raises(InvalidObservationError):
        check_symmetric([[1.0, 0.5], [0.0, 1.0]])


@pytest.mark.parametrize(
    "matrix, error",
    [
        pytest.param(np.ones((2, 3)), DimensionMismatchError, id="not_square"),
        pytest.param(np.ones(3), DimensionMismatchError, id="vector"),
        pytest.param([[1.0, np.nan], [np.nan, 1.0]], InvalidObservationError, id="nan"),
    ],
)
def test_as_square_rejects(matrix, error):  # noqa: D103
    with pytest.raises(error):
        as_square(matrix)


@pytest.mark.parametrize(
    "data",
    [
        pytest.param(np.ones((2, 1)), id="single_observation"),
        pytest.param([[1.0, np.inf]], id="infinite"),
        pytest.param(np.ones(4), id="one_dimensional"),
    ],
)
def test_observation_set_rejects(data):  # noqa: D103
    with pytest.raises((InvalidObservationError, DimensionMismatchError)):
        ObservationSet(data)


def test_observation_set_is_read_only():  # noqa: D103
    # Arrange
    x = ObservationSet.from_rows([[1.0, 2.0], [3.0, 4.0], [5.0, 7.0]])

    # Assert
    assert (x.n, x.m) == (2, 3)
    with pytest.raises(ValueError, match="read-only"):
        x.data[0, 0] = 9.0
