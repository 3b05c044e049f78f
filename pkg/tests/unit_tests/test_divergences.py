"""Test observation-space Bregman divergences and divergence kernels."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from pycovd.classify import LabeledSet, svm_train
from pycovd.divergences import (
    DivergenceKernelSpec,
    DivergenceKind,
    PracticalKind,
    burg,
    check_kernel_beta,
    covariance_many,
    divergence,
    divergence_gaussian_kernel,
    frobenius_sq,
    gaussian_kernel_matrix,
    is_valid_stein_beta,
    is_valid_stein_beta_rkhs,
    jeffreys,
    jeffreys_many,
    kernel_family,
    parse_divergence_kind,
    stein,
    stein_many,
)
from pycovd.exceptions import (
    CholeskyFailureError,
    ConfigError,
    DimensionMismatchError,
    SteinBetaInvalidError,
)
from pycovd.models.observation import ObservationSet
from pycovd.rkhs_divergences import divergence_matrix
from pycovd.spd_core import covariance_descriptor

ALL_KINDS = list(DivergenceKind)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_self_divergence_is_zero(kind, make_spd):  # noqa: D103
    # Arrange
    c = make_spd(4)

    # Act / Assert
    assert divergence(kind, c, c) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_divergences_are_non_negative(kind, make_spd):  # noqa: D103
    for _ in range(20):
        assert divergence(kind, make_spd(3), make_spd(3)) >= 0.0


@pytest.mark.parametrize(
    "kind", [k for k in ALL_KINDS if k.is_symmetric], ids=lambda k: k.value
)
def test_symmetric_divergences(kind, make_spd):  # noqa: D103
    # Arrange
    a, b = make_spd(4), make_spd(4)

    # Act / Assert
    assert divergence(kind, a, b) == pytest.approx(divergence(kind, b, a), rel=1e-12)


@pytest.mark.parametrize(
    "function, expected",
    [
        pytest.param(frobenius_sq, 2.0, id="frobenius"),
        pytest.param(burg, 2.0 * (1.0 - math.log(2.0)), id="burg"),
        pytest.param(jeffreys, 0.5, id="jeffreys"),
        pytest.param(stein, 2.0 * math.log(1.5) - math.log(2.0), id="stein"),
    ],
)
def test_closed_forms_for_scaled_identity(function, expected):  # noqa: D103
    assert function(2.0 * np.eye(2), np.eye(2)) == pytest.approx(expected, rel=1e-12)


def test_burg_is_asymmetric():  # noqa: D103
    # Act
    forward = burg(2.0 * np.eye(2), np.eye(2))
    backward = burg(np.eye(2), 2.0 * np.eye(2))

    # Assert
    assert backward == pytest.approx(2.0 * (math.log(2.0) - 0.5), rel=1e-12)
    assert forward != pytest.approx(backward)


def test_jeffreys_is_mean_of_burg_directions(make_spd):  # noqa: D103
    # Arrange
    a, b = make_spd(5), make_spd(5)

    # Act
    mean_burg = 0.5 * (burg(a, b) + burg(b, a))

    # Assert
    assert jeffreys(a, b) == pytest.approx(mean_burg, rel=1e-10)


@pytest.mark.parametrize(
    "kind", [DivergenceKind.BURG, DivergenceKind.JEFFREYS, DivergenceKind.STEIN]
)
def test_affine_invariance(kind, rng, make_spd):  # noqa: D103
    # Arrange
    a, b = make_spd(3), make_spd(3)
    transform = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)

    # Act
    moved = divergence(kind, transform @ a @ transform.T, transform @ b @ transform.T)

    # Assert
    assert moved == pytest.approx(divergence(kind, a, b), rel=1e-8)


@pytest.mark.parametrize("function", [burg, jeffreys, stein])
def test_singular_input_fails(function):  # noqa: D103
    singular = np.diag([1.0, 0.0])
    with pytest.raises(CholeskyFailureError):
        function(singular, np.eye(2))


def test_frobenius_accepts_psd():  # noqa: D103
    assert frobenius_sq(np.diag([1.0, 0.0]), np.zeros((2, 2))) == 1.0


def test_dimension_mismatch():  # noqa: D103
    with pytest.raises(DimensionMismatchError):
        stein(np.eye(2), np.eye(3))


def test_observation_divergence_rejects_practical_kind():  # noqa: D103
    with pytest.raises(ConfigError):
        divergence(PracticalKind.STEIN_HAT, np.eye(2), np.eye(2))


def test_batched_forms_match_single_pairs(rng):  # noqa: D103
    # Arrange
    first = rng.standard_normal((6, 3, 40))
    second = rng.standard_normal((6, 3, 40))

    # Act
    c1s, c2s = covariance_many(first), covariance_many(second)
    steins = stein_many(c1s, c2s)
    jeffreys_values = jeffreys_many(c1s, c2s)

    # Assert
    for index in range(6):
        from_set = covariance_descriptor(ObservationSet(first[index]))
        np.testing.assert_allclose(c1s[index], from_set, atol=1e-12)
        assert steins[index] == pytest.approx(
            stein(c1s[index], c2s[index]), rel=1e-9
        )
        assert jeffreys_values[index] == pytest.approx(
            jeffreys(c1s[index], c2s[index]), rel=1e-9
        )


def test_batched_shape_mismatch(rng):  # noqa: D103
    with pytest.raises(DimensionMismatchError):
        stein_many(np.zeros((2, 3, 3)), np.zeros((3, 3, 3)))


@pytest.mark.parametrize(
    "n, beta, expected",
    [
        pytest.param(3, 0.5, True, id="half"),
        pytest.param(3, 1.0, True, id="one"),
        pytest.param(3, 1.01, True, id="above_threshold"),
        pytest.param(3, 0.25, False, id="quarter"),
        pytest.param(3, 0.75, False, id="three_quarters"),
        pytest.param(4, 1.25, False, id="gap_n4"),
        pytest.param(4, 1.5, True, id="last_half_integer_n4"),
        pytest.param(2, 0.75, True, id="above_threshold_n2"),
        pytest.param(1, 0.1, True, id="scalar"),
    ],
)
def test_stein_beta_membership(n, beta, expected):  # noqa: D103
    assert is_valid_stein_beta(n, beta) is expected


@pytest.mark.parametrize(
    "beta, expected",
    [
        pytest.param(0.5, True, id="half"),
        pytest.param(2.0, True, id="two"),
        pytest.param(2.3, False, id="between"),
        pytest.param(0.2, False, id="small"),
    ],
)
def test_stein_beta_membership_rkhs(beta, expected):  # noqa: D103
    assert is_valid_stein_beta_rkhs(beta) is expected


def test_stein_beta_rejects_non_positive():  # noqa: D103
    with pytest.raises(ConfigError):
        is_valid_stein_beta(3, 0.0)


def test_check_kernel_beta_raises_or_warns():  # noqa: D103
    # Arrange
    spec = DivergenceKernelSpec(kind=DivergenceKind.STEIN, beta=0.25)

    # Act / Assert
    with pytest.raises(SteinBetaInvalidError):
        check_kernel_beta(spec, 3)
    assert check_kernel_beta(spec, 3, force=True) is False
    assert check_kernel_beta(spec, 1) is True


def test_check_kernel_beta_ignores_non_stein():  # noqa: D103
    spec = DivergenceKernelSpec(kind=DivergenceKind.JEFFREYS, beta=0.25)
    assert check_kernel_beta(spec, 3) is True


def test_divergence_kernel_spec_rejects_burg():  # noqa: D103
    with pytest.raises(ValidationError):
        DivergenceKernelSpec(kind=DivergenceKind.BURG, beta=1.0)


def test_gaussian_kernel_values():  # noqa: D103
    # Arrange
    spec = DivergenceKernelSpec(kind=DivergenceKind.JEFFREYS, beta=2.0)
    distances = np.array([[0.0, 0.5], [0.5, 0.0]])

    # Act
    gram = gaussian_kernel_matrix(distances, spec)

    # Assert
    np.testing.assert_allclose(gram, [[1.0, math.exp(-1.0)], [math.exp(-1.0), 1.0]])
    assert divergence_gaussian_kernel(0.5, spec) == pytest.approx(math.exp(-1.0))


def test_gaussian_kernel_rejects_negative():  # noqa: D103
    spec = DivergenceKernelSpec(kind=DivergenceKind.JEFFREYS, beta=1.0)
    with pytest.raises(ConfigError):
        gaussian_kernel_matrix([[0.0, -1.0], [-1.0, 0.0]], spec)
    with pytest.raises(ConfigError):
        divergence_gaussian_kernel(-0.1, spec)


@pytest.mark.parametrize(
    "kind, family",
    [
        pytest.param(PracticalKind.STEIN_HAT, DivergenceKind.STEIN, id="stein_hat"),
        pytest.param(
            PracticalKind.JEFFREYS_HAT, DivergenceKind.JEFFREYS, id="jeffreys_hat"
        ),
        pytest.param(
            DivergenceKind.FROBENIUS_SQ, DivergenceKind.FROBENIUS_SQ, id="frobenius"
        ),
    ],
)
def test_kernel_family(kind, family):  # noqa: D103
    assert kernel_family(kind) == family


def test_kernel_family_rejects_burg():  # noqa: D103
    with pytest.raises(ConfigError):
        kernel_family(DivergenceKind.BURG)


@pytest.mark.parametrize(
    "text, expected",
    [
        pytest.param("stein", DivergenceKind.STEIN, id="stein"),
        pytest.param("stein_hat", PracticalKind.STEIN_HAT, id="stein_hat"),
        pytest.param(DivergenceKind.BURG, DivergenceKind.BURG, id="member"),
    ],
)
def test_parse_divergence_kind(text, expected):  # noqa: D103
    assert parse_divergence_kind(text) == expected


def test_parse_divergence_kind_unknown():  # noqa: D103
    with pytest.raises(ConfigError):
        parse_divergence_kind("hellinger")


def _random_spd(rng, n: int, condition: float) -> np.ndarray:
    rotation, _ = np.linalg.qr(rng.standard_normal((n, n)))
    spectrum = np.exp(rng.uniform(0.0, math.log(condition), size=n))
    return (rotation * spectrum) @ rotation.T


@pytest.mark.parametrize("kind", [DivergenceKind.JEFFREYS, DivergenceKind.STEIN])
def test_inversion_invariance(kind, make_spd):  # noqa: D103
    # Arrange
    a, b = make_spd(4), make_spd(4)

    # Act
    inverted = divergence(kind, np.linalg.inv(a), np.linalg.inv(b))

    # Assert
    assert inverted == pytest.approx(divergence(kind, a, b), rel=1e-8)


def test_frobenius_is_rotation_but_not_affine_invariant(rng, make_spd):  # noqa: D103
    # Arrange
    a, b = make_spd(3), make_spd(3)
    rotation, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    transform = np.diag([3.0, 1.0, 0.2]) @ rotation
    before = frobenius_sq(a, b)

    # Act
    rotated = frobenius_sq(rotation @ a @ rotation.T, rotation @ b @ rotation.T)
    moved = frobenius_sq(transform @ a @ transform.T, transform @ b @ transform.T)

    # Assert
    assert rotated == pytest.approx(before, rel=1e-10)
    assert moved != pytest.approx(before, rel=1e-3)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_divergence_axioms_on_random_instances(kind, rng):  # noqa: D103
    for _ in range(100):
        # Arrange
        n = int(rng.integers(2, 6))
        a, b = _random_spd(rng, n, 10.0), _random_spd(rng, n, 10.0)

        # Act
        forward = divergence(kind, a, b)
        backward = divergence(kind, b, a)

        # Assert
        assert divergence(kind, a, a) == pytest.approx(0.0, abs=1e-10)
        assert forward > 0.0
        if kind.is_symmetric:
            assert forward == pytest.approx(backward, rel=1e-9)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_valid_stein_beta_gives_psd_gram(beta, make_spd):  # noqa: D103
    # Arrange
    matrices = [make_spd(3) for _ in range(20)]
    spec = DivergenceKernelSpec(kind=DivergenceKind.STEIN, beta=beta)

    # Act
    gram = gaussian_kernel_matrix(
        divergence_matrix(matrices, DivergenceKind.STEIN), spec, 3
    )

    # Assert
    assert np.linalg.eigvalsh(gram)[0] >= -1e-10 * np.trace(gram)


def _clustered_set(congruence: np.ndarray, step: float) -> list[np.ndarray]:
    """Points around I/2 at offsets 0, +-step, +-2 step along three directions.

    The directions act on the leading 2 x 2 block and span its diagonal, its
    anti-diagonal and its off-diagonal entries.
    """
    base = 0.5 * np.eye(3)
    directions = [
        np.diag([1.0, 1.0, 0.0]),
        np.diag([1.0, -1.0, 0.0]),
        np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
    ]
    points = [base]
    for direction in directions:
        points.extend(base + k * step * direction for k in (-2, -1, 1, 2))
    return [congruence @ point @ congruence.T for point in points]


def test_invalid_stein_beta_gives_indefinite_gram(rng):  # noqa: D103
    # Arrange
    spec = DivergenceKernelSpec(kind=DivergenceKind.STEIN, beta=0.25)
    witness = None

    # Act
    for _ in range(20):
        congruence = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
        candidate = _clustered_set(congruence, float(rng.choice([0.08, 0.1, 0.12])))
        distances = divergence_matrix(candidate, DivergenceKind.STEIN)
        gram = gaussian_kernel_matrix(distances, spec, 3, force=True)
        if np.linalg.eigvalsh(gram)[0] < -1e-8 * np.trace(gram):
            witness = candidate
            break
    assert witness is not None
    labels = ["a"] * 7 + ["b"] * (len(witness) - 7)
    model = svm_train(
        LabeledSet(tuple(witness), tuple(labels)),
        DivergenceKind.STEIN,
        0.25,
        force=True,
    )

    # Assert
    assert model.indefinite
    assert model.min_eigenvalue < 0.0
