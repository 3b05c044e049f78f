"""Test Helper Utils."""

import numpy as np
import pytest

from pycovd.exceptions import NumericConsistencyError
from pycovd.utils.helpers import (
    array_fingerprint,
    clamp_divergence,
    exact_sum,
    relative_error,
)


def test_fingerprint_depends_on_values_and_shape():  # noqa: D103
    base = array_fingerprint("rbf", [1.0, 2.0])
    assert base == array_fingerprint("rbf", np.array([1.0, 2.0]))
    assert base != array_fingerprint("rbf", [1.0, 2.5])
    assert array_fingerprint(np.zeros((2, 3))) != array_fingerprint(np.zeros((3, 2)))


def test_exact_sum_survives_cancellation():  # noqa: D103
    assert exact_sum([1e16, 1.0, -1e16]) == 1.0


@pytest.mark.parametrize(
    "observed, expected, error",
    [
        pytest.param(1.1, 1.0, 0.1, id="scalar"),
        pytest.param([3.0, 4.0], [0.0, 0.0], 5.0, id="zero_reference"),
        pytest.param(np.eye(2), np.eye(2), 0.0, id="equal"),
    ],
)
def test_relative_error(observed, expected, error):  # noqa: D103
    assert relative_error(observed, expected) == pytest.approx(error)


@pytest.mark.parametrize(
    "value, scale, expected",
    [
        pytest.param(0.3, 1.0, 0.3, id="positive"),
        pytest.param(-1e-12, 1.0, 0.0, id="round_off"),
        pytest.param(-5e-6, 1e3, 0.0, id="scaled_round_off"),
    ],
)
def test_clamp_divergence(value, scale, expected):  # noqa: D103
    assert clamp_divergence(value, scale, 1e-8, "stein") == expected


def test_clamp_divergence_rejects_real_negatives():  # noqa: D103
    with pytest.raises(NumericConsistencyError, match="stein"):
        clamp_divergence(-1e-3, 1.0, 1e-8, "stein")
