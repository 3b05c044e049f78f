"""Test the seeded identity suite."""

import pytest

from pycovd.verify import run_verification


@pytest.fixture(scope="module")
def report():
    """Verification report for the default seed."""
    return run_verification(0, pairs=4)


def test_default_seed_passes(report):  # noqa: D103
    failed = [c.name for c in report.checks if not c.passed]
    assert failed == []
    assert report.passed


def test_every_identity_is_reported_once(report):  # noqa: D103
    names = [c.name for c in report.checks]
    assert len(names) == len(set(names)) == 12
    assert {"weight_identity", "jeffreys_limit", "stein_hat_equivalence"} <= set(names)


def test_corrupted_weights_fail_only_the_weight_identity():  # noqa: D103
    # Act
    corrupted = run_verification(0, pairs=2, corrupt=True)

    # Assert
    failed = [c.name for c in corrupted.checks if not c.passed]
    assert failed == ["weight_identity"]
    assert not corrupted.passed


def test_same_seed_same_report():  # noqa: D103
    first = run_verification(3, pairs=2)
    second = run_verification(3, pairs=2)
    assert [c.observed for c in first.checks] == [c.observed for c in second.checks]


def test_weight_identity_covers_fifty_configurations(report):  # noqa: D103
    check = next(c for c in report.checks if c.name == "weight_identity")
    assert check.detail == "50 configurations"
    assert check.passed
