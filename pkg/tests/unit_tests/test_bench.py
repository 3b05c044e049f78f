"""Test the runtime-scaling benchmark."""

import math

import pytest

from pycovd.bench import fit_slope, run_scaling, write_bench_csv
from pycovd.exceptions import ConfigError


def test_fit_slope_of_power_law():  # noqa: D103
    sizes = [10, 20, 40, 80]
    assert fit_slope(sizes, [0.5 * m**3 for m in sizes]) == pytest.approx(3.0)


@pytest.mark.parametrize(
    "m_values, pairs",
    [
        pytest.param([10, 20], 100, id="two_sizes"),
        pytest.param([10, 10, 20, 20], 100, id="repeated_sizes"),
        pytest.param([1, 10, 20], 100, id="single_observation"),
        pytest.param([10, 20, 40], 99, id="few_pairs"),
    ],
)
def test_run_scaling_rejects(m_values, pairs):  # noqa: D103
    with pytest.raises(ConfigError):
        run_scaling(m_values, r=2, pairs=pairs, seed=0, n=3)


@pytest.mark.slow
def test_run_scaling_report(tmp_path):  # noqa: D103
    # Act
    report = run_scaling([12, 24, 48], r=3, pairs=100, seed=1, n=3)

    # Assert
    assert len(report.rows) == 12
    assert {(x.kind, x.space) for x in report.rows} == {
        ("stein", "observation"),
        ("jeffreys", "observation"),
        ("stein_hat", "rkhs"),
        ("jeffreys_hat", "rkhs"),
    }
    assert all(x.seconds > 0 for x in report.rows)
    assert all(s.slope is not None and math.isfinite(s.slope) for s in report.slopes)
    lines = write_bench_csv(tmp_path / "bench.csv", report).read_text().splitlines()
    assert lines[0] == "m,r,kind,space,pairs,seconds"
    assert len(lines) == 13


@pytest.mark.slow
def test_threaded_run_skips_slopes():  # noqa: D103
    report = run_scaling([8, 16, 32], r=2, pairs=100, seed=1, n=2, workers=2)
    assert all(s.slope is None for s in report.slopes)
    assert all(s.within_band is None for s in report.slopes)


@pytest.mark.slow
def test_scaling_slopes_fall_in_expected_bands():  # noqa: D103
    # Act
    report = run_scaling([50, 100, 200, 400], r=10, pairs=200, seed=0, n=10)

    # Assert
    assert all(s.within_band for s in report.slopes), report.slopes
    seconds = {(x.m, x.kind): x.seconds for x in report.rows}
    for m in (50, 100, 200, 400):
        assert seconds[m, "stein_hat"] > seconds[m, "stein"]
        assert seconds[m, "jeffreys_hat"] > seconds[m, "jeffreys"]
