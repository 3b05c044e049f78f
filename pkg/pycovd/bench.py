"""Runtime-scaling benchmark of observation-space and RKHS divergences.

Observation-space timing covers building both covariance descriptors of every
pair and evaluating the divergence, batched over all pairs. RKHS timing covers
fitting both descriptors of every pair and evaluating the practical
divergence. Data synthesis is never timed.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import TYPE_CHECKING

import arrow
import numpy as np
from loguru import logger

from pycovd.const import BENCH_EXPECTED_SLOPES, BENCH_MIN_PAIRS, BENCH_MIN_SIZES
from pycovd.divergences import covariance_many, jeffreys_many, stein_many
from pycovd.exceptions import ConfigError
from pycovd.models.kernel import KernelSpec
from pycovd.models.observation import ObservationSet
from pycovd.models.reports import BenchReport, BenchRow, SeriesSlope
from pycovd.rkhs_covd import fit_rkhs_covds
from pycovd.rkhs_divergences import jeffreys_h_hat, stein_h_hat
from pycovd.utils.conversions import format_float

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

OBSERVATION_SERIES: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "stein": stein_many,
    "jeffreys": jeffreys_many,
}
RKHS_SERIES = {
    "stein_hat": stein_h_hat,
    "jeffreys_hat": jeffreys_h_hat,
}


def _time_observation(
    divergence: Callable[[np.ndarray, np.ndarray], np.ndarray],
    first: np.ndarray,
    second: np.ndarray,
) -> float:
    start = time.perf_counter()
    divergence(covariance_many(first), covariance_many(second))
    return time.perf_counter() - start


def _time_rkhs(  # noqa: PLR0913
    divergence: Callable,
    kernel: KernelSpec,
    first: np.ndarray,
    second: np.ndarray,
    r: int,
    workers: int,
) -> float:
    def one_pair(index: int) -> float:
        a, b = fit_rkhs_covds(
            kernel,
            [ObservationSet(first[index]), ObservationSet(second[index])],
            r,
            workers=1,
        )
        return divergence(a, b)

    start = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one_pair, range(first.shape[0])))
    else:
        for index in range(first.shape[0]):
            one_pair(index)
    return time.perf_counter() - start


def fit_slope(sizes: Sequence[int], seconds: Sequence[float]) -> float:
    """Least-squares slope of log(seconds) against log(m)."""
    slope, _ = np.polyfit(np.log(sizes), np.log(seconds), 1)
    return float(slope)


def _warn_if_not_monotone(rows: list[BenchRow]) -> None:
    series: dict[tuple[str, str], list[BenchRow]] = {}
    for row in rows:
        series.setdefault((row.kind, row.space), []).append(row)
    for (kind, space), cells in series.items():
        ordered = sorted(cells, key=lambda x: x.m)
        for previous, current in zip(ordered, ordered[1:], strict=False):
            if current.seconds < previous.seconds:
                logger.warning(
                    "{} ({}) got faster from m={} to m={}",
                    kind,
                    space,
                    previous.m,
                    current.m,
                )


def run_scaling(  # noqa: PLR0913
    m_values: Sequence[int],
    r: int,
    pairs: int,
    seed: int,
    *,
    n: int = 10,
    workers: int = 1,
) -> BenchReport:
    """Time divergence evaluation across observation counts m.

    Args:
        m_values: Observation counts, at least three distinct values >= 2.
        r: Rank cap of the RKHS descriptors.
        pairs: Pairs per cell, >= 100.
        seed: Seed of the synthetic observation sets.
        n: Observation dimension.
        workers: Threads for RKHS pairs; slopes are not fitted when > 1.

    Returns:
        Wall times per (m, kind, space) and fitted log-log slopes.

    Raises:
        ConfigError: If the sizes or pair count are out of range.

    """
    sizes = sorted(set(m_values))
    if len(sizes) < BENCH_MIN_SIZES or sizes[0] < 2:  # noqa: PLR2004
        msg = f"need >= {BENCH_MIN_SIZES} distinct m values >= 2, got {list(m_values)}"
        raise ConfigError(msg)
    if pairs < BENCH_MIN_PAIRS:
        msg = f"need >= {BENCH_MIN_PAIRS} pairs per cell, got {pairs}"
        raise ConfigError(msg)
    kernel = KernelSpec.rbf(math.sqrt(n))
    rng = np.random.default_rng(seed)
    rows: list[BenchRow] = []
    for m in sizes:
        cell = {"m": m, "r": r, "pairs": pairs}
        first = rng.standard_normal((pairs, n, m))
        second = rng.standard_normal((pairs, n, m))
        for kind, divergence in OBSERVATION_SERIES.items():
            seconds = _time_observation(divergence, first, second)
            rows.append(
                BenchRow(kind=kind, space="observation", seconds=seconds, **cell)
            )
        for kind, divergence in RKHS_SERIES.items():
            seconds = _time_rkhs(divergence, kernel, first, second, r, workers)
            rows.append(BenchRow(kind=kind, space="rkhs", seconds=seconds, **cell))
        logger.info("Benchmarked m={} over {} pairs", m, pairs)
    _warn_if_not_monotone(rows)

    slopes = []
    for space, kinds in (("observation", OBSERVATION_SERIES), ("rkhs", RKHS_SERIES)):
        low, high = BENCH_EXPECTED_SLOPES[space]
        for kind in kinds:
            cells = sorted(
                (x for x in rows if x.kind == kind and x.space == space),
                key=lambda x: x.m,
            )
            slope = None
            if workers == 1:
                slope = fit_slope([x.m for x in cells], [x.seconds for x in cells])
            slopes.append(
                SeriesSlope(
                    kind=kind,
                    space=space,
                    slope=slope,
                    expected_low=low,
                    expected_high=high,
                )
            )
    return BenchReport(
        generated_at=arrow.utcnow().isoformat(),
        n=n,
        r=r,
        pairs=pairs,
        seed=seed,
        workers=workers,
        rows=rows,
        slopes=slopes,
    )


def write_bench_csv(path: str | Path, report: BenchReport) -> Path:
    """Write benchmark rows as CSV."""
    out = Path(path)
    lines = ["m,r,kind,space,pairs,seconds"]
    lines.extend(
        f"{x.m},{x.r},{x.kind},{x.space},{x.pairs},{format_float(x.seconds)}"
        for x in report.rows
    )
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out
