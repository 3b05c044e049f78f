"""Dataset manifests and observation CSV files.

An observation CSV holds one observation per row (m rows x n columns) with an
optional header line. Numbers are written with 17 significant digits so a
save/load round trip is bit-exact.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import TYPE_CHECKING

from loguru import logger
from pydantic import ValidationError

from pycovd.const import MANIFEST_NAME
from pycovd.exceptions import (
    DatasetIoError,
    DimensionMismatchError,
    InvalidObservationError,
)
from pycovd.features import kylberg_features, load_gray_image
from pycovd.models.manifest import DatasetManifest, Recipe, SampleEntry
from pycovd.models.observation import ObservationSet
from pycovd.utils.conversions import format_float, is_numeric_row, parse_float

if TYPE_CHECKING:
    from collections.abc import Sequence


def read_observations_csv(path: str | Path) -> ObservationSet:
    """Read an m x n observation CSV.

    Args:
        path: CSV file; a non-numeric first line is treated as a header.

    Returns:
        The observation set (n x m).

    Raises:
        DatasetIoError: If the file is unreadable, ragged or not numeric;
            the message names the file and line.

    """
    csv_path = Path(path)
    try:
        lines = csv_path.read_text(encoding="utf-8").splitlines()
    except OSError as error:
        msg = f"{csv_path}: cannot read observations: {error}"
        raise DatasetIoError(msg) from error
    numbered = [(i + 1, line) for i, line in enumerate(lines) if line.strip()]
    if numbered and not is_numeric_row(numbered[0][1]):
        numbered = numbered[1:]
    if not numbered:
        msg = f"{csv_path}: no observations"
        raise DatasetIoError(msg)
    rows = []
    for number, line in numbered:
        context = f"{csv_path}:{number}"
        row = [parse_float(token.strip(), context) for token in line.split(",")]
        if rows and len(row) != len(rows[0]):
            msg = f"{context}: expected {len(rows[0])} values, got {len(row)}"
            raise DatasetIoError(msg)
        rows.append(row)
    try:
        return ObservationSet.from_rows(rows)
    except (DimensionMismatchError, InvalidObservationError) as error:
        msg = f"{csv_path}: {error}"
        raise DatasetIoError(msg) from error


def write_observations_csv(path: str | Path, observations: ObservationSet) -> None:
    """Write an observation set as an m x n CSV with a header line."""
    header = ",".join(f"x{i}" for i in range(observations.n))
    body = "\n".join(
        ",".join(format_float(value) for value in column)
        for column in observations.data.T
    )
    Path(path).write_text(f"{header}\n{body}\n", encoding="utf-8")


def load_manifest(path: str | Path) -> DatasetManifest:
    """Parse and validate a dataset manifest.

    Raises:
        DatasetIoError: If the file is unreadable or invalid; pydantic's
            location (and line, for JSON syntax errors) is kept in the message.

    """
    manifest_path = Path(path)
    try:
        text = manifest_path.read_text(encoding="utf-8")
    except OSError as error:
        msg = f"{manifest_path}: cannot read manifest: {error}"
        raise DatasetIoError(msg) from error
    try:
        return DatasetManifest.model_validate_json(text)
    except ValidationError as error:
        msg = f"{manifest_path}: {error}"
        raise DatasetIoError(msg) from error


def _load_sample(
    manifest: DatasetManifest, base: Path, entry: SampleEntry
) -> ObservationSet:
    sample_path = base / entry.path
    if not sample_path.is_file():
        msg = f"{sample_path}: sample file does not exist"
        raise DatasetIoError(msg)
    if manifest.recipe == Recipe.KYLBERG:
        return kylberg_features(load_gray_image(sample_path), manifest.stride)
    return read_observations_csv(sample_path)


def load_dataset(
    path: str | Path, *, workers: int | None = None
) -> list[tuple[ObservationSet, str]]:
    """Load every sample of a manifest, in manifest order.

    Files are read in parallel; sample paths are relative to the manifest.

    Args:
        path: Manifest JSON file.
        workers: Thread count (None = default).

    Returns:
        (observation set, label) pairs.

    Raises:
        DatasetIoError: If the manifest or a sample file cannot be read.
        DimensionMismatchError: If samples disagree on n, or disagree with
            the n and m declared in the manifest.

    """
    manifest_path = Path(path)
    manifest = load_manifest(manifest_path)
    base = manifest_path.parent
    with ThreadPoolExecutor(max_workers=workers) as pool:
        sets = list(
            pool.map(lambda e: _load_sample(manifest, base, e), manifest.samples)
        )
    expected_n = manifest.n if manifest.n is not None else (sets[0].n if sets else None)
    for index, (entry, observations) in enumerate(
        zip(manifest.samples, sets, strict=True)
    ):
        if observations.n != expected_n:
            msg = (
                f"{manifest_path}: sample {index} ({entry.path}) has n="
                f"{observations.n}, expected {expected_n}"
            )
            raise DimensionMismatchError(msg)
        if manifest.m is not None and observations.m != manifest.m:
            msg = (
                f"{manifest_path}: sample {index} ({entry.path}) has m="
                f"{observations.m}, expected {manifest.m}"
            )
            raise DimensionMismatchError(msg)
    logger.debug("Loaded {} samples from {}", len(sets), manifest_path)
    return [(x, entry.label) for x, entry in zip(sets, manifest.samples, strict=True)]


def save_dataset(
    directory: str | Path,
    samples: Sequence[tuple[ObservationSet, str]],
    *,
    seed: int | None = None,
) -> Path:
    """Write observation CSVs and a manifest that load_dataset reads back.

    Args:
        directory: Output directory, created if needed.
        samples: (observation set, label) pairs.
        seed: Generation seed recorded in the manifest.

    Returns:
        Path of the written manifest.

    Raises:
        DimensionMismatchError: If samples disagree on n.

    """
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    dims = {x.n for x, _ in samples}
    if len(dims) > 1:
        msg = f"samples disagree on n: {sorted(dims)}"
        raise DimensionMismatchError(msg)
    counts = {x.m for x, _ in samples}
    width = max(4, len(str(len(samples))))
    entries = []
    for index, (observations, label) in enumerate(samples):
        name = f"sample_{index:0{width}d}.csv"
        write_observations_csv(out / name, observations)
        entries.append(SampleEntry(path=name, label=label))
    manifest = DatasetManifest(
        samples=entries,
        recipe=Recipe.OBSERVATIONS,
        seed=seed,
        n=dims.pop() if dims else None,
        m=counts.pop() if len(counts) == 1 else None,
    )
    manifest_path = out / MANIFEST_NAME
    manifest_path.write_text(
        manifest.model_dump_json(indent=2, exclude_none=True), encoding="utf-8"
    )
    logger.debug("Saved {} samples to {}", len(entries), out)
    return manifest_path
