"""CSV and JSON output formats.

Matrices and predictions are plain CSV with 17 significant digits. Every
output file gets a ``<name>.json`` sidecar holding the effective run config.
Fitted descriptors and trained SVMs are JSON records that reload bit-exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
from pydantic import ValidationError

from pycovd.exceptions import DatasetIoError
from pycovd.models.records import RkhsCovdRecord, SvmModelRecord
from pycovd.utils.conversions import format_float, parse_float

if TYPE_CHECKING:
    from collections.abc import Sequence

    from pydantic import BaseModel

    from pycovd.classify import SvmModel
    from pycovd.rkhs_covd import RkhsCovd


def write_matrix_csv(
    path: str | Path, matrix: np.ndarray, labels: Sequence[str] | None = None
) -> Path:
    """Write a matrix as CSV, one row per line.

    Args:
        path: Output file.
        matrix: 2-D array.
        labels: Optional row labels, written as a leading column.

    Returns:
        The written path.

    """
    out = Path(path)
    lines = []
    for index, row in enumerate(np.atleast_2d(matrix)):
        values = [format_float(float(v)) for v in row]
        if labels is not None:
            values.insert(0, labels[index])
        lines.append(",".join(values))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def read_matrix_csv(path: str | Path, *, labeled: bool = False) -> np.ndarray:
    """Read a matrix written by write_matrix_csv.

    Raises:
        DatasetIoError: If the file is unreadable or not numeric.

    """
    source = Path(path)
    try:
        lines = [x for x in source.read_text(encoding="utf-8").splitlines() if x]
    except OSError as error:
        msg = f"{source}: cannot read matrix: {error}"
        raise DatasetIoError(msg) from error
    rows = []
    for number, line in enumerate(lines, start=1):
        tokens = line.split(",")[1:] if labeled else line.split(",")
        rows.append([parse_float(t, f"{source}:{number}") for t in tokens])
    return np.array(rows, dtype=np.float64)


def write_predictions_csv(
    path: str | Path,
    sample_paths: Sequence[str],
    truth: Sequence[str],
    predicted: Sequence[str],
) -> Path:
    """Write one line per test sample: path, true label, predicted label."""
    out = Path(path)
    lines = ["sample,label,predicted"]
    lines.extend(
        f"{p},{t},{q}" for p, t, q in zip(sample_paths, truth, predicted, strict=True)
    )
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def sidecar_path(output: str | Path) -> Path:
    """Sidecar location of an output file: the name with .json appended."""
    out = Path(output)
    return out.with_name(f"{out.name}.json")


def write_sidecar(
    output: str | Path, config: BaseModel, extra: dict[str, Any] | None = None
) -> Path:
    """Echo the effective configuration (plus run facts) next to an output.

    Returns:
        Path of the sidecar.

    """
    payload: dict[str, Any] = {"config": config.model_dump(mode="json")}
    if extra:
        payload.update(extra)
    target = sidecar_path(output)
    target.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return target


def write_report_json(path: str | Path, report: BaseModel) -> Path:
    """Write a report model as indented JSON."""
    out = Path(path)
    out.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return out


def _read_record(path: str | Path, record: type[BaseModel], what: str) -> BaseModel:
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as error:
        msg = f"{source}: cannot read {what}: {error}"
        raise DatasetIoError(msg) from error
    try:
        return record.model_validate_json(text)
    except ValidationError as error:
        msg = f"{source}: invalid {what}: {error}"
        raise DatasetIoError(msg) from error


def write_rkhs_covd(path: str | Path, covd: RkhsCovd) -> Path:
    """Write a fitted descriptor: kernel, n, m, r, rho, X, W and Lambda."""
    return write_report_json(path, RkhsCovdRecord.from_covd(covd))


def read_rkhs_covd(path: str | Path) -> RkhsCovd:
    """Read a descriptor written by write_rkhs_covd.

    Raises:
        DatasetIoError: If the file is unreadable or not a valid record.

    """
    return _read_record(path, RkhsCovdRecord, "RKHS descriptor").to_covd()


def write_svm_model(path: str | Path, model: SvmModel) -> Path:
    """Write a trained SVM together with its training descriptors."""
    return write_report_json(path, SvmModelRecord.from_model(model))


def read_svm_model(path: str | Path) -> SvmModel:
    """Read a model written by write_svm_model.

    Raises:
        DatasetIoError: If the file is unreadable or not a valid record.

    """
    return _read_record(path, SvmModelRecord, "SVM model").to_model()
