"""Utilities for formatting arrays and tables for log and console output."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import ArrayLike


def format_array_summary(name: str, values: ArrayLike) -> str:
    """Summarize an array on one line.

    Args:
        name: Label for the array.
        values: The array to summarize.

    Returns:
        A string with shape, min, max and mean.

    Examples:
        >>> format_array_summary("lambdas", [3.0, 1.0])
        'lambdas: shape=(2,) min=1 max=3 mean=2'

    """
    array = np.asarray(values, dtype=float)
    if array.size == 0:
        return f"{name}: shape={array.shape} (empty)"
    return (
        f"{name}: shape={array.shape} min={array.min():.6g} "
        f"max={array.max():.6g} mean={array.mean():.6g}"
    )


def _cell(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if value is None:
        return "-"
    return str(value)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Format rows as an aligned plain-text table.

    Args:
        headers: Column titles.
        rows: Table rows; floats are shown with 6 significant digits.

    Returns:
        A multi-line string with a header, a rule and one line per row.

    """
    cells = [[_cell(value) for value in row] for row in rows]
    widths = [len(header) for header in headers]
    for row in cells:
        for index, cell in enumerate(row):
            widths[index] = max(widths[index], len(cell))
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths, strict=True)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    lines.extend(
        "  ".join(c.ljust(w) for c, w in zip(row, widths, strict=True)).rstrip()
        for row in cells
    )
    return "\n".join(lines)
