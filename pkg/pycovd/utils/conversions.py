"""Conversion utilities for numeric text formats."""

from __future__ import annotations

import math

from loguru import logger

from pycovd.const import CSV_FLOAT_FORMAT
from pycovd.exceptions import DatasetIoError


def format_float(value: float) -> str:
    """Format a float with 17 significant digits (round-trip exact).

    Args:
        value: Number to format.

    Returns:
        Text that parses back to exactly the same double.

    Examples:
        >>> format_float(0.1)
        '0.10000000000000001'

    """
    return CSV_FLOAT_FORMAT % value


def parse_float(token: str, context: str = "") -> float:
    """Parse a finite float from text.

    Args:
        token: The text to parse.
        context: Location used in the error message (file and line).

    Returns:
        The parsed number.

    Raises:
        DatasetIoError: If the token is not a finite number.

    """
    try:
        value = float(token)
    except ValueError as error:
        msg = f"{context}: cannot parse {token!r} as a number"
        raise DatasetIoError(msg) from error
    if not math.isfinite(value):
        msg = f"{context}: non-finite value {token!r}"
        raise DatasetIoError(msg)
    return value


def is_numeric_row(line: str, delimiter: str = ",") -> bool:
    """Check whether every field of a delimited line is a number.

    Args:
        line: One line of a CSV file.
        delimiter: Field separator.

    Returns:
        True if all fields parse as floats.

    """
    fields = [field.strip() for field in line.strip().split(delimiter)]
    try:
        [float(field) for field in fields]
    except ValueError:
        logger.debug("Treating line {!r} as a header", line.strip())
        return False
    return True
