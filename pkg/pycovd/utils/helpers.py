"""Helper functions for hashing, exact sums and divergence clamping."""

from __future__ import annotations

import hashlib
import math
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from pycovd.exceptions import NumericConsistencyError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike


def array_fingerprint(*parts: ArrayLike | str | float) -> str:
    """Generate a SHA-256 fingerprint over arrays and scalars.

    Arrays are hashed by shape and their float64 little-endian bytes, so two
    arrays with equal values always hash equally.

    Args:
        *parts: Arrays, strings or numbers to hash in order.

    Returns:
        The hexadecimal SHA-256 digest.

    Examples:
        >>> array_fingerprint([1.0, 2.0]) == array_fingerprint(np.array([1.0, 2.0]))
        True

    """
    digest = hashlib.sha256()
    for part in parts:
        if isinstance(part, str):
            digest.update(b"s")
            digest.update(part.encode("UTF-8"))
            continue
        array = np.ascontiguousarray(part, dtype="<f8")
        digest.update(b"a")
        digest.update(str(array.shape).encode("UTF-8"))
        digest.update(array.tobytes())
    return digest.hexdigest()


def exact_sum(values: Iterable[float] | ArrayLike) -> float:
    """Sum values with correct rounding (math.fsum over a flattened array).

    Args:
        values: Numbers to add.

    Returns:
        The correctly rounded sum.

    """
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def relative_error(observed: ArrayLike, expected: ArrayLike) -> float:
    """Return the Frobenius-norm relative error between two values.

    Falls back to the absolute error when the expected value is zero.

    Args:
        observed: Computed value.
        expected: Reference value.

    Returns:
        ||observed - expected|| / ||expected||

    Examples:
        >>> relative_error(1.1, 1.0)
        0.10000000000000009

    """
    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    difference = float(np.linalg.norm(observed - expected))
    scale = float(np.linalg.norm(expected))
    return difference / scale if scale > 0 else difference


def clamp_divergence(value: float, scale: float, tol: float, name: str) -> float:
    """Clamp a tiny negative divergence to zero.

    Args:
        value: The computed divergence.
        scale: Magnitude of the terms that produced the value.
        tol: Relative tolerance; negatives down to -tol * max(1, scale) become 0.
        name: Divergence name used in messages.

    Returns:
        The value, or 0.0 when it was a round-off negative.

    Raises:
        NumericConsistencyError: If the value is below the tolerance band.

    """
    if value >= 0.0:
        return value
    limit = tol * max(1.0, scale)
    if value >= -limit:
        logger.debug("Clamping {} value {} to zero (limit {})", name, value, limit)
        return 0.0
    msg = f"{name} is negative beyond round-off: {value!r} (limit {-limit!r})"
    raise NumericConsistencyError(msg)
