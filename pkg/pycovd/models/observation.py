"""Array-backed domain types: observation sets, eigendecompositions, images."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from pycovd.const import MIN_IMAGE_SIDE
from pycovd.exceptions import DimensionMismatchError, InvalidObservationError


def _frozen_copy(values: npt.ArrayLike, name: str, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    if array.ndim != ndim:
        msg = f"{name} must be {ndim}-D, got shape {array.shape}"
        raise DimensionMismatchError(msg)
    if not np.all(np.isfinite(array)):
        msg = f"{name} contains NaN or Inf"
        raise InvalidObservationError(msg)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ObservationSet:
    """An n x m matrix of m column observations in R^n.

    Attributes:
        data: Read-only float64 array, rows are feature dimensions.

    """

    data: np.ndarray

    def __post_init__(self) -> None:
        """Validate shape and values; store a read-only copy."""
        data = _frozen_copy(self.data, "observation set", 2)
        n, m = data.shape
        if n < 1 or m < 2:  # noqa: PLR2004
            msg = f"need n >= 1 and m >= 2 observations, got n={n}, m={m}"
            raise InvalidObservationError(msg)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, rows: npt.ArrayLike) -> ObservationSet:
        """Build from an m x n array with one observation per row."""
        return cls(np.asarray(rows, dtype=np.float64).T)

    @property
    def n(self) -> int:
        """Feature dimension."""
        return self.data.shape[0]

    @property
    def m(self) -> int:
        """Observation count."""
        return self.data.shape[1]

    def __repr__(self) -> str:
        """Represent the set by its shape."""
        return f"ObservationSet(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class EigDecomposition:
    """Eigenpairs of a symmetric matrix, eigenvalues in descending order.

    Attributes:
        eigenvalues: Length-k vector, descending.
        eigenvectors: n x k matrix with orthonormal columns.

    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        """Check that the shapes agree."""
        if self.eigenvectors.shape[1] != self.eigenvalues.shape[0]:
            msg = (
                f"{self.eigenvalues.shape[0]} eigenvalues for "
                f"{self.eigenvectors.shape[1]} eigenvectors"
            )
            raise DimensionMismatchError(msg)

    @property
    def k(self) -> int:
        """Number of eigenpairs."""
        return self.eigenvalues.shape[0]

    def truncate(self, k: int) -> EigDecomposition:
        """Keep the leading k eigenpairs."""
        return EigDecomposition(self.eigenvalues[:k], self.eigenvectors[:, :k])

    def reconstruct(self) -> np.ndarray:
        """Return V diag(lambda) V'."""
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Gray-level image with intensities in [0, 1].

    Attributes:
        pixels: H x W read-only array; rows index u, columns index v.

    """

    pixels: np.ndarray

    def __post_init__(self) -> None:
        """Validate size and intensity range."""
        pixels = _frozen_copy(self.pixels, "image", 2)
        if min(pixels.shape) < MIN_IMAGE_SIDE:
            msg = f"image {pixels.shape} is smaller than {MIN_IMAGE_SIDE} pixels"
            raise InvalidObservationError(msg)
        if pixels.min() < 0.0 or pixels.max() > 1.0:
            msg = "image intensities must lie in [0, 1]"
            raise InvalidObservationError(msg)
        object.__setattr__(self, "pixels", pixels)

    @property
    def height(self) -> int:
        """Image height H."""
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        """Image width W."""
        return self.pixels.shape[1]
