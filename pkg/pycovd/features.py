"""Image-grid feature extraction and seeded synthetic datasets."""

from __future__ import annotations

from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger
from PIL import Image, UnidentifiedImageError

from pycovd.const import KYLBERG_ORIGIN, KYLBERG_STRIDE, MIN_IMAGE_SIDE
from pycovd.exceptions import ConfigError, DatasetIoError, InvalidObservationError
from pycovd.models.observation import GrayImage, ObservationSet

if TYPE_CHECKING:
    from pathlib import Path


def load_gray_image(path: str | Path) -> GrayImage:
    """Read an image file as gray levels in [0, 1].

    Color images are converted to 8-bit luminance; 16-bit gray images keep
    their full range.

    Raises:
        DatasetIoError: If the file is missing or not an image.

    """
    try:
        with Image.open(path) as image:
            if image.mode in {"I;16", "I;16B", "I;16L", "I"}:
                pixels = np.asarray(image, dtype=np.float64) / 65535.0
            else:
                pixels = np.asarray(image.convert("L"), dtype=np.float64) / 255.0
    except (OSError, UnidentifiedImageError) as error:
        msg = f"{path}: cannot read image: {error}"
        raise DatasetIoError(msg) from error
    return GrayImage(np.clip(pixels, 0.0, 1.0))


def grid_positions(size: int, stride: int) -> np.ndarray:
    """Grid coordinates along one axis where the second-order stencil fits.

    The grid starts two pixels from the border and keeps every point u with
    u + 1 <= size - 1.
    """
    return np.arange(KYLBERG_ORIGIN, size - 1, stride)


def kylberg_features(img: GrayImage, stride: int = KYLBERG_STRIDE) -> ObservationSet:
    """Texture observations [I, |I_u|, |I_v|, |I_uu|, |I_vv|] on a coarse grid.

    Derivatives are central differences. Columns are ordered row-major over
    the grid (u outer, v inner).

    Args:
        img: Gray-level image.
        stride: Grid spacing in pixels.

    Returns:
        An observation set with n = 5.

    Raises:
        ConfigError: If stride < 1.
        InvalidObservationError: If the grid has fewer than two points.

    Examples:
        >>> img = GrayImage(np.full((128, 128), 0.5))
        >>> kylberg_features(img, stride=4).m
        1024

    """
    if stride < 1:
        msg = f"stride must be >= 1, got {stride}"
        raise ConfigError(msg)
    if min(img.height, img.width) < MIN_IMAGE_SIDE:
        msg = f"image {img.height}x{img.width} is too small for the stencil"
        raise InvalidObservationError(msg)
    pixels = img.pixels
    rows = grid_positions(img.height, stride)
    cols = grid_positions(img.width, stride)
    if rows.size * cols.size < 2:  # noqa: PLR2004
        msg = f"stride {stride} leaves fewer than two grid points"
        raise InvalidObservationError(msg)
    u, v = np.meshgrid(rows, cols, indexing="ij")
    u, v = u.ravel(), v.ravel()
    center = pixels[u, v]
    features = np.vstack(
        [
            center,
            np.abs(pixels[u + 1, v] - pixels[u - 1, v]) / 2.0,
            np.abs(pixels[u, v + 1] - pixels[u, v - 1]) / 2.0,
            np.abs(pixels[u + 1, v] - 2.0 * center + pixels[u - 1, v]),
            np.abs(pixels[u, v + 1] - 2.0 * center + pixels[u, v - 1]),
        ]
    )
    logger.debug(
        "Extracted {} grid observations from a {}x{} image",
        features.shape[1],
        img.height,
        img.width,
    )
    return ObservationSet(features)


class SyntheticMode(str, Enum):
    """Synthetic two-class dataset designs."""

    COVARIANCE_SHIFT = "covariance_shift"
    HIGHER_ORDER = "higher_order"


def _class_factor(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random well-conditioned covariance factor L (Sigma = L L')."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    scales = np.sqrt(rng.uniform(0.5, 2.0, size=n))
    return q * scales


def _full_cube(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """Independent +1/-1 signs: zero mean, identity covariance, 2^n points."""
    return rng.choice([-1.0, 1.0], size=(n, m))


def _half_cube(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """n - 1 independent signs plus their product: 2^(n-1) points.

    For n >= 3 the mean is zero and the covariance is the identity, like the
    full cube, but every draw has a product of all coordinates equal to 1.
    """
    head = rng.choice([-1.0, 1.0], size=(n - 1, m))
    return np.vstack([head, np.prod(head, axis=0, keepdims=True)])


def synthetic_two_class(  # noqa: PLR0913
    seed: int,
    per_class: int,
    n: int,
    m: int,
    mode: SyntheticMode | str,
    separation: float = 4.0,
) -> tuple[list[ObservationSet], list[str]]:
    """Generate a seeded two-class set of observation sets.

    covariance_shift draws class "A" from N(0, I) and class "B" from
    N(0, R diag(separation^t) R') with t evenly spaced in [-1, 1].
    higher_order maps sign vectors through one random factor L: class "A"
    uses the full {-1, 1}^n cube and class "B" the half cube whose coordinate
    product is 1. Both share mean 0 and covariance L L'; their third moments
    differ. Class B has 2^(n-1) distinct observations, so its centered Gram
    rank is at most 2^(n-1) - 1.

    Args:
        seed: Seed of every draw.
        per_class: Samples per class, >= 2.
        n: Observation dimension (>= 3 for higher_order).
        m: Observations per sample.
        mode: Dataset design.
        separation: Eigenvalue spread of class B in covariance_shift.

    Returns:
        Observation sets and labels, class A first.

    Raises:
        ConfigError: If a size is out of range or the mode is unknown.

    """
    if per_class < 2 or n < 1 or m < 2 or separation <= 0:  # noqa: PLR2004
        msg = "need per_class >= 2, n >= 1, m >= 2 and separation > 0"
        raise ConfigError(msg)
    try:
        mode = SyntheticMode(mode)
    except ValueError as error:
        msg = f"unknown synthetic mode {mode!r}"
        raise ConfigError(msg) from error
    if mode == SyntheticMode.HIGHER_ORDER and n < 3:  # noqa: PLR2004
        msg = f"higher_order needs n >= 3 to keep the covariances equal, got n={n}"
        raise ConfigError(msg)
    rng = np.random.default_rng(seed)
    sets: list[ObservationSet] = []
    labels: list[str] = []
    if mode == SyntheticMode.COVARIANCE_SHIFT:
        rotation, _ = np.linalg.qr(rng.standard_normal((n, n)))
        spread = separation ** np.linspace(-1.0, 1.0, n)
        factors = {"A": np.eye(n), "B": rotation * np.sqrt(spread)}
        for label, factor in factors.items():
            for _ in range(per_class):
                sets.append(ObservationSet(factor @ rng.standard_normal((n, m))))
                labels.append(label)
    else:
        factor = _class_factor(rng, n)
        for label, draw in (("A", _full_cube), ("B", _half_cube)):
            for _ in range(per_class):
                sets.append(ObservationSet(factor @ draw(rng, n, m)))
                labels.append(label)
    logger.debug(
        "Generated {} synthetic {} samples (n={}, m={})", len(sets), mode.value, n, m
    )
    return sets, labels
