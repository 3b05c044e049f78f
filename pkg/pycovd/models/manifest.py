"""Dataset manifest models."""

from __future__ import annotations

from enum import Enum

from pydantic import Field, field_validator, model_validator

from pycovd.const import KYLBERG_FEATURES, KYLBERG_STRIDE
from pycovd.utils.models import StrictModel


class Recipe(str, Enum):
    """How a sample file turns into an observation set."""

    OBSERVATIONS = "observations"
    KYLBERG = "kylberg"


class SampleEntry(StrictModel):
    """One sample of a dataset.

    Attributes:
        path: Observation CSV or image, relative to the manifest directory.
        label: Class label, non-empty.

    """

    path: str = Field(min_length=1)
    label: str

    @field_validator("label")
    @classmethod
    def _check_label(cls, value: str) -> str:
        if not value.strip():
            msg = "labels must be non-empty"
            raise ValueError(msg)
        return value


class DatasetManifest(StrictModel):
    """JSON manifest listing the samples of a dataset.

    Attributes:
        samples: Sample entries in load order.
        recipe: Feature recipe applied to every file.
        stride: Grid stride of the kylberg recipe.
        seed: Seed the dataset was generated with, if synthetic.
        n: Expected feature dimension (checked at load when set).
        m: Expected observation count (checked at load when set).

    """

    samples: list[SampleEntry] = Field(default_factory=list)
    recipe: Recipe = Recipe.OBSERVATIONS
    stride: int = Field(default=KYLBERG_STRIDE, ge=1)
    seed: int | None = Field(default=None, ge=0)
    n: int | None = Field(default=None, ge=1)
    m: int | None = Field(default=None, ge=2)

    @model_validator(mode="after")
    def _check_recipe_dimension(self) -> DatasetManifest:
        if self.recipe == Recipe.KYLBERG and self.n not in {None, KYLBERG_FEATURES}:
            msg = (
                f"the kylberg recipe yields n={KYLBERG_FEATURES}, "
                f"manifest says n={self.n}"
            )
            raise ValueError(msg)
        return self
