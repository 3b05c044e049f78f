"""Base classes for pydantic models used across pycovd."""

from pydantic import BaseModel, ConfigDict


class StrictModel(BaseModel):
    """Base model that rejects unknown keys.

    Example:
        >>> class Settings(StrictModel):
        ...     folds: int
        >>> Settings.model_validate({"folds": 5, "typo": 1})
        Traceback (most recent call last):
        ...
        pydantic_core._pydantic_core.ValidationError: ...

    """

    model_config = ConfigDict(extra="forbid")


class FrozenModel(StrictModel):
    """Immutable, hashable model compared by value."""

    model_config = ConfigDict(extra="forbid", frozen=True)

