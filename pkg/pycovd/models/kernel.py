"""Models for reproducing kernels."""

from __future__ import annotations

from enum import Enum

from pydantic import Field, model_validator

from pycovd.utils.models import FrozenModel


class KernelKind(str, Enum):
    """Supported reproducing kernels."""

    LINEAR = "linear"
    POLYNOMIAL = "polynomial"
    RBF = "rbf"


class KernelSpec(FrozenModel):
    """Choice and parameters of a reproducing kernel.

    Linear: k(x, y) = x'y. Polynomial: (x'y + offset)^degree.
    Rbf: exp(-||x - y||^2 / (2 sigma^2)). An RBF spec may leave sigma unset;
    it is then resolved by the median heuristic on the training pool.

    Attributes:
        kind: The kernel family.
        degree: Polynomial degree (polynomial kernels only).
        offset: Polynomial offset c >= 0 (polynomial kernels only).
        sigma: RBF bandwidth, or None if still to be resolved.

    """

    kind: KernelKind
    degree: int | None = Field(default=None, ge=1)
    offset: float = Field(default=0.0, ge=0.0)
    sigma: float | None = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _check_parameters(self) -> KernelSpec:
        if self.kind == KernelKind.POLYNOMIAL and self.degree is None:
            msg = "polynomial kernel needs a degree"
            raise ValueError(msg)
        if self.kind != KernelKind.POLYNOMIAL and (
            self.degree is not None or self.offset != 0.0
        ):
            msg = f"{self.kind.value} kernel takes no degree or offset"
            raise ValueError(msg)
        if self.kind != KernelKind.RBF and self.sigma is not None:
            msg = f"{self.kind.value} kernel takes no sigma"
            raise ValueError(msg)
        return self

    @classmethod
    def linear(cls) -> KernelSpec:
        """Build a linear kernel spec."""
        return cls(kind=KernelKind.LINEAR)

    @classmethod
    def polynomial(cls, degree: int, offset: float = 0.0) -> KernelSpec:
        """Build a polynomial kernel spec."""
        return cls(kind=KernelKind.POLYNOMIAL, degree=degree, offset=offset)

    @classmethod
    def rbf(cls, sigma: float | None = None) -> KernelSpec:
        """Build an RBF kernel spec, optionally with sigma left unresolved."""
        return cls(kind=KernelKind.RBF, sigma=sigma)

    @property
    def is_resolved(self) -> bool:
        """Whether every parameter needed for evaluation is set."""
        return self.kind != KernelKind.RBF or self.sigma is not None

    @property
    def has_explicit_map(self) -> bool:
        """Whether the kernel has a finite explicit feature map."""
        return self.kind in (KernelKind.LINEAR, KernelKind.POLYNOMIAL)

    def with_sigma(self, sigma: float) -> KernelSpec:
        """Return a copy of an RBF spec with the given bandwidth."""
        return KernelSpec(kind=self.kind, sigma=sigma)

    def __str__(self) -> str:
        """Represent the kernel spec as a short string."""
        if self.kind == KernelKind.POLYNOMIAL:
            return f"polynomial(degree={self.degree}, offset={self.offset:g})"
        if self.kind == KernelKind.RBF:
            sigma = "median" if self.sigma is None else f"{self.sigma:g}"
            return f"rbf(sigma={sigma})"
        return "linear"
