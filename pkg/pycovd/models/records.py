"""Self-describing JSON records of fitted descriptors and trained SVMs."""

from __future__ import annotations

import numpy as np
from pydantic import Field, model_validator

from pycovd.classify import BinarySvm, LabeledSet, SvmModel
from pycovd.divergences import DivergenceKernelSpec, DivergenceKind, PracticalKind
from pycovd.models.kernel import KernelSpec
from pycovd.models.observation import ObservationSet
from pycovd.rkhs_covd import RkhsCovd
from pycovd.utils.models import StrictModel


def _shape_of(rows: list[list[float]]) -> tuple[int, ...]:
    widths = {len(row) for row in rows}
    if len(widths) > 1:
        msg = f"ragged matrix with row lengths {sorted(widths)}"
        raise ValueError(msg)
    return (len(rows), widths.pop() if widths else 0)


class RkhsCovdRecord(StrictModel):
    """Serialized RKHS descriptor.

    Attributes:
        kernel: Resolved reproducing kernel.
        n: Feature dimension.
        m: Observation count.
        r: Retained rank.
        rho: Regularizer.
        observations: X as n rows of m values.
        weights: W as m rows of r values.
        eigenvalues: Lambda, descending.

    """

    kernel: KernelSpec
    n: int = Field(ge=1)
    m: int = Field(ge=2)
    r: int = Field(ge=1)
    rho: float = Field(ge=0.0)
    observations: list[list[float]]
    weights: list[list[float]]
    eigenvalues: list[float]

    @model_validator(mode="after")
    def _check_shapes(self) -> RkhsCovdRecord:
        if not self.kernel.is_resolved:
            msg = "stored kernel must be resolved"
            raise ValueError(msg)
        expected = {
            "observations": ((self.n, self.m), _shape_of(self.observations)),
            "weights": ((self.m, self.r), _shape_of(self.weights)),
            "eigenvalues": ((self.r,), (len(self.eigenvalues),)),
        }
        for name, (want, got) in expected.items():
            if want != got:
                msg = f"{name} has shape {got}, expected {want}"
                raise ValueError(msg)
        return self

    @classmethod
    def from_covd(cls, covd: RkhsCovd) -> RkhsCovdRecord:
        """Capture a fitted descriptor."""
        return cls(
            kernel=covd.kernel,
            n=covd.n,
            m=covd.m,
            r=covd.rank,
            rho=covd.rho,
            observations=covd.observations.data.tolist(),
            weights=covd.weights.tolist(),
            eigenvalues=covd.eigenvalues.tolist(),
        )

    def to_covd(self) -> RkhsCovd:
        """Rebuild the descriptor."""
        return RkhsCovd(
            kernel=self.kernel,
            observations=ObservationSet(np.array(self.observations)),
            weights=np.array(self.weights).reshape(self.m, self.r),
            eigenvalues=np.array(self.eigenvalues),
            rho=self.rho,
        )


class BinarySvmRecord(StrictModel):
    """Serialized binary SVM solution."""

    alpha: list[float]
    bias: float
    converged: bool
    iterations: int = Field(ge=0)


class SvmModelRecord(StrictModel):
    """Serialized one-vs-rest SVM with its training references.

    Exactly one of rkhs_descriptors and spd_descriptors holds the training
    descriptors, in the order of labels.
    """

    kind: DivergenceKind | PracticalKind
    kernel: DivergenceKernelSpec
    c: float = Field(gt=0.0)
    tol: float = Field(gt=0.0)
    labels: list[str] = Field(min_length=2)
    rkhs_descriptors: list[RkhsCovdRecord] = Field(default_factory=list)
    spd_descriptors: list[list[list[float]]] = Field(default_factory=list)
    machines: list[BinarySvmRecord]
    indefinite: bool
    min_eigenvalue: float
    clip_spectrum: bool = False

    @model_validator(mode="after")
    def _check_layout(self) -> SvmModelRecord:
        count = len(self.labels)
        stored = [len(self.rkhs_descriptors), len(self.spd_descriptors)]
        if sorted(stored) != [0, count]:
            msg = f"need {count} training descriptors of one kind, got {stored}"
            raise ValueError(msg)
        classes = len(set(self.labels))
        if len(self.machines) != classes:
            msg = f"{len(self.machines)} binary machines for {classes} classes"
            raise ValueError(msg)
        if any(len(machine.alpha) != count for machine in self.machines):
            msg = f"every alpha vector must have {count} entries"
            raise ValueError(msg)
        return self

    @classmethod
    def from_model(cls, model: SvmModel) -> SvmModelRecord:
        """Capture a trained model."""
        train = model.train
        return cls(
            kind=model.kind,
            kernel=model.kernel,
            c=model.c,
            tol=model.tol,
            labels=list(train.labels),
            rkhs_descriptors=(
                [RkhsCovdRecord.from_covd(d) for d in train.descriptors]
                if train.is_rkhs
                else []
            ),
            spd_descriptors=(
                []
                if train.is_rkhs
                else [np.asarray(d).tolist() for d in train.descriptors]
            ),
            machines=[
                BinarySvmRecord(
                    alpha=machine.alpha.tolist(),
                    bias=machine.bias,
                    converged=machine.converged,
                    iterations=machine.iterations,
                )
                for machine in model.machines
            ],
            indefinite=model.indefinite,
            min_eigenvalue=model.min_eigenvalue,
            clip_spectrum=model.clip_spectrum,
        )

    def to_model(self) -> SvmModel:
        """Rebuild the model; decision values match the original exactly."""
        if self.rkhs_descriptors:
            descriptors = [record.to_covd() for record in self.rkhs_descriptors]
        else:
            descriptors = [np.array(matrix) for matrix in self.spd_descriptors]
        return SvmModel(
            train=LabeledSet(tuple(descriptors), tuple(self.labels)),
            kind=self.kind,
            kernel=self.kernel,
            c=self.c,
            tol=self.tol,
            machines=tuple(
                BinarySvm(
                    alpha=np.array(machine.alpha),
                    bias=machine.bias,
                    converged=machine.converged,
                    iterations=machine.iterations,
                )
                for machine in self.machines
            ),
            indefinite=self.indefinite,
            min_eigenvalue=self.min_eigenvalue,
            clip_spectrum=self.clip_spectrum,
        )
