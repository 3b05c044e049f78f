"""Models for classification, benchmark and verification reports."""

from __future__ import annotations

from pydantic import BaseModel, Field, computed_field

from pycovd.utils.log_utils import format_table


class GridPoint(BaseModel):
    """One cross-validation grid point; None means the knob does not apply."""

    r: int | None = None
    sigma: float | None = None
    beta: float | None = None
    c: float | None = None

    def sort_key(self) -> tuple[float, float, float, float]:
        """Order used to break accuracy ties: smaller r, sigma, beta, then C."""
        return tuple(  # type: ignore[return-value]
            float("-inf") if v is None else float(v)
            for v in (self.r, self.sigma, self.beta, self.c)
        )


class GridScore(BaseModel):
    """Mean fold accuracy of one grid point."""

    point: GridPoint
    mean_accuracy: float
    fold_scores: list[float]


class CrossValidationResult(BaseModel):
    """Outcome of an exhaustive grid search."""

    best: GridPoint
    mean_accuracy: float
    fold_scores: list[float]
    evaluated: list[GridScore] = Field(default_factory=list)
    skipped_folds: int = 0


class ClassAccuracy(BaseModel):
    """Accuracy for a single class."""

    label: str
    total: int
    correct: int

    @computed_field
    @property
    def accuracy(self) -> float | None:
        """Fraction correct, None for an empty class."""
        return self.correct / self.total if self.total else None


class AccuracyReport(BaseModel):
    """Per-class and overall accuracy of a set of predictions."""

    total: int
    correct: int
    per_class: list[ClassAccuracy]
    cross_validation: CrossValidationResult | None = None

    @computed_field
    @property
    def accuracy(self) -> float | None:
        """Overall fraction correct, None when there were no queries."""
        return self.correct / self.total if self.total else None

    @classmethod
    def from_predictions(
        cls, truth: list[str], predicted: list[str]
    ) -> AccuracyReport:
        """Tally predictions against ground-truth labels."""
        labels = sorted(set(truth))
        per_class = [
            ClassAccuracy(
                label=label,
                total=sum(t == label for t in truth),
                correct=sum(
                    t == label and p == label
                    for t, p in zip(truth, predicted, strict=True)
                ),
            )
            for label in labels
        ]
        correct = sum(t == p for t, p in zip(truth, predicted, strict=True))
        return cls(total=len(truth), correct=correct, per_class=per_class)

    def as_table(self) -> str:
        """Render per-class and overall accuracy as a table."""
        rows = [
            [item.label, item.total, item.correct, item.accuracy]
            for item in self.per_class
        ]
        rows.append(["overall", self.total, self.correct, self.accuracy])
        return format_table(["class", "total", "correct", "accuracy"], rows)


class PartitionAccuracy(BaseModel):
    """Accuracy over repeated random train/test partitions."""

    mean: float
    std: float
    accuracies: list[float]


class BenchRow(BaseModel):
    """Wall time of one benchmark cell."""

    m: int
    r: int
    kind: str
    space: str
    pairs: int
    seconds: float


class SeriesSlope(BaseModel):
    """Fitted log-log scaling exponent of one (kind, space) series."""

    kind: str
    space: str
    slope: float | None
    expected_low: float
    expected_high: float

    @property
    def within_band(self) -> bool | None:
        """Whether the slope falls in the expected band."""
        if self.slope is None:
            return None
        return self.expected_low <= self.slope <= self.expected_high


class BenchReport(BaseModel):
    """Runtime-scaling benchmark output."""

    generated_at: str
    n: int
    r: int
    pairs: int
    seed: int
    workers: int
    rows: list[BenchRow]
    slopes: list[SeriesSlope]

    def as_table(self) -> str:
        """Render timings and slopes as two tables."""
        timings = format_table(
            ["m", "r", "kind", "space", "pairs", "seconds"],
            [[x.m, x.r, x.kind, x.space, x.pairs, x.seconds] for x in self.rows],
        )
        slopes = format_table(
            ["kind", "space", "slope", "expected", "in band"],
            [
                [
                    s.kind,
                    s.space,
                    s.slope,
                    f"[{s.expected_low:g}, {s.expected_high:g}]",
                    s.within_band,
                ]
                for s in self.slopes
            ],
        )
        return f"{timings}\n\n{slopes}"


class VerificationCheck(BaseModel):
    """One identity checked by the verification suite."""

    name: str
    passed: bool
    observed: float
    tolerance: float
    detail: str = ""


class VerificationReport(BaseModel):
    """Pass/fail report of the verification suite."""

    seed: int
    checks: list[VerificationCheck]

    @property
    def passed(self) -> bool:
        """True if every check passed."""
        return all(check.passed for check in self.checks)

    def as_table(self) -> str:
        """Render checks with observed error and tolerance."""
        return format_table(
            ["identity", "result", "observed", "tolerance", "detail"],
            [
                [
                    c.name,
                    "pass" if c.passed else "FAIL",
                    c.observed,
                    c.tolerance,
                    c.detail,
                ]
                for c in self.checks
            ],
        )
