"""Seeded identity suite behind the verify command.

Each check fits descriptors on seeded random data and compares two
independent computations of the same quantity: the kernel-side algebra
against an explicitly materialized feature space, or two kernel-side forms
against each other.
"""

from __future__ import annotations

import dataclasses
import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from loguru import logger

from pycovd.divergences import DivergenceKind
from pycovd.models.kernel import KernelSpec
from pycovd.models.observation import ObservationSet
from pycovd.models.reports import VerificationCheck, VerificationReport
from pycovd.oracle import (
    ExplicitMapKernel,
    determinant_lemma,
    explicit_divergence,
    materialize,
    trace_identity,
    woodbury_inverse,
)
from pycovd.rkhs_covd import fit_rkhs_covds, weight_identity_residual
from pycovd.rkhs_divergences import (
    burg_h,
    euclidean_sq_h,
    jeffreys_h,
    jeffreys_h_hat,
    stein_h,
    stein_h_hat,
    stein_h_reference,
)
from pycovd.utils.helpers import relative_error

if TYPE_CHECKING:
    from collections.abc import Callable

    from pycovd.rkhs_covd import RkhsCovd

IDENTITY_TOL = 1e-8
ORACLE_TOL = 1e-6
LIMIT_TOL = 1e-3
LIMIT_DECAY = 10.0
STEIN_HAT_TOL = 1e-9
CORRUPT_FACTOR = 1.0 + 1e-3
ORACLE_RHO_SCALE = 1e-3
WEIGHT_IDENTITY_CONFIGURATIONS = 50


class _OracleCase(NamedTuple):
    kernel: KernelSpec
    n: int
    m: int
    r: int


ORACLE_CASES = (
    _OracleCase(KernelSpec.linear(), n=3, m=20, r=3),
    _OracleCase(KernelSpec.polynomial(2, 0.0), n=2, m=30, r=3),
    _OracleCase(KernelSpec.polynomial(2, 1.0), n=2, m=30, r=4),
)

ORACLE_DIVERGENCES: dict[
    str, tuple[Callable[[RkhsCovd, RkhsCovd], float], DivergenceKind]
] = {
    "oracle_euclidean": (euclidean_sq_h, DivergenceKind.FROBENIUS_SQ),
    "oracle_burg": (burg_h, DivergenceKind.BURG),
    "oracle_jeffreys": (jeffreys_h, DivergenceKind.JEFFREYS),
    "oracle_stein": (stein_h, DivergenceKind.STEIN),
    "oracle_stein_hat": (stein_h_hat, DivergenceKind.STEIN),
}


def _observations(rng: np.random.Generator, n: int, m: int) -> ObservationSet:
    rotation, _ = np.linalg.qr(rng.standard_normal((n, n)))
    mixing = rotation * rng.uniform(0.7, 1.5, size=n)
    return ObservationSet(mixing @ rng.standard_normal((n, m)))


def _pair(
    rng: np.random.Generator, case: _OracleCase, rho_scale: float = ORACLE_RHO_SCALE
) -> list[RkhsCovd]:
    sets = [_observations(rng, case.n, case.m) for _ in range(2)]
    return fit_rkhs_covds(case.kernel, sets, case.r, rho_scale=rho_scale)


def _scaled_error(observed: float, expected: float) -> float:
    return abs(observed - expected) / max(1.0, abs(expected))


def _check(
    name: str, observed: float, tolerance: float, detail: str = ""
) -> VerificationCheck:
    passed = bool(math.isfinite(observed) and observed <= tolerance)
    log = logger.debug if passed else logger.warning
    log("{}: observed {:.3g} (tolerance {:.0e})", name, observed, tolerance)
    return VerificationCheck(
        name=name, passed=passed, observed=observed, tolerance=tolerance, detail=detail
    )


def check_weight_identity(
    rng: np.random.Generator,
    configurations: int = WEIGHT_IDENTITY_CONFIGURATIONS,
    *,
    corrupt: bool = False,
) -> VerificationCheck:
    """W' K W = Lambda - rho I over linear, polynomial and RBF fits."""
    kernels = [KernelSpec.linear(), KernelSpec.polynomial(3, 1.0), KernelSpec.rbf()]
    worst = 0.0
    for index in range(configurations):
        kernel = kernels[index % len(kernels)]
        n = int(rng.integers(2, 6))
        m = int(rng.integers(15, 40))
        sets = [_observations(rng, n, m) for _ in range(2)]
        for fitted in fit_rkhs_covds(kernel, sets, r=min(n, 4), seed=index):
            covd = (
                dataclasses.replace(fitted, weights=fitted.weights * CORRUPT_FACTOR)
                if corrupt
                else fitted
            )
            worst = max(worst, weight_identity_residual(covd))
    detail = f"{configurations} configurations"
    if corrupt:
        detail += ", W perturbed"
    return _check("weight_identity", worst, IDENTITY_TOL, detail)


def check_explicit_identities(
    rng: np.random.Generator, pairs: int
) -> list[VerificationCheck]:
    """Determinant lemma, Woodbury inverse and cross trace in feature space."""
    worst = dict.fromkeys(
        ("sylvester_determinant", "woodbury_inverse", "trace_identity"), 0.0
    )
    for index in range(pairs):
        case = ORACLE_CASES[index % len(ORACLE_CASES)]
        k = ExplicitMapKernel(case.kernel, case.n)
        a, b = _pair(rng, case)
        explicit, kernel_side = determinant_lemma(k, a)
        worst["sylvester_determinant"] = max(
            worst["sylvester_determinant"], _scaled_error(explicit, kernel_side)
        )
        inverse, woodbury = woodbury_inverse(k, a)
        worst["woodbury_inverse"] = max(
            worst["woodbury_inverse"], relative_error(woodbury, inverse)
        )
        explicit, kernel_side = trace_identity(k, a, b)
        worst["trace_identity"] = max(
            worst["trace_identity"], _scaled_error(kernel_side, explicit)
        )
    return [_check(name, value, IDENTITY_TOL) for name, value in worst.items()]


def check_oracle_divergences(
    rng: np.random.Generator, pairs: int
) -> list[VerificationCheck]:
    """Kernel-side divergences against the same divergence on materialized C."""
    worst = dict.fromkeys(ORACLE_DIVERGENCES, 0.0)
    for index in range(pairs):
        case = ORACLE_CASES[index % len(ORACLE_CASES)]
        k = ExplicitMapKernel(case.kernel, case.n)
        a, b = _pair(rng, case)
        c_a, c_b = materialize(k, a), materialize(k, b)
        for name, (kernel_side, kind) in ORACLE_DIVERGENCES.items():
            expected = explicit_divergence(kind, c_a, c_b)
            worst[name] = max(worst[name], _scaled_error(kernel_side(a, b), expected))
    return [_check(name, value, ORACLE_TOL) for name, value in worst.items()]


def check_jeffreys_limit(rng: np.random.Generator, pairs: int) -> VerificationCheck:
    """2 rho J_H approaches the practical Jeffreys form linearly in rho.

    rho steps through 1e-2, 1e-4 and 1e-6 times the mean eigenvalue; the
    relative gap must end below LIMIT_TOL and shrink at least LIMIT_DECAY
    times per step.
    """
    case = _OracleCase(KernelSpec.linear(), n=4, m=30, r=3)
    scales = (1e-2, 1e-4, 1e-6)
    worst = 0.0
    slowest = math.inf
    for _ in range(pairs):
        sets = [_observations(rng, case.n, case.m) for _ in range(2)]
        base = fit_rkhs_covds(case.kernel, sets, case.r, rho=0.0)
        mean = float(np.mean(np.concatenate([x.eigenvalues for x in base])))
        target = jeffreys_h_hat(*base)
        gaps = []
        for scale in scales:
            a, b = fit_rkhs_covds(case.kernel, sets, case.r, rho=scale * mean)
            gaps.append(abs(2.0 * a.rho * jeffreys_h(a, b) - target) / target)
        worst = max(worst, gaps[-1])
        slowest = min(
            slowest,
            *(
                coarse / fine if fine > 0 else math.inf
                for coarse, fine in zip(gaps, gaps[1:], strict=False)
            ),
        )
    detail = f"smallest gap decay between rho steps {slowest:.3g}"
    check = _check("jeffreys_limit", worst, LIMIT_TOL, detail)
    if slowest < LIMIT_DECAY:
        check = check.model_copy(update={"passed": False})
    return check


def check_stein_equivalence(
    rng: np.random.Generator, pairs: int
) -> list[VerificationCheck]:
    """stein_h_hat equals stein_h, and stein_h equals its block-Gram form."""
    case = _OracleCase(KernelSpec.rbf(), n=3, m=25, r=5)
    hat_error = 0.0
    reference_error = 0.0
    for index in range(pairs):
        sets = [_observations(rng, case.n, case.m) for _ in range(2)]
        a, b = fit_rkhs_covds(
            case.kernel, sets, case.r, rho_scale=ORACLE_RHO_SCALE, seed=index
        )
        exact = stein_h(a, b)
        hat_error = max(hat_error, _scaled_error(stein_h_hat(a, b), exact))
        reference_error = max(
            reference_error, _scaled_error(stein_h_reference(a, b), exact)
        )
    return [
        _check("stein_hat_equivalence", hat_error, STEIN_HAT_TOL),
        _check("stein_reference", reference_error, IDENTITY_TOL),
    ]


def run_verification(
    seed: int = 0, *, pairs: int = 10, corrupt: bool = False
) -> VerificationReport:
    """Run every identity check once on data drawn from one seed.

    Args:
        seed: Seed of all random data.
        pairs: Random pairs per check.
        corrupt: Perturb W before the weight identity check.

    Returns:
        The report; report.passed is False if any check failed.

    """
    rng = np.random.default_rng(seed)
    checks = [check_weight_identity(rng, corrupt=corrupt)]
    checks.extend(check_explicit_identities(rng, pairs))
    checks.extend(check_oracle_divergences(rng, pairs))
    checks.append(check_jeffreys_limit(rng, pairs))
    checks.extend(check_stein_equivalence(rng, pairs))
    report = VerificationReport(seed=seed, checks=checks)
    logger.info(
        "Verification: {} of {} identities passed",
        sum(c.passed for c in checks),
        len(checks),
    )
    return report
