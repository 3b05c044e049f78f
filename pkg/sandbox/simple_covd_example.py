"""Simple comparison of observation-space and RKHS covariance descriptors."""

import sys

from loguru import logger

from pycovd.classify import LabeledSet, nn_classify_many
from pycovd.divergences import DivergenceKind, PracticalKind
from pycovd.features import SyntheticMode, synthetic_two_class
from pycovd.models.kernel import KernelSpec
from pycovd.models.reports import AccuracyReport
from pycovd.rkhs_covd import fit_rkhs_covds
from pycovd.spd_core import covariance_descriptor

logger.remove(0)
logger.add(sys.stderr, level="INFO")

# Both classes share mean and covariance, only higher moments differ
SEED = 0
PER_CLASS = 40
TRAIN_PER_CLASS = 20
N, M, R = 3, 200, 3


def split(items, labels):
    """Split per-class blocks into train and test halves."""
    train, test = ([], []), ([], [])
    for index, pair in enumerate(zip(items, labels, strict=True)):
        target = train if index % PER_CLASS < TRAIN_PER_CLASS else test
        target[0].append(pair[0])
        target[1].append(pair[1])
    return LabeledSet(tuple(train[0]), tuple(train[1])), test


def evaluate(name, descriptors, labels, kind):
    """Nearest-neighbour accuracy of one descriptor family."""
    train, (queries, truth) = split(descriptors, labels)
    predicted = nn_classify_many(train, queries, kind)
    report = AccuracyReport.from_predictions(truth, predicted)
    logger.info(f"{name}:\n{report.as_table()}")


sets, labels = synthetic_two_class(SEED, PER_CLASS, N, M, SyntheticMode.HIGHER_ORDER)

evaluate(
    "Observation-space Stein",
    [covariance_descriptor(x) for x in sets],
    labels,
    DivergenceKind.STEIN,
)

covds = fit_rkhs_covds(KernelSpec.rbf(), sets, R, seed=SEED)
logger.info(f"Kernel {covds[0].kernel}, rho {covds[0].rho:.3g}")
evaluate("RKHS Stein (rho-free)", covds, labels, PracticalKind.STEIN_HAT)
