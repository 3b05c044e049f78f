"""Covariance descriptors and Bregman divergences in RKHS.

.. include:: ../README.md

"""

from importlib_metadata import version

from pycovd.models.config import RunConfig, load_config  # noqa: F401
from pycovd.models.kernel import KernelSpec  # noqa: F401
from pycovd.models.observation import ObservationSet  # noqa: F401
from pycovd.rkhs_covd import RkhsCovd, fit_rkhs_covd, fit_rkhs_covds  # noqa: F401
from pycovd.workflow import CovdWorkflow  # noqa: F401

__version__ = version(__name__)
