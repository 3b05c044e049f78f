"""Covariance descriptor library exceptions."""


class CovdError(Exception):
    """Raise if any pycovd operation fails."""


class ConfigError(CovdError):
    """Raise if a configuration value or parameter is invalid."""


class DataError(CovdError):
    """Raise if input data cannot be used."""


class DatasetIoError(DataError):
    """Raise if a manifest or data file cannot be read or written."""


class DimensionMismatchError(DataError):
    """Raise if array dimensions are inconsistent."""


class InvalidObservationError(DataError):
    """Raise if observations are non-finite or too few."""


class EmptyGridError(ConfigError):
    """Raise if a cross-validation grid has no points."""


class UnsupportedKernelError(ConfigError):
    """Raise if a kernel has no explicit finite feature map."""


class NumericError(CovdError):
    """Raise if a numerical computation fails."""


class CholeskyFailureError(NumericError):
    """Raise if a matrix is not positive definite."""


class EigenDecompositionError(NumericError):
    """Raise if the symmetric eigensolver does not converge."""


class RankDeficientError(NumericError):
    """Raise if a centered Gram matrix has no usable eigenvalue."""


class RhoTooLargeError(NumericError):
    """Raise if rho is not below every retained eigenvalue."""


class RhoMismatchError(NumericError):
    """Raise if two descriptors do not share a usable rho."""


class RankMismatchError(NumericError):
    """Raise if two descriptors do not share the retained rank."""


class KernelMismatchError(NumericError):
    """Raise if two descriptors were fitted with different kernels."""


class NumericConsistencyError(NumericError):
    """Raise if a divergence comes out clearly negative."""


class SteinBetaInvalidError(NumericError):
    """Raise if a Stein kernel beta is outside the positive definite set."""


class NonConvergenceError(NumericError):
    """Raise if an iterative solver hits its iteration cap."""


class FeatureDimTooLargeError(NumericError):
    """Raise if an explicit feature space is too large to materialize."""


class VerificationError(CovdError):
    """Raise if a verification identity fails."""
