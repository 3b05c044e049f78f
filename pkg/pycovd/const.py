"""Numeric tolerances, defaults and exit codes."""

# Rank and symmetry
RANK_EPS = 1e-10
SYMMETRY_TOL = 1e-12

# Clamping of tiny negative divergence values (relative to the term scale)
OBSERVATION_CLAMP_TOL = 1e-10
RKHS_CLAMP_TOL = 1e-8

# Cholesky retry: jitter added to the diagonal, relative to the trace
CHOLESKY_JITTER = 1e-12

# Half-integer membership tolerance for the Stein kernel beta
STEIN_BETA_TOL = 1e-12

# Regularization: rho = DEFAULT_RHO_SCALE * mean retained eigenvalue
DEFAULT_RHO_SCALE = 1e-6
DEFAULT_RANK = 10

# Median heuristic
MEDIAN_HEURISTIC_MAX_POINTS = 2000

# Explicit feature-space materialization cap
ORACLE_MAX_FEATURE_DIM = 50

# SVM
DEFAULT_SVM_C = 1.0
DEFAULT_SVM_BETA = 1.0
DEFAULT_SVM_TOL = 1e-3
SMO_MAX_ITER = 1_000_000
SMO_TAU = 1e-12
GRAM_PSD_TOL = 1e-8

# Image features
KYLBERG_STRIDE = 4
KYLBERG_ORIGIN = 2
KYLBERG_FEATURES = 5
MIN_IMAGE_SIDE = 5

# Benchmark
BENCH_MIN_PAIRS = 100
BENCH_MIN_SIZES = 3
BENCH_EXPECTED_SLOPES = {
    "observation": (0.5, 1.6),
    "rkhs": (2.0, 3.6),
}

# Output formats
CSV_FLOAT_FORMAT = "%.17g"
MANIFEST_NAME = "manifest.json"

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_DATA_ERROR = 3
EXIT_NUMERIC_ERROR = 4
EXIT_VERIFICATION_FAILED = 5
