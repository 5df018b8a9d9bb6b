"""
Constants for the Entropy Algebra Toolkit
"""

# Floating comparisons
DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_TOL = 1e-12

# Orthogonality threshold, scaled by max(⟦ξ∘η⟧, 1)
ORTHOGONALITY_THRESHOLD = 1e-9

# Sampling
DEFAULT_SEED = 20240611
DEFAULT_SAMPLE_SIZE = 10_000
DEFAULT_PARTITIONS = 4
DEFAULT_WORKERS = 1
SELF_CHECK_SAMPLE_SIZE = 200

# Finite carriers up to this many elements are enumerated instead of sampled
EXHAUSTIVE_CARRIER_LIMIT = 64

# Sign of ⟦ξ∔ξ⟧ − 2⟦ξ⟧
SIGN_NEGATIVE = -1
SIGN_POSITIVE = 1
SIGN_UNDETERMINED = 0
DEFAULT_SIGN_CONVENTION = SIGN_POSITIVE

# Check modes
CHECK_MODES = {
    "exhaustive": "exhaustive",
    "sampled": "sampled",
}

# Profile provenance
PROVENANCE_CLOSED_FORM = "closed_form"
PROVENANCE_ESTIMATED = "estimated"

# Correlation classes
CORRELATION_CLASSES = {
    "orthogonal": "orthogonal",
    "positive": "positively correlated",
    "negative": "negatively correlated",
}

# FiniteStructure JSON marker for values in the bin G*∖G
FORMAL_PAIR_MARKER = "*"

# Generalized Cauchy-Schwarz
DEFAULT_CS_DEPTH = 64
CS_PAIR_LIMIT = 200
CS_STABILITY_TOLERANCE = 1e-6

# Entropy construction
CONSISTENCY_DIVERGENCE_TOLERANCE = 0.02
DEFAULT_PRESENTATION_LENGTH = 3

# Scoring-rule embedding: a = (1 - ratio_sup) - max(EMBED_MIN_MARGIN, EMBED_REL_MARGIN * ratio_sup)
EMBED_MIN_MARGIN = 0.5
EMBED_REL_MARGIN = 0.05
EMBED_RATIO_CAP = 1e6

# Variogram models accepted as entropies (nugget must be zero)
VARIOGRAM_MODELS = ("power", "linear", "gaussian", "exponential", "spherical")

# Shannon alphabet extension cap (number of product atoms)
SHANNON_EXTENSION_CAP = 4096

# Poisson truncated series: mean + POISSON_SD_MULTIPLE * sqrt(mean), at least POISSON_MIN_TERMS
POISSON_MIN_TERMS = 60
POISSON_SD_MULTIPLE = 40

# Statistical model families
MODEL_FAMILIES = {
    "stable": "stable",
    "max_stable": "max_stable",
    "min_stable": "min_stable",
}
CARRIER_DOMAINS = {
    "nonneg": "nonneg",
    "full": "full",
}
DEFAULT_KS_LEVEL = 0.01
DEFAULT_MERGE_SAMPLE_SIZE = 10_000
QUANTILE_LEVELS = (0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75)
QUANTILE_LOG_TOLERANCE = 0.25
CALIBRATION_SIGMAS = 3.0

# Risk fitting
DEFAULT_GRID_RESOLUTION = 21
DEFAULT_REFINE_ITERATIONS = 2000
DEFAULT_FIT_TOLERANCE = 1e-10
BOUNDARY_TOLERANCE = 1e-6

# CLI
SUBCOMMANDS = ("check", "profile", "compare", "reconstruct", "embed", "simulate", "fit", "report")
OUTPUT_FORMATS = ("json", "csv")
EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INPUT_ERROR = 2
DEFAULT_CONFIG_FILE = "config/analysis_config.json"
REPORT_SAMPLE_SIZE = 1000
