"""Numerical tolerances used across the library.

The underlying results are exact-arithmetic statements; these constants are
the floating-point substitutes.  They are deliberately centralized so tests
and documentation reference one source of truth.
"""

# Unit-norm / identity-product / eigen-residual checks (relative).
EPS_UNIT = 1e-10
EPS_ID = 1e-10
EPS_EIG = 1e-10

# Singularity and positive-definiteness thresholds (absolute, inputs O(1)).
EPS_SING = 1e-12
EPS_PD = 1e-12
EPS_PSD = 1e-12

# Open-unit-disk margin for noise correlations.
EPS_NORM = 1e-9

# Full-rank decision on the singular-value ratio of the main channel.
EPS_RANK = 1e-8

# Half-width of the refused band around the degradedness boundary.
EPS_CLASS = 1e-9

# KKT residual threshold.
EPS_KKT = 1e-8

# Relative tightness threshold for the capacity certificate verdict.
EPS_CERT = 1e-9

# Slack on the covariance trace budget (relative to max(1, P)).
EPS_TRACE = 1e-9

# Absolute tolerance on reproducing the unit eigenvalue of the bound matrix.
EIGEN_ONE_TOL = 1e-8

# Tolerance on the unit-coupling identity of the optimized correlation.
UNIT_COUPLING_TOL = 1e-9

# Grid sizes below this trigger a CLI warning.
RECOMMENDED_MIN_GRID = 64
