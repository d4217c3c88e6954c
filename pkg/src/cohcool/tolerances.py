"""Shared numerical tolerances.

Every hard-coded tolerance in the package lives here so the choices are
auditable in one place.
"""

# Density-matrix validity
HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_EIG_FLOOR = -1e-10

# Channel hygiene
TRACE_PRESERVATION_ATOL = 1e-10
CHOI_PSD_FLOOR = -1e-10
VECTORIZATION_COMPAT_ATOL = 1e-10

# Fixed-point extraction
FIXED_POINT_DEGENERACY_GAP = 1e-8
POWER_ITER_TOL = 1e-12
POWER_ITER_MAX = 1_000_000

# Eigen-decomposition tie-breaking
EIGENVALUE_DEGENERACY_GAP = 1e-12

# Work below this (per unit level splitting) is double-precision dust from
# the tensor arithmetic, not a physical exchange; efficiency ratios against
# it are reported as nan.
WORK_DUST_ATOL = 1e-14
