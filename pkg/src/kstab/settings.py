"""Process-wide defaults (overridable from the CLI)."""

# Extra interpolation samples that must agree with the fitted polynomial.
GUARD_SAMPLES = 2

# Pivot cap for the exact simplex solver.
MAX_PIVOTS = 10_000

# Largest number of lattice slices a single lift count may walk before the
# lattice route refuses and the closed-form route has to be used instead.
LIFT_BUDGET = 50_000_000
