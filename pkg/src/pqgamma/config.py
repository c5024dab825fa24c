"""Default truncation policy values and identity-check tolerances."""

from __future__ import annotations

DEFAULT_REL_TOL = 1e-14
DEFAULT_MAX_TERMS = 10_000

# Gamma poles are reported when x lies this close to a nonpositive integer.
POLE_TOL = 1e-9

# A Pochhammer factor 1 - z q^k this small is an exact zero that rounding spoiled.
ZERO_FACTOR_TOL = 1e-13

# Jackson sums stop after this many consecutive negligible terms.
JACKSON_QUIET_TERMS = 5

# Per-family pass thresholds for the identity suites. Each sits roughly an
# order of magnitude above the noise observed at the default policy.
TOLERANCES: dict[str, float] = {
    "powers.finite": 1e-12,
    "powers.telescoped": 1e-10,
    "gamma.recurrence": 1e-10,
    "gamma.legendre": 1e-8,
    "gamma.gauss": 1e-7,
    "beta.recurrences": 1e-9,
    "jackson.representation": 1e-8,
}
