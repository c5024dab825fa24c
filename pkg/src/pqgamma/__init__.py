"""(p,q)-deformed special functions: twin-basic numbers, (p,q)-Gamma and Beta,
q-Pochhammer products, Jackson q-integrals, and an identity checker."""

from .errors import (
    ConvergenceError,
    DomainError,
    IntegrandError,
    ParameterRangeError,
    ParseError,
    PoleError,
    PQError,
)
from .gamma_beta import (
    GammaValue,
    beta_pq,
    check_beta_recurrences,
    check_gamma_recurrence,
    check_gauss,
    check_legendre,
    gamma_classical_euler,
    gamma_pq,
    gamma_pq_integer,
    gamma_q,
)
from .identities import IdentityReport, check_power_identity, run_suite
from .jackson import (
    gamma_q_integral_representation,
    q_integral,
    q_integral_a_to_inf,
    q_integral_a_to_zero,
    q_integral_neg_inf_to_a,
    q_integral_zero_to_a,
)
from .pq_core import (
    GradedProduct,
    PowerKind,
    PQBase,
    pq_binomial,
    pq_factorial,
    pq_number,
    pq_number_real,
    pq_power,
    pq_power_factored,
)
from .q_series import (
    LogValue,
    PrecisionPolicy,
    TruncatedValue,
    q_exp_big,
    q_exp_small,
    q_pochhammer_finite,
    q_pochhammer_infinite,
)

__version__ = "0.1.0"
