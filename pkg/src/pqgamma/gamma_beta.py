"""Gamma and Beta functions: classical oracle, q-Gamma, and the (p,q) family.

The raw (p,q) product ratio has partial products

    p^{N(1-x)} (p-q)^{1-x} (r;r)_N / (r^x;r)_N,    r = q/p,

which diverge as N grows unless p = 1. The realization used here is

    Gamma_{p,q}(x) = p^{(x-1)(x-2)/2} Gamma_r(x).

It satisfies ``Gamma_{p,q}(x+1) = [x]_{p,q} Gamma_{p,q}(x)`` exactly,
gives ``[n]_{p,q}!`` at x = n+1, and is Jackson's Gamma_q when p = 1. The
p-power bookkeeping cancels in both multiplication formulas, so they
hold verbatim.

All arithmetic is carried in :class:`~pqgamma.q_series.LogValue` form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import POLE_TOL
from .errors import DomainError, PoleError
from .pq_core import PQBase, PowerKind, pq_number, pq_number_real, pq_power
from .q_series import DEFAULT_POLICY, LogValue, PrecisionPolicy, log_q_pochhammer_infinite

__all__ = [
    "GammaValue",
    "gamma_q",
    "gamma_pq",
    "gamma_pq_integer",
    "gamma_classical_euler",
    "beta_pq",
    "relative_residual",
    "check_gamma_recurrence",
    "check_legendre",
    "check_gauss",
    "check_beta_recurrences",
]


@dataclass(frozen=True)
class GammaValue:
    log_value: LogValue
    terms_used: int = 0
    tail_bound: float = 0.0

    @property
    def sign(self) -> int:
        return self.log_value.sign

    @property
    def log_abs(self) -> float:
        return self.log_value.log_abs

    @property
    def value(self) -> float:
        return self.log_value.to_float()

    def __mul__(self, other: GammaValue) -> GammaValue:
        return GammaValue(
            self.log_value * other.log_value,
            self.terms_used + other.terms_used,
            self.tail_bound + other.tail_bound,
        )

    def __truediv__(self, other: GammaValue) -> GammaValue:
        return GammaValue(
            self.log_value / other.log_value,
            self.terms_used + other.terms_used,
            self.tail_bound + other.tail_bound,
        )

    def scaled(self, factor: LogValue) -> GammaValue:
        return GammaValue(self.log_value * factor, self.terms_used, self.tail_bound)


def _check_pole(x: float) -> None:
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    nearest = round(x)
    if nearest <= 0 and abs(x - nearest) <= POLE_TOL:
        raise PoleError(f"pole at x={x!r} (nonpositive integer {nearest})")


def gamma_q(x: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> GammaValue:
    """Jackson's q-Gamma, with separate product formulas for 0<q<1 and q>1."""
    if not (math.isfinite(q) and q > 0) or q == 1:
        raise DomainError(f"Gamma_q needs q > 0 and q != 1, got q={q!r}")
    _check_pole(x)
    if q < 1:
        num, n1, t1 = log_q_pochhammer_infinite(q, q, policy)
        den, n2, t2 = log_q_pochhammer_infinite(q**x, q, policy)
        prefactor = LogValue(1, (1 - x) * math.log1p(-q))
    else:
        s = 1 / q
        num, n1, t1 = log_q_pochhammer_infinite(s, s, policy)
        den, n2, t2 = log_q_pochhammer_infinite(q ** (-x), s, policy)
        # binom(x, 2) read as x(x-1)/2 at real x
        prefactor = LogValue(1, (1 - x) * math.log(q - 1) + x * (x - 1) / 2 * math.log(q))
    if den.sign == 0:
        raise PoleError(f"pole at x={x!r}")
    return GammaValue(num / den * prefactor, n1 + n2, t1 + t2)


def gamma_pq(x: float, base: PQBase, policy: PrecisionPolicy = DEFAULT_POLICY) -> GammaValue:
    """(p,q)-Gamma, ``p^{(x-1)(x-2)/2} Gamma_{q/p}(x)``; needs ``0 < q < p``."""
    if not base.gamma_valid:
        raise DomainError(f"Gamma_{{p,q}} needs 0 < q < p, got p={base.p!r}, q={base.q!r}")
    g = gamma_q(x, base.r, policy)
    return g.scaled(LogValue(1, (x - 1) * (x - 2) / 2 * math.log(base.p)))


def gamma_pq_integer(n: int, base: PQBase) -> float:
    """``Gamma_{p,q}(n+1) = (p ⊖ q)^n / (p-q)^n`` as a finite product."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    p, q = base.p, base.q
    if p == q:
        raise DomainError("Gamma_{p,q}(n+1) is undefined for p = q")
    return pq_power(p, q, n, PowerKind.OMINUS, base) / (p - q) ** n


def gamma_classical_euler(x: float, n_limit: int) -> float:
    """Euler's limit ``n! n^x / (x(x+1)...(x+n))`` at a fixed n, in log domain.

    Converges like O(1/n); meant only as a slow independent oracle.
    """
    if not x > 0:
        raise DomainError(f"the Euler limit oracle needs x > 0, got {x!r}")
    if n_limit < 1:
        raise DomainError(f"n_limit must be positive, got {n_limit}")
    log_nfact = math.fsum(np.log(np.arange(1, n_limit + 1, dtype=float)))
    log_den = math.fsum(np.log(x + np.arange(n_limit + 1, dtype=float)))
    return math.exp(log_nfact + x * math.log(n_limit) - log_den)


def beta_pq(
    x: float, y: float, base: PQBase, policy: PrecisionPolicy = DEFAULT_POLICY
) -> GammaValue:
    """``B_{p,q}(x, y) = Gamma(x) Gamma(y) / Gamma(x+y)`` on the (p,q) base."""
    return gamma_pq(x, base, policy) * gamma_pq(y, base, policy) / gamma_pq(x + y, base, policy)


def relative_residual(lhs: LogValue, rhs: LogValue) -> float:
    """``|lhs - rhs| / |lhs|`` computed from log forms."""
    if lhs.sign == 0:
        return 0.0 if rhs.sign == 0 else math.inf
    if rhs.sign == 0:
        return 1.0
    d = rhs.log_abs - lhs.log_abs
    if lhs.sign == rhs.sign:
        return abs(math.expm1(d))
    return 1.0 + math.exp(d)


def check_gamma_recurrence(
    x: float, base: PQBase, policy: PrecisionPolicy = DEFAULT_POLICY
) -> float:
    lhs = gamma_pq(x + 1, base, policy)
    rhs = gamma_pq(x, base, policy).scaled(LogValue.from_float(pq_number_real(x, base)))
    return relative_residual(lhs.log_value, rhs.log_value)


def check_legendre(x: float, base: PQBase, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    b2 = base.power(2)
    lhs = gamma_pq(2 * x, base, policy) * gamma_pq(0.5, b2, policy)
    rhs = gamma_pq(x, b2, policy) * gamma_pq(x + 0.5, b2, policy)
    rhs = rhs.scaled(LogValue(1, (2 * x - 1) * math.log(base.p + base.q)))
    return relative_residual(lhs.log_value, rhs.log_value)


def check_gauss(
    x: float, n: int, base: PQBase, policy: PrecisionPolicy = DEFAULT_POLICY
) -> float:
    if n < 1:
        raise DomainError(f"the Gauss formula needs n >= 1, got {n}")
    bn = base.power(n)
    lhs = gamma_pq(n * x, base, policy)
    for k in range(1, n):
        lhs = lhs * gamma_pq(k / n, bn, policy)
    rhs = gamma_pq(x, bn, policy)
    for k in range(1, n):
        rhs = rhs * gamma_pq(x + k / n, bn, policy)
    rhs = rhs.scaled(LogValue(1, (n * x - 1) * math.log(pq_number(n, base))))
    return relative_residual(lhs.log_value, rhs.log_value)


def check_beta_recurrences(
    x: float, y: float, n: int, base: PQBase, policy: PrecisionPolicy = DEFAULT_POLICY
) -> tuple[float, float, float, float]:
    """Residuals of the four Beta shift relations, in order."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    p, q = base.p, base.q
    bxy = beta_pq(x, y, base, policy)
    bxy1 = beta_pq(x, y + 1, base, policy)
    bx1y = beta_pq(x + 1, y, base, policy)
    bxny = beta_pq(x + n, y, base, policy)
    nx = pq_number_real(x, base)
    ny = pq_number_real(y, base)
    nxy = pq_number_real(x + y, base)
    shift = pq_power(p**x, q**x, n, PowerKind.OMINUS, base) / pq_power(
        p ** (x + y), q ** (x + y), n, PowerKind.OMINUS, base
    )
    return (
        relative_residual(bxy1.log_value, bxy.scaled(LogValue.from_float(ny / nxy)).log_value),
        relative_residual(bx1y.log_value, bxy.scaled(LogValue.from_float(nx / nxy)).log_value),
        relative_residual(bx1y.log_value, bxy1.scaled(LogValue.from_float(nx / ny)).log_value),
        relative_residual(bxny.log_value, bxy.scaled(LogValue.from_float(shift)).log_value),
    )
