"""q-Pochhammer products, their truncation control, and the q-exponentials.

Infinite products are accumulated as a sum of ``log|1 - z q^k|`` plus a sign
count, so partial products never leave floating-point range. Truncation stops
at the first N with ``|z| |q|^N / (1 - |q|) < rel_tol``. That quantity bounds
the first-order tail of the log-sum and is reported as ``tail_bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_MAX_TERMS, DEFAULT_REL_TOL, ZERO_FACTOR_TOL
from .errors import ConvergenceError, DomainError

__all__ = [
    "PrecisionPolicy",
    "TruncatedValue",
    "LogValue",
    "q_pochhammer_finite",
    "q_pochhammer_infinite",
    "log_q_pochhammer_infinite",
    "q_exp_big",
    "q_exp_small",
]

# Below this many factors a plain loop beats numpy's call overhead.
_VECTOR_THRESHOLD = 64


@dataclass(frozen=True)
class PrecisionPolicy:
    rel_tol: float = DEFAULT_REL_TOL
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self) -> None:
        if not 0 < self.rel_tol < 1:
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class TruncatedValue:
    value: float
    terms_used: int
    tail_bound: float


@dataclass(frozen=True)
class LogValue:
    """A real number stored as ``sign * exp(log_abs)``."""

    sign: int
    log_abs: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if (self.sign == 0) != (self.log_abs == -math.inf):
            raise ValueError("sign is 0 exactly when log_abs is -inf")

    @classmethod
    def zero(cls) -> LogValue:
        return cls(0, -math.inf)

    @classmethod
    def from_float(cls, x: float) -> LogValue:
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return self.sign * math.inf

    def __mul__(self, other: LogValue) -> LogValue:
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign, self.log_abs + other.log_abs)

    def __truediv__(self, other: LogValue) -> LogValue:
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogValue")
        if self.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign, self.log_abs - other.log_abs)

    def __pow__(self, exponent: float) -> LogValue:
        if self.sign == 0:
            if exponent > 0:
                return LogValue.zero()
            raise ZeroDivisionError("zero to a nonpositive power")
        if self.sign < 0:
            if float(exponent).is_integer():
                sign = -1 if int(exponent) % 2 else 1
                return LogValue(sign, self.log_abs * exponent)
            raise DomainError("negative LogValue to a non-integer power")
        return LogValue(1, self.log_abs * exponent)


def q_pochhammer_finite(z: float, q: float, n: int) -> float:
    """``(z; q)_n``, the plain product of ``1 - z q^k`` for ``k < n``."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    result = 1.0
    for k in range(n):
        result *= 1 - z * q**k
    return result


def _terms_needed(z: float, q: float, rel_tol: float) -> int:
    if z == 0:
        return 0
    aq = abs(q)
    if aq == 0:
        return 1
    bound = rel_tol * (1 - aq) / abs(z)
    if bound >= 1:
        return 0
    n = max(0, math.ceil(math.log(bound) / math.log(aq)))
    # Guard the float rounding of the log ratio either way.
    while n > 0 and abs(z) * aq ** (n - 1) / (1 - aq) < rel_tol:
        n -= 1
    while abs(z) * aq**n / (1 - aq) >= rel_tol:
        n += 1
    return n


def log_q_pochhammer_infinite(
    z: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> tuple[LogValue, int, float]:
    """``(z; q)_inf`` as a :class:`LogValue`, with terms used and tail bound."""
    if not abs(q) < 1:
        raise DomainError(f"(z; q)_inf needs |q| < 1, got q={q!r}")
    if not math.isfinite(z):
        raise DomainError(f"z must be finite, got {z!r}")
    n = _terms_needed(z, q, policy.rel_tol)
    if n > policy.max_terms:
        raise ConvergenceError(
            f"(z; q)_inf with z={z!r}, q={q!r} needs {n} factors, above max_terms={policy.max_terms}"
        )
    tail = abs(z) * abs(q) ** n / (1 - abs(q))
    if n == 0:
        return LogValue(1, 0.0), 0, tail

    if n < _VECTOR_THRESHOLD:
        u = [z * q**k for k in range(n)]
        factors = [1 - uk for uk in u]
        if any(abs(f) <= ZERO_FACTOR_TOL * max(1.0, abs(uk)) for f, uk in zip(factors, u)):
            return LogValue.zero(), n, tail
        negatives = sum(1 for f in factors if f < 0)
        logs = [math.log1p(-uk) if uk < 1 else math.log(uk - 1) for uk in u]
    else:
        u = z * np.power(q, np.arange(n, dtype=float))
        factors = 1 - u
        if np.any(np.abs(factors) <= ZERO_FACTOR_TOL * np.maximum(1.0, np.abs(u))):
            return LogValue.zero(), n, tail
        below = u < 1
        negatives = int(np.count_nonzero(~below))
        logs = np.where(below, np.log1p(-np.where(below, u, 0.0)), np.log(np.where(below, 2.0, u) - 1))
    log_abs = math.fsum(logs)
    return LogValue(-1 if negatives % 2 else 1, log_abs), n, tail


def q_pochhammer_infinite(
    z: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> TruncatedValue:
    """``(z; q)_inf = prod_{k>=0} (1 - z q^k)`` for ``|q| < 1``."""
    log_value, n, tail = log_q_pochhammer_infinite(z, q, policy)
    return TruncatedValue(log_value.to_float(), n, tail)


def q_exp_big(z: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> TruncatedValue:
    """Big q-exponential ``E_q(z) = (-(1-q) z; q)_inf``, entire in z."""
    if not 0 < q < 1:
        raise DomainError(f"E_q needs 0 < q < 1, got q={q!r}")
    return q_pochhammer_infinite(-(1 - q) * z, q, policy)


def q_exp_small(z: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> TruncatedValue:
    """Small q-exponential ``e_q(z) = 1 / ((1-q) z; q)_inf``."""
    if not 0 < q < 1:
        raise DomainError(f"e_q needs 0 < q < 1, got q={q!r}")
    log_value, n, tail = log_q_pochhammer_infinite((1 - q) * z, q, policy)
    if log_value.sign == 0:
        raise DomainError(f"e_q has a pole at z={z!r}")
    return TruncatedValue((LogValue(1, 0.0) / log_value).to_float(), n, tail)
