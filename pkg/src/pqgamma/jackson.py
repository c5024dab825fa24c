"""Jackson q-integrals over the four primitive interval shapes and their compositions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .config import JACKSON_QUIET_TERMS
from .errors import ConvergenceError, DomainError, IntegrandError, PQError
from .q_series import DEFAULT_POLICY, PrecisionPolicy, TruncatedValue, q_exp_big

__all__ = [
    "QLattice",
    "q_integral_zero_to_a",
    "q_integral_a_to_zero",
    "q_integral_a_to_inf",
    "q_integral_neg_inf_to_a",
    "q_integral",
    "gamma_q_integral_representation",
]

Integrand = Callable[[float], float]

TOWARD_ZERO = "toward-zero"
TOWARD_INFINITY = "toward-infinity"


@dataclass(frozen=True)
class QLattice:
    """Nodes ``a q^n`` (toward zero) or ``a q^(-n-1)`` (toward infinity), n >= 0."""

    q: float
    anchor: float
    direction: str = TOWARD_ZERO

    def __post_init__(self) -> None:
        if not 0 < self.q < 1:
            raise DomainError(f"Jackson integrals need 0 < q < 1, got q={self.q!r}")
        if self.direction not in (TOWARD_ZERO, TOWARD_INFINITY):
            raise DomainError(f"unknown lattice direction {self.direction!r}")

    def node(self, n: int) -> float:
        if self.direction == TOWARD_ZERO:
            return self.anchor * self.q**n
        return self.anchor * self.q ** (-n - 1)

    def weight(self, n: int) -> float:
        return self.q**n if self.direction == TOWARD_ZERO else self.q ** (-n)


def _evaluate(f: Integrand, t: float) -> float:
    try:
        value = float(f(t))
    except ConvergenceError:
        raise
    except (ArithmeticError, ValueError, TypeError) as exc:
        raise IntegrandError(f"integrand failed: {exc}", t) from exc
    if not math.isfinite(value):
        raise IntegrandError(f"integrand returned {value!r}", t)
    return value


def _lattice_sum(
    f: Integrand, lattice: QLattice, prefactor: float, policy: PrecisionPolicy
) -> TruncatedValue:
    terms: list[float] = []
    partial = 0.0
    quiet = 0
    for n in range(policy.max_terms):
        try:
            node, weight = lattice.node(n), lattice.weight(n)
        except OverflowError:
            node = weight = math.inf
        term = weight * _evaluate(f, node) if math.isfinite(node) else math.inf
        if not math.isfinite(term):
            raise ConvergenceError(
                f"Jackson sum term overflowed at lattice index {n}; the integral diverges"
            )
        terms.append(term)
        partial += term
        quiet = quiet + 1 if abs(term) <= policy.rel_tol * abs(partial) else 0
        if quiet >= JACKSON_QUIET_TERMS:
            total = math.fsum(terms)
            tail = abs(terms[-1]) / abs(total) if total else 0.0
            return TruncatedValue(prefactor * total, len(terms), tail)
    raise ConvergenceError(
        f"Jackson sum on anchor {lattice.anchor!r} ({lattice.direction}) did not settle "
        f"within max_terms={policy.max_terms}"
    )


def q_integral_zero_to_a(
    f: Integrand, a: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> TruncatedValue:
    """``a(1-q) sum_n q^n f(a q^n)`` for a > 0."""
    if not a > 0:
        raise DomainError(f"this shape needs a > 0, got a={a!r}")
    return _lattice_sum(f, QLattice(q, a, TOWARD_ZERO), a * (1 - q), policy)


def q_integral_a_to_zero(
    f: Integrand, a: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> TruncatedValue:
    """``-a(1-q) sum_n q^n f(a q^n)`` for a < 0."""
    if not a < 0:
        raise DomainError(f"this shape needs a < 0, got a={a!r}")
    return _lattice_sum(f, QLattice(q, a, TOWARD_ZERO), -a * (1 - q), policy)


def q_integral_a_to_inf(
    f: Integrand, a: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> TruncatedValue:
    """``a(1/q - 1) sum_n q^-n f(a q^(-n-1))`` for a > 0."""
    if not a > 0:
        raise DomainError(f"this shape needs a > 0, got a={a!r}")
    return _lattice_sum(f, QLattice(q, a, TOWARD_INFINITY), a * (1 / q - 1), policy)


def q_integral_neg_inf_to_a(
    f: Integrand, a: float, q: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> TruncatedValue:
    """``-a(1/q - 1) sum_n q^-n f(a q^(-n-1))`` for a < 0."""
    if not a < 0:
        raise DomainError(f"this shape needs a < 0, got a={a!r}")
    return _lattice_sum(f, QLattice(q, a, TOWARD_INFINITY), -a * (1 / q - 1), policy)


def _labelled(label: str, fn, *args) -> TruncatedValue:
    try:
        return fn(*args)
    except PQError as exc:
        exc.component = label
        if exc.args:
            exc.args = (f"[{label}] {exc.args[0]}",) + exc.args[1:]
        raise


def _negated(v: TruncatedValue) -> TruncatedValue:
    return TruncatedValue(-v.value, v.terms_used, v.tail_bound)


def _to_zero(f, a, q, policy) -> TruncatedValue | None:
    """The integral from a to 0, for any finite a."""
    label = f"int_{a!r}^0"
    if a < 0:
        return _labelled(label, q_integral_a_to_zero, f, a, q, policy)
    if a > 0:
        return _negated(_labelled(label, q_integral_zero_to_a, f, a, q, policy))
    return None


def _from_zero(f, b, q, policy) -> TruncatedValue | None:
    label = f"int_0^{b!r}"
    if b > 0:
        return _labelled(label, q_integral_zero_to_a, f, b, q, policy)
    if b < 0:
        return _negated(_labelled(label, q_integral_a_to_zero, f, b, q, policy))
    return None


def _combine(parts: list[TruncatedValue | None]) -> TruncatedValue:
    parts = [p for p in parts if p is not None]
    if not parts:
        return TruncatedValue(0.0, 0, 0.0)
    total = math.fsum(p.value for p in parts)
    abs_tail = sum(p.tail_bound * abs(p.value) for p in parts)
    return TruncatedValue(
        total,
        sum(p.terms_used for p in parts),
        abs_tail / abs(total) if total else abs_tail,
    )


def q_integral(
    f: Integrand,
    lower: float,
    upper: float,
    q: float,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    anchor: float = 1.0,
) -> TruncatedValue:
    """Jackson integral between extended reals, assembled from the primitive shapes.

    A finite interval is split at 0. Improper ends are split at ``+anchor``
    and/or ``-anchor`` when the finite end lies on the wrong side of 0.
    """
    if not 0 < q < 1:
        raise DomainError(f"Jackson integrals need 0 < q < 1, got q={q!r}")
    if not anchor > 0:
        raise DomainError(f"anchor must be positive, got {anchor!r}")
    if math.isnan(lower) or math.isnan(upper) or not lower < upper:
        raise DomainError(f"need lower < upper, got [{lower!r}, {upper!r}]")
    if lower == math.inf or upper == -math.inf:
        raise DomainError(f"empty interval [{lower!r}, {upper!r}]")

    def finite(a: float, b: float) -> list[TruncatedValue | None]:
        return [_to_zero(f, a, q, policy), _from_zero(f, b, q, policy)]

    def to_inf(a: float) -> list[TruncatedValue | None]:
        if a > 0:
            return [_labelled(f"int_{a!r}^inf", q_integral_a_to_inf, f, a, q, policy)]
        return finite(a, anchor) + [
            _labelled(f"int_{anchor!r}^inf", q_integral_a_to_inf, f, anchor, q, policy)
        ]

    def from_neg_inf(b: float) -> list[TruncatedValue | None]:
        if b < 0:
            return [_labelled(f"int_-inf^{b!r}", q_integral_neg_inf_to_a, f, b, q, policy)]
        return [
            _labelled(f"int_-inf^{-anchor!r}", q_integral_neg_inf_to_a, f, -anchor, q, policy)
        ] + finite(-anchor, b)

    if lower == -math.inf and upper == math.inf:
        return _combine(from_neg_inf(-anchor) + finite(-anchor, anchor) + to_inf(anchor))
    if upper == math.inf:
        return _combine(to_inf(lower))
    if lower == -math.inf:
        return _combine(from_neg_inf(upper))
    return _combine(finite(lower, upper))


def gamma_q_integral_representation(
    x: float,
    q: float,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    anchor: float | None = None,
) -> TruncatedValue:
    """``Gamma_q(x)`` as the Jackson integral of ``t^(x-1) E_q(-q t)`` over (0, inf).

    The lattice is anchored at ``1/(1-q)`` unless given. There the upward
    nodes are exact zeros of ``E_q(-q t)`` and the sum terminates. On other
    anchors the upward sum generally diverges.
    """
    if not x > 0:
        raise DomainError(f"the integral representation needs x > 0, got {x!r}")
    if not 0 < q < 1:
        raise DomainError(f"the integral representation needs 0 < q < 1, got {q!r}")
    if anchor is None:
        anchor = 1 / (1 - q)

    def integrand(t: float) -> float:
        return t ** (x - 1) * q_exp_big(-q * t, q, policy).value

    return q_integral(integrand, 0.0, math.inf, q, policy, anchor=anchor)
