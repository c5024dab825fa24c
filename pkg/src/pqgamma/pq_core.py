"""Finite (p,q)-arithmetic: twin-basic numbers, factorials, binomials and powers.

Every routine here is a finite product or quotient, so nothing is truncated.
The infinite-product machinery lives in :mod:`pqgamma.q_series`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParameterRangeError

__all__ = [
    "PQBase",
    "PowerKind",
    "GradedProduct",
    "pq_number",
    "pq_number_real",
    "pq_factorial",
    "pq_binomial",
    "pq_power",
    "pq_power_factored",
]

# Above this length pq_power goes through the factored (log) route.
_DIRECT_MAX_LENGTH = 30


@dataclass(frozen=True)
class PQBase:
    """The deformation pair (p, q), with ``r = q/p``.

    Any positive ``p != q`` is accepted; the Gamma family additionally needs
    ``0 < q < p`` (see :attr:`gamma_valid`).
    """

    p: float
    q: float

    def __post_init__(self) -> None:
        p, q = self.p, self.q
        if not (math.isfinite(p) and math.isfinite(q)):
            raise DomainError(f"p and q must be finite, got p={p!r}, q={q!r}")
        if p <= 0 or q <= 0:
            raise DomainError(f"p and q must be positive, got p={p!r}, q={q!r}")
        if p == q:
            raise DomainError(f"p and q must differ, got p = q = {p!r}")

    @property
    def r(self) -> float:
        return self.q / self.p

    @property
    def gamma_valid(self) -> bool:
        return 0 < self.q < self.p

    def power(self, m: int) -> PQBase:
        """The base (p**m, q**m) used by the multiplication formulas."""
        return PQBase(self.p**m, self.q**m)


class PowerKind(enum.Enum):
    OMINUS = "ominus"
    OPLUS = "oplus"

    @property
    def sign(self) -> int:
        return -1 if self is PowerKind.OMINUS else 1

    @classmethod
    def parse(cls, value: str | PowerKind) -> PowerKind:
        if isinstance(value, PowerKind):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise DomainError(f"unknown power kind {value!r}; use 'ominus' or 'oplus'") from None


def _frac(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class GradedProduct:
    """A product written as ``mantissa * scale**A(N) * p**P(N)``.

    ``A(N) = base_exponent + base_exponent_linear*N`` and
    ``P(N) = p_exponent_const + p_exponent_linear*N + p_exponent_quadratic*N**2``,
    where N is the truncation index of an infinite product. Finite products
    have no N-dependence. A lone truncated infinite product carries the
    quadratic and linear terms; they cancel in well-matched ratios, which is
    what the identity engine checks.

    Exponents are exact rationals, so equality of exponents is exact.
    """

    mantissa: float
    base_exponent: Fraction
    p_exponent_const: Fraction
    p_exponent_linear: Fraction = Fraction(0)
    scale: float = 1.0
    p: float = 1.0
    base_exponent_linear: Fraction = Fraction(0)
    p_exponent_quadratic: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in (
            "base_exponent",
            "p_exponent_const",
            "p_exponent_linear",
            "base_exponent_linear",
            "p_exponent_quadratic",
        ):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return (
            self.base_exponent,
            self.base_exponent_linear,
            self.p_exponent_const,
            self.p_exponent_linear,
            self.p_exponent_quadratic,
        )

    @property
    def bounded(self) -> bool:
        """True when no exponent grows faster than linearly in N on p, none on scale."""
        return self.p_exponent_quadratic == 0 and self.base_exponent_linear == 0

    def _check_compatible(self, other: GradedProduct) -> None:
        if self.scale != other.scale or self.p != other.p:
            raise DomainError("graded products over different scale or p cannot be combined")

    def __mul__(self, other: GradedProduct) -> GradedProduct:
        self._check_compatible(other)
        return GradedProduct(
            self.mantissa * other.mantissa,
            self.base_exponent + other.base_exponent,
            self.p_exponent_const + other.p_exponent_const,
            self.p_exponent_linear + other.p_exponent_linear,
            self.scale,
            self.p,
            self.base_exponent_linear + other.base_exponent_linear,
            self.p_exponent_quadratic + other.p_exponent_quadratic,
        )

    def __truediv__(self, other: GradedProduct) -> GradedProduct:
        self._check_compatible(other)
        if other.mantissa == 0:
            raise DomainError("division by a graded product with zero mantissa")
        return GradedProduct(
            self.mantissa / other.mantissa,
            self.base_exponent - other.base_exponent,
            self.p_exponent_const - other.p_exponent_const,
            self.p_exponent_linear - other.p_exponent_linear,
            self.scale,
            self.p,
            self.base_exponent_linear - other.base_exponent_linear,
            self.p_exponent_quadratic - other.p_exponent_quadratic,
        )

    def exponents_match(self, other: GradedProduct) -> bool:
        return self.exponents == other.exponents

    def value(self, n_trunc: int = 0) -> float:
        """Recombine into a plain float at truncation index ``n_trunc``."""
        a_exp = self.base_exponent + self.base_exponent_linear * n_trunc
        p_exp = (
            self.p_exponent_const
            + self.p_exponent_linear * n_trunc
            + self.p_exponent_quadratic * n_trunc * n_trunc
        )
        if self.mantissa == 0:
            return 0.0
        direct = self.mantissa * _rational_pow(self.scale, a_exp) * _rational_pow(self.p, p_exp)
        if math.isfinite(direct) and direct != 0:
            return direct
        # the separate powers over- or underflowed; combine in logs instead
        sign = math.copysign(1.0, self.mantissa)
        if self.scale < 0:
            if a_exp.denominator != 1:
                raise DomainError("negative scale to a fractional power")
            sign *= -1 if a_exp.numerator % 2 else 1
        log_abs = (
            math.log(abs(self.mantissa))
            + float(a_exp) * math.log(abs(self.scale))
            + float(p_exp) * math.log(self.p)
        )
        try:
            return sign * math.exp(log_abs)
        except OverflowError:
            return sign * math.inf


def _rational_pow(x: float, e: Fraction) -> float:
    if e == 0:
        return 1.0
    x = float(x)
    try:
        if e.denominator == 1:
            return x ** int(e)
        return x ** float(e)
    except OverflowError:
        return math.inf


def _check_base(base: PQBase) -> None:
    # PQBase already rejects p == q; this guards duck-typed stand-ins.
    if base.p == base.q:
        raise DomainError("[n]_{p,q} is undefined for p = q")


def pq_number(n: int, base: PQBase) -> float:
    """Twin-basic number ``[n]_{p,q} = (p**n - q**n) / (p - q)``."""
    _check_base(base)
    if n < 0:
        raise ParameterRangeError(f"n must be nonnegative, got {n}")
    p, q = base.p, base.q
    return (p**n - q**n) / (p - q)


def pq_number_real(x: float, base: PQBase) -> float:
    """``[x]_{p,q}`` at real order; coincides with :func:`pq_number` on integers."""
    _check_base(base)
    p, q = base.p, base.q
    return (p**x - q**x) / (p - q)


def pq_factorial(n: int, base: PQBase) -> float:
    """``[n]_{p,q}! = [1][2]...[n]``, with ``[0]_{p,q}! = 1``."""
    _check_base(base)
    if n < 0:
        raise ParameterRangeError(f"n must be nonnegative, got {n}")
    result = 1.0
    for k in range(1, n + 1):
        result *= pq_number(k, base)
    return result


def pq_binomial(n: int, k: int, base: PQBase) -> float:
    if n < 0 or k < 0 or k > n:
        raise ParameterRangeError(f"need 0 <= k <= n, got n={n}, k={k}")
    return pq_factorial(n, base) / (pq_factorial(k, base) * pq_factorial(n - k, base))


def pq_power(x: float, a: float, n: int, kind: PowerKind | str, base: PQBase) -> float:
    """``(x ⊖ a)^n`` or ``(x ⊕ a)^n``: the product of ``x p^k ∓ a q^k`` for k < n."""
    kind = PowerKind.parse(kind)
    if n < 0:
        raise ParameterRangeError(f"n must be nonnegative, got {n}")
    if n > _DIRECT_MAX_LENGTH and x != 0:
        graded = pq_power_factored(x, a, n, kind, base)
        if graded.mantissa == 0:
            return 0.0
        log_abs = (
            math.log(abs(graded.mantissa))
            + n * math.log(abs(x))
            + float(graded.p_exponent_const) * math.log(base.p)
        )
        sign = math.copysign(1.0, graded.mantissa) * (1 if x > 0 or n % 2 == 0 else -1)
        try:
            return sign * math.exp(log_abs)
        except OverflowError:
            return sign * math.inf
    s = kind.sign
    p, q = base.p, base.q
    result = 1.0
    for k in range(n):
        result *= x * p**k + s * a * q**k
    return result


def pq_power_factored(
    x: float, a: float, n: int, kind: PowerKind | str, base: PQBase
) -> GradedProduct:
    """Split ``(x ∓ a)^n_{p,q}`` as ``x**n * p**(n(n-1)/2) * prod(1 ∓ (a/x) r**k)``."""
    kind = PowerKind.parse(kind)
    if x == 0:
        raise DomainError("the factored form needs x != 0")
    if n < 0:
        raise ParameterRangeError(f"n must be nonnegative, got {n}")
    z = a / x
    r = base.r
    s = kind.sign
    mantissa = 1.0
    for k in range(n):
        mantissa *= 1 + s * z * r**k
    return GradedProduct(
        mantissa=mantissa,
        base_exponent=Fraction(n),
        p_exponent_const=Fraction(n * (n - 1), 2),
        p_exponent_linear=Fraction(0),
        scale=x,
        p=base.p,
    )
