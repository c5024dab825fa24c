"""Batch verification of the (p,q) identities over parameter grids.

Power-product identities come in two flavours. Finite ones are compared
directly. The ones involving infinite products are compared in
:class:`~pqgamma.pq_core.GradedProduct` form. Each truncated infinite
product is split into a convergent r-Pochhammer mantissa and exact
exponents of ``a`` and ``p`` that are polynomials in the truncation index
N. Under *telescoped* semantics a product whose first factor sits at
lattice index s is truncated at N - s, so all partial products end on a
common index. *Naive* semantics truncates everything at N. An identity
holds when the exponent polynomials agree exactly and the mantissas agree
numerically.

Numbering of the twelve power identities (a, b reals; base (p,q)):

 1. (a⊖b)^n = (a⊖b)^∞ / (ap^n⊖bq^n)^∞
 2. (a⊕b)^n = (a⊕b)^∞ / (ap^n⊕bq^n)^∞
 3. (a⊖b)^∞ = (a⊖b)^n (ap^n⊖bq^n)^∞
 4. (ap^k⊖bq^k)^{n-k} = (a⊖b)^n / (a⊖b)^k                      (k <= n)
 5. (ap^{2k}⊖bq^{2k})^{n-k} = (a⊖b)^n (ap^n⊖bq^n)^k / (a⊖b)^{2k} (k <= n)
 6. (a²⊖b²)^n_{p²,q²} = (a⊖b)^n (a⊕b)^n
 7. (a⊖b)^{n+k} = (a⊖b)^n (ap^n⊖bq^n)^k
 8. (ap^n⊖bq^n)^k = (a⊖b)^k (ap^k⊖bq^k)^n / (a⊖b)^n
 9. (a⊖b)^{2n}_{p,q} = (a⊖b)^n_{p²,q²} (ap⊖bq)^n_{p²,q²}
10. (a⊖b)^{3n}_{p,q} = prod_{j<3} (ap^j⊖bq^j)^n_{p³,q³}
11. (a⊕b)^{n+k} = (a⊕b)^n (ap^n⊕bq^n)^k
12. (a⊖b)^{ln}_{p,q} = prod_{j<l} (ap^j⊖bq^j)^n_{p^l,q^l}
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator

from .config import TOLERANCES
from .errors import DomainError, PQError
from .gamma_beta import (
    check_beta_recurrences,
    check_gamma_recurrence,
    check_gauss,
    check_legendre,
    gamma_q,
)
from .jackson import gamma_q_integral_representation
from .pq_core import GradedProduct, PQBase, PowerKind, pq_power, pq_power_factored
from .q_series import (
    DEFAULT_POLICY,
    PrecisionPolicy,
    q_pochhammer_finite,
    q_pochhammer_infinite,
)

__all__ = [
    "GradedProduct",
    "IdentityEntry",
    "IdentityReport",
    "DEFAULT_GRIDS",
    "SUITES",
    "TELESCOPED",
    "NAIVE",
    "check_power_identity",
    "check_splitting_specialization",
    "family_ids",
    "run_suite",
]

TELESCOPED = "telescoped"
NAIVE = "naive"

OM = PowerKind.OMINUS
OP = PowerKind.OPLUS

INFINITE_IDENTITIES = frozenset({1, 2, 3})

DEFAULT_GRIDS: dict[str, dict[str, list]] = {
    "powers": {
        "a": [0.5, 1.3, 2.0],
        "b": [0.5, 1.3, 2.0],
        "n": [0, 1, 2, 3, 5],
        "k": [0, 1, 2, 3, 5],
        "l": [1, 2, 3],
        "bases": [[1.0, 0.5], [0.9, 0.4], [1.5, 0.7]],
    },
    "gamma": {
        "x_recurrence": [round(0.1 * i, 10) for i in range(1, 61)],
        "x_legendre": [round(0.3 * i, 10) for i in range(1, 11)] + [0.5],
        "x_gauss": [0.4, 0.8, 1.3, 2.1],
        "n_gauss": [2, 3, 4, 5],
        "bases": [[1.0, 0.5], [0.9, 0.4], [1.5, 0.7], [2.0, 0.3]],
    },
    "beta": {
        "x": [0.7, 1.5, 2.5],
        "y": [0.7, 1.5, 2.5],
        "n": [0, 1, 2, 3],
        "bases": [[1.0, 0.5], [0.9, 0.4], [1.5, 0.7], [2.0, 0.3]],
    },
    "jackson": {
        "x": [0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
        "q": [0.3, 0.5, 0.7],
    },
}

SUITES = ("powers", "gamma", "beta", "jackson", "all")


def family_ids(suite: str) -> list[str]:
    """Identity families covered by a suite, in report order."""
    families = {
        "powers": [f"powers.{i}" for i in range(1, 13)],
        "gamma": ["gamma.recurrence", "gamma.legendre", "gamma.gauss"],
        "beta": [f"beta.{i}" for i in range(1, 5)],
        "jackson": ["jackson.representation"],
    }
    if suite == "all":
        return [fid for name in ("powers", "gamma", "beta", "jackson") for fid in families[name]]
    if suite not in families:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return families[suite]


def _tolerance_key(family: str) -> str:
    if family.startswith("powers."):
        ident = int(family.split(".")[1])
        return "powers.telescoped" if ident in INFINITE_IDENTITIES else "powers.finite"
    if family.startswith("beta."):
        return "beta.recurrences"
    return family


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    params: dict[str, Any]
    residual: float
    passed: bool
    exponent_match: bool | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"id": self.id, "params": self.params, "residual": self.residual}
        if self.exponent_match is not None:
            out["exponent_match"] = self.exponent_match
        out["pass"] = self.passed
        return out


@dataclass
class IdentityReport:
    suite: str
    grid: dict[str, Any]
    entries: list[IdentityEntry]
    notes: list[str] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def families(self) -> list[str]:
        seen: dict[str, None] = {}
        for e in self.entries:
            seen.setdefault(e.id, None)
        return list(seen)

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "grid": self.grid,
            "entries": [e.to_dict() for e in self.entries],
            "max_residual": self.max_residual,
            "pass": self.passed,
            "notes": list(self.notes),
        }


def _rel(lhs: float, rhs: float) -> float:
    if lhs == rhs:
        return 0.0
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale


# --- graded forms -----------------------------------------------------------

def _finite_graded(a: float, b: float, s: int, m: int, kind: PowerKind, base: PQBase) -> GradedProduct:
    """``(a p^s ∓ b q^s)^m`` with exponents expressed against ``a`` and ``p``."""
    head = pq_power_factored(a * base.p**s, b * base.q**s, m, kind, base)
    return GradedProduct(
        mantissa=head.mantissa,
        base_exponent=Fraction(m),
        p_exponent_const=Fraction(s * m) + Fraction(m * (m - 1), 2),
        scale=a,
        p=base.p,
    )


def _infinite_graded(
    a: float,
    b: float,
    s: int,
    kind: PowerKind,
    base: PQBase,
    policy: PrecisionPolicy,
    semantics: str,
) -> GradedProduct:
    """``(a p^s ∓ b q^s)^∞`` truncated at ``N + t`` factors.

    The offset t is ``-s`` under telescoped semantics and 0 under naive ones.
    The mantissa is the N -> ∞ limit ``(±(b/a) r^s; r)_∞``.
    """
    if not base.gamma_valid:
        raise DomainError("infinite (p,q)-products need 0 < q < p")
    t = -s if semantics == TELESCOPED else 0
    z = (b * base.q**s) / (a * base.p**s)
    mantissa = q_pochhammer_infinite(z if kind is OM else -z, base.r, policy).value
    # exponent of p: s(N+t) + (N+t)(N+t-1)/2
    return GradedProduct(
        mantissa=mantissa,
        base_exponent=Fraction(t),
        base_exponent_linear=Fraction(1),
        p_exponent_const=Fraction(s * t) + Fraction(t * (t - 1), 2),
        p_exponent_linear=Fraction(s + t) - Fraction(1, 2),
        p_exponent_quadratic=Fraction(1, 2),
        scale=a,
        p=base.p,
    )


def _graded_sides(
    ident: int, a: float, b: float, n: int, base: PQBase, policy: PrecisionPolicy, semantics: str
) -> tuple[GradedProduct, GradedProduct]:
    if ident in (1, 2):
        kind = OM if ident == 1 else OP
        lhs = _finite_graded(a, b, 0, n, kind, base)
        den = _infinite_graded(a, b, n, kind, base, policy, semantics)
        if den.mantissa == 0:
            raise DomainError("denominator product vanishes")
        rhs = _infinite_graded(a, b, 0, kind, base, policy, semantics) / den
        return lhs, rhs
    if ident == 3:
        lhs = _infinite_graded(a, b, 0, OM, base, policy, semantics)
        rhs = _finite_graded(a, b, 0, n, OM, base) * _infinite_graded(
            a, b, n, OM, base, policy, semantics
        )
        return lhs, rhs
    raise DomainError(f"identity {ident} has no infinite-product form")


# --- finite identities ------------------------------------------------------

def _pw(x: float, y: float, n: int, base: PQBase, kind: PowerKind = OM) -> float:
    return pq_power(x, y, n, kind, base)


def _divide(num: float, den: float) -> float:
    if den == 0:
        raise DomainError("divisor product vanishes")
    return num / den


def _finite_sides(ident: int, a: float, b: float, n: int, k: int, l: int, base: PQBase) -> tuple[float, float]:
    p, q = base.p, base.q
    if ident == 4:
        if not 0 <= k <= n:
            raise DomainError("identity 4 needs 0 <= k <= n")
        return _pw(a * p**k, b * q**k, n - k, base), _divide(_pw(a, b, n, base), _pw(a, b, k, base))
    if ident == 5:
        if not 0 <= k <= n:
            raise DomainError("identity 5 needs 0 <= k <= n")
        lhs = _pw(a * p ** (2 * k), b * q ** (2 * k), n - k, base)
        num = _pw(a, b, n, base) * _pw(a * p**n, b * q**n, k, base)
        return lhs, _divide(num, _pw(a, b, 2 * k, base))
    if ident == 6:
        # (ap^k - bq^k)(ap^k + bq^k) = a²p^{2k} - b²q^{2k}: the squared side lives on (p², q²)
        return _pw(a * a, b * b, n, base.power(2)), _pw(a, b, n, base) * _pw(a, b, n, base, OP)
    if ident in (7, 11):
        kind = OM if ident == 7 else OP
        return _pw(a, b, n + k, base, kind), _pw(a, b, n, base, kind) * _pw(a * p**n, b * q**n, k, base, kind)
    if ident == 8:
        lhs = _pw(a * p**n, b * q**n, k, base)
        num = _pw(a, b, k, base) * _pw(a * p**k, b * q**k, n, base)
        return lhs, _divide(num, _pw(a, b, n, base))
    if ident in (9, 10, 12):
        m = {9: 2, 10: 3}.get(ident, l)
        if m < 1:
            raise DomainError("the refinement order must be >= 1")
        bm = base.power(m)
        rhs = 1.0
        for j in range(m):
            rhs *= _pw(a * p**j, b * q**j, n, bm)
        return _pw(a, b, m * n, base), rhs
    raise DomainError(f"identity {ident} is not a finite-product identity")


def check_power_identity(
    ident: int,
    params: dict[str, Any],
    base: PQBase,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    *,
    semantics: str = TELESCOPED,
    tolerance: float | None = None,
) -> IdentityEntry:
    """Check one of the twelve power identities at one parameter point.

    ``params`` holds ``a``, ``b``, ``n`` and, where used, ``k`` and ``l``.
    """
    if not 1 <= ident <= 12:
        raise DomainError(f"power identities are numbered 1..12, got {ident}")
    a, b = float(params["a"]), float(params["b"])
    n = int(params.get("n", 0))
    k = int(params.get("k", 0))
    l = int(params.get("l", 1))
    if n < 0 or k < 0:
        raise DomainError("n and k must be nonnegative")
    family = f"powers.{ident}"
    if tolerance is None:
        tolerance = TOLERANCES[_tolerance_key(family)]
    point = {**params, "p": base.p, "q": base.q}
    if ident in INFINITE_IDENTITIES:
        if a == 0:
            raise DomainError("graded forms need a != 0")
        lhs, rhs = _graded_sides(ident, a, b, n, base, policy, semantics)
        match = lhs.exponents_match(rhs)
        residual = _rel(lhs.mantissa, rhs.mantissa)
        return IdentityEntry(family, point, residual, match and residual <= tolerance, match)
    lhs_v, rhs_v = _finite_sides(ident, a, b, n, k, l, base)
    residual = _rel(lhs_v, rhs_v)
    return IdentityEntry(family, point, residual, residual <= tolerance)


def check_splitting_specialization(
    a: float, b: float, n: int, q: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> float:
    """Compare identity 3 at p = 1 against the plain q-Pochhammer splitting.

    At p = 1 the graded sides are ``(z;q)_∞`` and ``(z;q)_n (z q^n;q)_∞`` with
    ``z = b/a``. Returns the larger relative gap between the engine's values
    and the same quantities evaluated directly from q_series.
    """
    base = PQBase(1.0, q)
    lhs, rhs = _graded_sides(3, a, b, n, base, policy, TELESCOPED)
    z = b / a
    whole = q_pochhammer_infinite(z, q, policy).value
    split = q_pochhammer_finite(z, q, n) * q_pochhammer_infinite(z * q**n, q, policy).value
    return max(_rel(lhs.mantissa, whole), _rel(rhs.mantissa, split))


# --- suite driver -----------------------------------------------------------

def _merge_grid(suite: str, overrides: dict[str, Any] | None) -> dict[str, dict[str, list]]:
    names = ("powers", "gamma", "beta", "jackson") if suite == "all" else (suite,)
    grid = {name: {key: list(vals) for key, vals in DEFAULT_GRIDS[name].items()} for name in names}
    for key, value in (overrides or {}).items():
        if isinstance(value, dict):
            if key in grid:
                grid[key].update({k: list(v) for k, v in value.items()})
            continue
        hit = False
        for sub in grid.values():
            if key in sub:
                sub[key] = list(value)
                hit = True
        if not hit:
            raise DomainError(f"grid key {key!r} does not apply to suite {suite!r}")
    return grid


Task = Callable[[], list[IdentityEntry]]


def _power_tasks(grid: dict, tolerances: dict, policy: PrecisionPolicy, notes: list[str]) -> Iterator[Task]:
    bases = [PQBase(*pq) for pq in grid["bases"]]
    excluded: dict[int, int] = {}
    points: list[tuple[int, dict, PQBase]] = []
    for ident in range(1, 13):
        if ident in (4, 5, 7, 8, 11):
            keys = ("a", "b", "n", "k")
        elif ident == 12:
            keys = ("a", "b", "n", "l")
        else:
            keys = ("a", "b", "n")
        for base in bases:
            if ident in INFINITE_IDENTITIES and not base.gamma_valid:
                excluded[ident] = excluded.get(ident, 0) + 1
                continue
            for values in itertools.product(*(grid[key] for key in keys)):
                params = dict(zip(keys, values))
                if ident in (4, 5) and params["k"] > params["n"]:
                    excluded[ident] = excluded.get(ident, 0) + 1
                    continue
                points.append((ident, params, base))
    for ident, count in sorted(excluded.items()):
        notes.append(f"powers.{ident}: {count} grid points outside the identity's domain skipped")
    if any(i in (4, 5) for i in excluded):
        notes.append("powers.4, powers.5: restricted to 0 <= k <= n")

    def make(ident: int, params: dict, base: PQBase) -> Task:
        tol = tolerances[_tolerance_key(f"powers.{ident}")]

        def run() -> list[IdentityEntry]:
            try:
                return [check_power_identity(ident, params, base, policy, tolerance=tol)]
            except DomainError:
                # e.g. a vanishing divisor product; the identity says nothing there
                return []

        run.family = f"powers.{ident}"
        return run

    for ident, params, base in points:
        yield make(ident, params, base)


def _point_entry(family: str, params: dict, tol: float, fn: Callable[[], float]) -> list[IdentityEntry]:
    try:
        residual = fn()
    except PQError as exc:
        params = {**params, "error": f"{type(exc).__name__}: {exc}"}
        return [IdentityEntry(family, params, math.inf, False)]
    return [IdentityEntry(family, params, residual, residual <= tol)]


def _gamma_tasks(grid: dict, tolerances: dict, policy: PrecisionPolicy) -> Iterator[Task]:
    bases = [PQBase(*pq) for pq in grid["bases"]]
    for base in bases:
        for x in grid["x_recurrence"]:
            yield lambda base=base, x=x: _point_entry(
                "gamma.recurrence", {"x": x, "p": base.p, "q": base.q},
                tolerances["gamma.recurrence"], lambda: check_gamma_recurrence(x, base, policy))
    for base in bases:
        for x in grid["x_legendre"]:
            yield lambda base=base, x=x: _point_entry(
                "gamma.legendre", {"x": x, "p": base.p, "q": base.q},
                tolerances["gamma.legendre"], lambda: check_legendre(x, base, policy))
    for base in bases:
        for n in grid["n_gauss"]:
            for x in grid["x_gauss"]:
                yield lambda base=base, x=x, n=n: _point_entry(
                    "gamma.gauss", {"x": x, "n": n, "p": base.p, "q": base.q},
                    tolerances["gamma.gauss"], lambda: check_gauss(x, n, base, policy))


def _beta_tasks(grid: dict, tolerances: dict, policy: PrecisionPolicy) -> Iterator[Task]:
    tol = tolerances["beta.recurrences"]
    bases = [PQBase(*pq) for pq in grid["bases"]]
    for base, x, y, n in itertools.product(bases, grid["x"], grid["y"], grid["n"]):
        def run(base=base, x=x, y=y, n=n) -> list[IdentityEntry]:
            params = {"x": x, "y": y, "n": n, "p": base.p, "q": base.q}
            try:
                residuals = check_beta_recurrences(x, y, n, base, policy)
            except PQError as exc:
                params["error"] = f"{type(exc).__name__}: {exc}"
                return [IdentityEntry(f"beta.{i}", params, math.inf, False) for i in range(1, 5)]
            return [IdentityEntry(f"beta.{i}", params, r, r <= tol) for i, r in enumerate(residuals, 1)]

        yield run


def _jackson_tasks(grid: dict, tolerances: dict, policy: PrecisionPolicy) -> Iterator[Task]:
    tol = tolerances["jackson.representation"]
    for q, x in itertools.product(grid["q"], grid["x"]):
        def residual(x=x, q=q) -> float:
            integral = gamma_q_integral_representation(x, q, policy).value
            exact = gamma_q(x, q, policy).value
            return _rel(exact, integral)

        yield lambda x=x, q=q, residual=residual: _point_entry(
            "jackson.representation", {"x": x, "q": q}, tol, residual)


def run_suite(
    suite: str,
    grid: dict[str, Any] | None = None,
    tolerances: dict[str, float] | float | None = None,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    *,
    workers: int = 1,
) -> IdentityReport:
    """Run an identity suite and assemble a deterministic report.

    ``grid`` entries override the defaults in :data:`DEFAULT_GRIDS`; a flat
    key such as ``{"n": [0]}`` applies to every sub-grid that has it.
    ``tolerances`` is either a per-family mapping or one number for all.
    Failing points are recorded, never raised.
    """
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if isinstance(tolerances, (int, float)):
        tols = {key: float(tolerances) for key in TOLERANCES}
    else:
        tols = {**TOLERANCES, **(tolerances or {})}
    full_grid = _merge_grid(suite, grid)
    notes: list[str] = []
    tasks: list[Task] = []
    if "powers" in full_grid:
        tasks.extend(_power_tasks(full_grid["powers"], tols, policy, notes))
    if "gamma" in full_grid:
        tasks.extend(_gamma_tasks(full_grid["gamma"], tols, policy))
    if "beta" in full_grid:
        tasks.extend(_beta_tasks(full_grid["beta"], tols, policy))
    if "jackson" in full_grid:
        tasks.extend(_jackson_tasks(full_grid["jackson"], tols, policy))

    keyed: dict[int, list[IdentityEntry]] = {}
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for index, result in zip(range(len(tasks)), pool.map(lambda task: task(), tasks)):
                keyed[index] = result
    else:
        for index, task in enumerate(tasks):
            keyed[index] = task()
    undefined: dict[str, int] = {}
    for index, task in enumerate(tasks):
        family = getattr(task, "family", None)
        if family and not keyed[index]:
            undefined[family] = undefined.get(family, 0) + 1
    for family, count in sorted(undefined.items(), key=lambda item: int(item[0].split(".")[1])):
        notes.append(f"{family}: {count} points where a divisor product vanishes skipped")
    order = {fid: i for i, fid in enumerate(family_ids(suite))}
    entries = [entry for index in sorted(keyed) for entry in keyed[index]]
    entries.sort(key=lambda e: order[e.id])
    return IdentityReport(suite, full_grid, entries, notes)
