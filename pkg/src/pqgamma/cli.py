"""Command-line interface: ``pqgamma eval``, ``pqgamma check`` and ``pqgamma table``.

Usage:
    pqgamma eval gammapq --p 0.9 --q 0.4 --x 2.5
    pqgamma eval qint --f "t^2" --lower 0 --upper 1 --q 0.5
    pqgamma check all --out report.json
    pqgamma table gammapq --p 2 --q 1 --x-from 1 --x-to 4 --step 1 --format csv

Exit codes: 0 success, 1 identity failure, 2 domain error, 3 pole,
4 non-convergence, 5 parse error.

Every command is a thin adapter over the library; the numbers come
straight from the corresponding library call.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import ParseError, PoleError, PQError
from .expr import compile_integrand
from .gamma_beta import beta_pq, gamma_q, gamma_pq
from .identities import DEFAULT_GRIDS, SUITES, run_suite
from .jackson import q_integral
from .pq_core import PQBase, PowerKind, pq_binomial, pq_factorial, pq_number, pq_number_real, pq_power
from .q_series import PrecisionPolicy, q_pochhammer_finite, q_pochhammer_infinite

__all__ = ["OutputRecord", "EVAL_FUNCTIONS", "TABLE_FUNCTIONS", "CSV_HEADER", "evaluate", "main"]

EVAL_FUNCTIONS = ("pqnum", "pqfact", "pqbinom", "pqpow", "gammaq", "gammapq", "betapq", "qint", "qpoch")
TABLE_FUNCTIONS = ("pqnum", "gammaq", "gammapq", "betapq")
CSV_HEADER = ("x", "function", "value", "log_abs", "sign", "terms_used", "tail_bound", "pole")


@dataclass(frozen=True)
class OutputRecord:
    function: str
    arguments: dict[str, Any]
    value: float | None
    log_abs: float | None
    sign: int
    terms_used: int = 0
    tail_bound: float = 0.0
    pole: bool = False

    @classmethod
    def from_float(cls, function: str, arguments: dict, value: float, terms_used: int = 0, tail_bound: float = 0.0) -> OutputRecord:
        sign = 0 if value == 0 else (1 if value > 0 else -1)
        log_abs = math.log(abs(value)) if value != 0 and math.isfinite(value) else None
        return cls(function, arguments, _finite_or_none(value), log_abs, sign, terms_used, tail_bound)

    @classmethod
    def from_gamma(cls, function: str, arguments: dict, g) -> OutputRecord:
        log_abs = g.log_abs if g.sign != 0 else None
        return cls(function, arguments, _finite_or_none(g.value), log_abs, g.sign, g.terms_used, g.tail_bound)

    def to_dict(self) -> dict[str, Any]:
        return {
            "function": self.function,
            "arguments": self.arguments,
            "value": self.value,
            "log_abs": self.log_abs,
            "sign": self.sign,
            "terms_used": self.terms_used,
            "tail_bound": self.tail_bound,
            "pole": self.pole,
        }


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise ParseError(message)


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise ParseError(f"{args.function} needs {', '.join(missing)}")


def _base(args: argparse.Namespace) -> PQBase:
    _require(args, "p", "q")
    return PQBase(args.p, args.q)


def _policy(args: argparse.Namespace) -> PrecisionPolicy:
    return PrecisionPolicy(rel_tol=args.rel_tol, max_terms=args.max_terms)


def _extended(text: str) -> float:
    lowered = text.strip().lower()
    if lowered in ("inf", "+inf", "infinity", "+infinity"):
        return math.inf
    if lowered in ("-inf", "-infinity"):
        return -math.inf
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}") from None


def evaluate(function: str, args: argparse.Namespace) -> OutputRecord:
    """Dispatch one evaluation to the library and wrap the result."""
    policy = _policy(args)
    if function == "pqnum":
        base = _base(args)
        if args.n is not None:
            return OutputRecord.from_float(function, {"n": args.n, "p": base.p, "q": base.q}, pq_number(args.n, base))
        _require(args, "x")
        return OutputRecord.from_float(function, {"x": args.x, "p": base.p, "q": base.q}, pq_number_real(args.x, base))
    if function == "pqfact":
        base = _base(args)
        _require(args, "n")
        return OutputRecord.from_float(function, {"n": args.n, "p": base.p, "q": base.q}, pq_factorial(args.n, base))
    if function == "pqbinom":
        base = _base(args)
        _require(args, "n", "k")
        arguments = {"n": args.n, "k": args.k, "p": base.p, "q": base.q}
        return OutputRecord.from_float(function, arguments, pq_binomial(args.n, args.k, base))
    if function == "pqpow":
        base = _base(args)
        _require(args, "x", "a", "n")
        kind = PowerKind.parse(args.kind)
        arguments = {"x": args.x, "a": args.a, "n": args.n, "kind": kind.value, "p": base.p, "q": base.q}
        return OutputRecord.from_float(function, arguments, pq_power(args.x, args.a, args.n, kind, base))
    if function == "gammaq":
        _require(args, "x", "q")
        return OutputRecord.from_gamma(function, {"x": args.x, "q": args.q}, gamma_q(args.x, args.q, policy))
    if function == "gammapq":
        base = _base(args)
        _require(args, "x")
        arguments = {"x": args.x, "p": base.p, "q": base.q}
        return OutputRecord.from_gamma(function, arguments, gamma_pq(args.x, base, policy))
    if function == "betapq":
        base = _base(args)
        _require(args, "x", "y")
        arguments = {"x": args.x, "y": args.y, "p": base.p, "q": base.q}
        return OutputRecord.from_gamma(function, arguments, beta_pq(args.x, args.y, base, policy))
    if function == "qint":
        _require(args, "f", "lower", "upper", "q")
        lower, upper = _extended(args.lower), _extended(args.upper)
        f = compile_integrand(args.f, args.q, policy)
        result = q_integral(f, lower, upper, args.q, policy, anchor=args.anchor)
        arguments = {"f": args.f, "lower": args.lower, "upper": args.upper, "q": args.q, "anchor": args.anchor}
        return OutputRecord.from_float(function, arguments, result.value, result.terms_used, result.tail_bound)
    if function == "qpoch":
        _require(args, "z", "q")
        if args.n is not None:
            return OutputRecord.from_float(function, {"z": args.z, "q": args.q, "n": args.n}, q_pochhammer_finite(args.z, args.q, args.n))
        result = q_pochhammer_infinite(args.z, args.q, policy)
        return OutputRecord.from_float(function, {"z": args.z, "q": args.q}, result.value, result.terms_used, result.tail_bound)
    raise ParseError(f"unknown function {function!r}; choose from {', '.join(EVAL_FUNCTIONS)}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, allow_nan=False) + "\n"


def _records_csv(records: Sequence[OutputRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(
            [
                _fmt(rec.arguments.get("x")),
                rec.function,
                _fmt(rec.value),
                _fmt(rec.log_abs),
                rec.sign,
                rec.terms_used,
                _fmt(rec.tail_bound),
                _fmt(rec.pole),
            ]
        )
    return buf.getvalue()


def cmd_eval(args: argparse.Namespace) -> int:
    record = evaluate(args.function, args)
    if args.format == "csv":
        _emit(_records_csv([record]), args.out)
    else:
        _emit(_dumps(record.to_dict()), args.out)
    return 0


def _table_xs(x_from: float, x_to: float, step: float) -> list[float]:
    if not step > 0:
        raise ParseError(f"--step must be positive, got {step!r}")
    if not x_to >= x_from:
        raise ParseError(f"empty range [{x_from!r}, {x_to!r}]")
    count = int(math.floor((x_to - x_from) / step + 1e-9)) + 1
    return [round(x_from + i * step, 12) for i in range(count)]


def cmd_table(args: argparse.Namespace) -> int:
    if args.function not in TABLE_FUNCTIONS:
        raise ParseError(f"table supports {', '.join(TABLE_FUNCTIONS)}, got {args.function!r}")
    records: list[OutputRecord] = []
    for x in _table_xs(args.x_from, args.x_to, args.step):
        args.x = x
        try:
            records.append(evaluate(args.function, args))
        except PoleError:
            if not args.skip_poles:
                raise
            arguments = {"x": x, "p": args.p, "q": args.q}
            if args.function == "betapq":
                arguments["y"] = args.y
            if args.function == "gammaq":
                arguments.pop("p")
            records.append(OutputRecord(args.function, arguments, None, None, 0, 0, 0.0, pole=True))
    if args.format == "csv":
        _emit(_records_csv(records), args.out)
    else:
        payload = {"function": args.function, "rows": [rec.to_dict() for rec in records]}
        _emit(_dumps(payload), args.out)
    return 0


def _grid_overrides(args: argparse.Namespace) -> dict[str, list]:
    names = ("powers", "gamma", "beta", "jackson") if args.suite == "all" else (args.suite,)
    known = {key for name in names for key in DEFAULT_GRIDS[name]}
    requested: dict[str, list] = {}
    for key in ("a", "b", "n", "k", "l", "y"):
        value = getattr(args, key)
        if value is not None:
            requested[key] = value
    if args.x is not None:
        for key in ("x", "x_recurrence", "x_legendre", "x_gauss"):
            requested[key] = args.x
    if args.base:
        requested["bases"] = [list(pq) for pq in args.base]
    if args.check_q is not None:
        requested["q"] = args.check_q
    overrides = {key: value for key, value in requested.items() if key in known}
    ignored = sorted(set(requested) - set(overrides) - {"x_recurrence", "x_legendre", "x_gauss", "x"})
    if ignored:
        raise ParseError(f"grid flags {ignored} do not apply to suite {args.suite!r}")
    return overrides


def _report_table(report) -> str:
    rows = []
    for fid in report.families:
        entries = [e for e in report.entries if e.id == fid]
        worst = max(e.residual for e in entries)
        failures = sum(not e.passed for e in entries)
        rows.append((fid, len(entries), worst, failures))
    width = max((len(r[0]) for r in rows), default=8)
    lines = [f"{'identity':<{width}}  {'points':>6}  {'max residual':>12}  status"]
    for fid, count, worst, failures in rows:
        status = "PASS" if failures == 0 else f"FAIL ({failures})"
        lines.append(f"{fid:<{width}}  {count:>6}  {worst:>12.3e}  {status}")
    lines.append(f"suite {report.suite}: {'PASS' if report.passed else 'FAIL'}, max residual {report.max_residual:.3e}")
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines) + "\n"


def _report_json(report) -> str:
    payload = report.to_dict()
    # inf residuals mark failed evaluations; JSON has no infinity
    for entry in payload["entries"]:
        if not math.isfinite(entry["residual"]):
            entry["residual"] = None
    if not math.isfinite(payload["max_residual"]):
        payload["max_residual"] = None
    return _dumps(payload)


def cmd_check(args: argparse.Namespace) -> int:
    report = run_suite(
        args.suite,
        grid=_grid_overrides(args),
        tolerances=args.tol,
        policy=_policy(args),
        workers=args.workers,
    )
    out = args.out or f"pqgamma-report-{args.suite}.json"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_report_json(report))
    sys.stdout.write(_report_table(report))
    return 0 if report.passed else 1


def _add_policy(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rel-tol", type=float, default=1e-14, help="truncation tolerance (default 1e-14)")
    parser.add_argument("--max-terms", type=int, default=10_000, help="truncation cap (default 10000)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pqgamma", description="(p,q)-Gamma, Beta and Jackson-integral toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one function")
    ev.add_argument("function", choices=EVAL_FUNCTIONS)
    for name in ("p", "q", "x", "y", "a", "z"):
        ev.add_argument(f"--{name}", type=float)
    ev.add_argument("--n", type=int)
    ev.add_argument("--k", type=int)
    ev.add_argument("--kind", default="ominus", choices=("ominus", "oplus"))
    ev.add_argument("--f", help="integrand expression in t")
    ev.add_argument("--lower")
    ev.add_argument("--upper")
    ev.add_argument("--anchor", type=float, default=1.0, help="split point for improper integrals")
    ev.add_argument("--format", choices=("json", "csv"), default="json")
    ev.add_argument("--out")
    _add_policy(ev)
    ev.set_defaults(handler=cmd_eval)

    ck = sub.add_parser("check", help="run an identity suite")
    ck.add_argument("suite", choices=SUITES)
    for name in ("a", "b", "x", "y"):
        ck.add_argument(f"--{name}", type=float, nargs="+")
    for name in ("n", "k", "l"):
        ck.add_argument(f"--{name}", type=int, nargs="+")
    ck.add_argument("--q", dest="check_q", type=float, nargs="+", help="q values for the jackson suite")
    ck.add_argument("--base", type=float, nargs=2, action="append", metavar=("P", "Q"))
    ck.add_argument("--tol", type=float, help="one tolerance for every identity family")
    ck.add_argument("--workers", type=int, default=1)
    ck.add_argument("--out", help="JSON report path (default pqgamma-report-<suite>.json)")
    _add_policy(ck)
    ck.set_defaults(handler=cmd_check)

    tb = sub.add_parser("table", help="tabulate a function of x")
    tb.add_argument("function", choices=TABLE_FUNCTIONS)
    tb.add_argument("--x-from", type=float, required=True)
    tb.add_argument("--x-to", type=float, required=True)
    tb.add_argument("--step", type=float, required=True)
    for name in ("p", "q", "y"):
        tb.add_argument(f"--{name}", type=float)
    tb.add_argument("--format", choices=("csv", "json"), default="csv")
    tb.add_argument("--skip-poles", action="store_true")
    tb.add_argument("--out")
    _add_policy(tb)
    tb.set_defaults(handler=cmd_table)
    return parser


def _looks_negative_number(token: str) -> bool:
    if not token.startswith("-") or token.startswith("--"):
        return False
    try:
        float(token)
    except ValueError:
        return False
    return True


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse only recognises plain decimals like -0.5 as values; "-inf" or
    # "-1e3" would be taken for an option. Glue them to their flag instead.
    # eval and table options all take a single value, so this is unambiguous.
    argv = list(argv)
    if not argv or argv[0] not in ("eval", "table"):
        return argv
    out: list[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token.startswith("--") and "=" not in token and i + 1 < len(argv) and _looks_negative_number(argv[i + 1]):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    try:
        argv = _attach_negative_values(sys.argv[1:] if argv is None else argv)
        args = build_parser().parse_args(argv)
        if args.command == "table":
            args.n = None
        return args.handler(args)
    except PQError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
