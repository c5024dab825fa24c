"""A tiny expression language for integrands passed on the command line.

Grammar::

    expr  := expr ('+' | '-') term | term
    term  := term ('*' | '/') power | power
    power := unary '^' power | unary          (right-associative)
    unary := ('+' | '-') unary | atom
    atom  := NUMBER | 't' | NAME '(' args ')' | '(' expr ')'

Functions: ``pow(x, y)``, ``Eq(x)`` and its alias ``Exp_q(x)`` (big
q-exponential), ``exp_q(x)`` (small q-exponential). The q-exponentials use
the integration base q. ``**`` is accepted as a synonym for ``^``.

Parsing goes through :mod:`ast` with a whitelist of node types; nothing is
ever passed to ``eval``.
"""

from __future__ import annotations

import ast
import math
from typing import Callable

from .errors import ParseError
from .q_series import DEFAULT_POLICY, PrecisionPolicy, q_exp_big, q_exp_small

__all__ = ["compile_integrand", "FUNCTIONS"]

FUNCTIONS = ("pow", "Eq", "Exp_q", "exp_q")

_BINOPS = {
    ast.Add: lambda x, y: x + y,
    ast.Sub: lambda x, y: x - y,
    ast.Mult: lambda x, y: x * y,
    ast.Div: lambda x, y: x / y,
    ast.Pow: lambda x, y: math.pow(x, y),
}


def compile_integrand(
    text: str, q: float, policy: PrecisionPolicy = DEFAULT_POLICY
) -> Callable[[float], float]:
    """Turn ``text`` into a function of ``t``; raises :class:`ParseError` on bad input."""
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse integrand {text!r}: {exc.msg}") from None

    functions: dict[str, tuple[int, Callable[..., float]]] = {
        "pow": (2, math.pow),
        "Eq": (1, lambda z: q_exp_big(z, q, policy).value),
        "Exp_q": (1, lambda z: q_exp_big(z, q, policy).value),
        "exp_q": (1, lambda z: q_exp_small(z, q, policy).value),
    }

    def build(node: ast.AST) -> Callable[[float], float]:
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and type(node.value) in (int, float):
            value = float(node.value)
            return lambda t: value
        if isinstance(node, ast.Name):
            if node.id != "t":
                raise ParseError(f"unknown variable {node.id!r}; only 't' is allowed")
            return lambda t: t
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            inner = build(node.operand)
            if isinstance(node.op, ast.USub):
                return lambda t: -inner(t)
            return inner
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op = _BINOPS[type(node.op)]
            left, right = build(node.left), build(node.right)
            return lambda t: op(left(t), right(t))
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in functions:
                name = getattr(node.func, "id", "?")
                raise ParseError(f"unknown function {name!r}; available: {', '.join(FUNCTIONS)}")
            if node.keywords:
                raise ParseError("keyword arguments are not supported")
            arity, fn = functions[node.func.id]
            if len(node.args) != arity:
                raise ParseError(f"{node.func.id} takes {arity} argument(s), got {len(node.args)}")
            args = [build(arg) for arg in node.args]
            return lambda t: fn(*(arg(t) for arg in args))
        raise ParseError(f"unsupported syntax in integrand {text!r}: {type(node).__name__}")

    return build(tree)
