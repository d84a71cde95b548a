"""A tiny arithmetic grammar in one variable ``x`` with exact first derivatives.

Accepted: numbers, ``x``, ``pi``, ``e``, ``+ - * /``, ``**`` (or ``^``),
unary minus, and the functions ``exp``, ``log``, ``sqrt``.  Expressions are
parsed with :mod:`ast` and compiled to closures returning ``(value,
derivative)`` pairs (forward-mode differentiation), so derivatives are
analytic rather than finite differences.
"""
from __future__ import annotations

import ast
import math

import numpy as np

_CONSTANTS = {"pi": math.pi, "e": math.e}


def _const(value):
    return lambda x: (np.full_like(x, value, dtype=float), np.zeros_like(x, dtype=float))


def _var(x):
    return x, np.ones_like(x, dtype=float)


def _exp(u, du):
    ev = np.exp(u)
    return ev, ev * du


def _log(u, du):
    return np.log(u), du / u


def _sqrt(u, du):
    r = np.sqrt(u)
    return r, du / (2.0 * r)


_FUNCTIONS = {"exp": _exp, "log": _log, "sqrt": _sqrt}


class ExpressionError(ValueError):
    pass


def _depends_on_x(node) -> bool:
    return any(isinstance(n, ast.Name) and n.id == "x" for n in ast.walk(node))


def _compile(node):
    if isinstance(node, ast.Expression):
        return _compile(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return _const(float(node.value))
    if isinstance(node, ast.Name):
        if node.id == "x":
            return _var
        if node.id in _CONSTANTS:
            return _const(_CONSTANTS[node.id])
        raise ExpressionError(f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand)
        if isinstance(node.op, ast.UAdd):
            return inner

        def neg(x):
            u, du = inner(x)
            return -u, -du

        return neg
    if isinstance(node, ast.BinOp):
        left, right = _compile(node.left), _compile(node.right)
        op = node.op
        if isinstance(op, ast.Add):
            def add(x):
                (a, da), (b, db) = left(x), right(x)
                return a + b, da + db
            return add
        if isinstance(op, ast.Sub):
            def sub(x):
                (a, da), (b, db) = left(x), right(x)
                return a - b, da - db
            return sub
        if isinstance(op, ast.Mult):
            def mul(x):
                (a, da), (b, db) = left(x), right(x)
                return a * b, da * b + a * db
            return mul
        if isinstance(op, ast.Div):
            def div(x):
                (a, da), (b, db) = left(x), right(x)
                return a / b, (da * b - a * db) / (b * b)
            return div
        if isinstance(op, ast.Pow):
            if not _depends_on_x(node.right):
                def power_const(x):
                    (a, da), (n, _) = left(x), right(x)
                    return a ** n, n * a ** (n - 1) * da
                return power_const

            def power(x):
                (a, da), (b, db) = left(x), right(x)
                val = a ** b
                return val, val * (db * np.log(a) + b * da / a)
            return power
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        fn = _FUNCTIONS.get(node.func.id)
        if fn is None or len(node.args) != 1:
            raise ExpressionError(f"unsupported call {ast.unparse(node)!r}")
        arg = _compile(node.args[0])

        def call(x):
            return fn(*arg(x))
        return call
    raise ExpressionError(f"unsupported syntax {ast.unparse(node)!r}")


class Expression:
    """Compiled closed-form profile f(x) with analytic f'(x)."""

    def __init__(self, text: str):
        self.text = str(text)
        try:
            tree = ast.parse(self.text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {self.text!r}: {exc.msg}") from None
        self._fn = _compile(tree)

    def evaluate(self, x):
        """Return ``(f(x), f'(x))`` with the input's shape."""
        arr = np.asarray(x, dtype=float)
        val, der = self._fn(arr)
        if arr.ndim == 0:
            return float(val), float(der)
        return val, der

    def __call__(self, x):
        return self.evaluate(x)[0]

    def derivative(self, x):
        return self.evaluate(x)[1]

    def __repr__(self):
        return f"Expression({self.text!r})"
