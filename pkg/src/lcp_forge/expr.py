"""A small exact expression language for chart formulas.

Expressions are Laurent polynomials in named variables with exact
coefficients (Fractions or number-field elements).  The symbol ``pi`` is a
formal variable with a float value attached for numerics.  Text is parsed
with :mod:`ast`; ``^`` means power.

>>> e = parse("t^-2 * (w1 + 1/2)")
>>> e.evaluate({"t": 2.0, "w1": 1.5})
0.5
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction

from .errors import InvalidInput, Unsupported

PI = "pi"
SYMBOL_VALUES = {PI: math.pi}


def _mono_key(m: dict):
    return tuple(sorted((v, e) for v, e in m.items() if e != 0))


class Expr:
    """Immutable Laurent polynomial: monomial key -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, c in (terms or {}).items():
            if c != 0:
                clean[k] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, name: str):
        return cls({((name, 1),): Fraction(1)})

    @staticmethod
    def lift(x):
        if isinstance(x, Expr):
            return x
        return Expr.const(x)

    # -- queries ----------------------------------------------------------
    def variables(self):
        return sorted({v for k in self.terms for v, _ in k})

    def is_constant(self):
        return all(k == () for k in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise InvalidInput("expression is not constant")
        return self.terms.get((), Fraction(0))

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def depends_on(self, name):
        return any(v == name for k in self.terms for v, _ in k)

    def __eq__(self, o):
        o = Expr.lift(o)
        return self.terms == o.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda kv: kv[0])))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, o):
        o = Expr.lift(o)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out[k] + c if k in out else c
        return Expr(out)

    __radd__ = __add__

    def __neg__(self):
        return Expr({k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-Expr.lift(o))

    def __rsub__(self, o):
        return Expr.lift(o) - self

    def __mul__(self, o):
        o = Expr.lift(o)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                m = dict(k1)
                for v, e in k2:
                    m[v] = m.get(v, 0) + e
                k = _mono_key(m)
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return Expr(out)

    __rmul__ = __mul__

    def inverse(self):
        if not self.is_monomial():
            raise Unsupported("only monomials can be inverted in the expression language")
        (k, c), = self.terms.items()
        return Expr({tuple((v, -e) for v, e in k): 1 / c})

    def __truediv__(self, o):
        return self * Expr.lift(o).inverse()

    def __rtruediv__(self, o):
        return Expr.lift(o) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise Unsupported("only integer powers are supported")
        if n < 0:
            return self.inverse() ** (-n)
        r = Expr.const(Fraction(1))
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    # -- calculus / substitution ----------------------------------------
    def diff(self, name: str):
        out = {}
        for k, c in self.terms.items():
            m = dict(k)
            e = m.get(name, 0)
            if e == 0:
                continue
            m[name] = e - 1
            nk = _mono_key(m)
            out[nk] = out[nk] + c * e if nk in out else c * e
        return Expr(out)

    def substitute(self, mapping: dict):
        """Replace variables by expressions; negative powers need monomial images."""
        mapping = {k: parse(v) if isinstance(v, str) else Expr.lift(v) for k, v in mapping.items()}
        result = Expr()
        for k, c in self.terms.items():
            term = Expr.const(c)
            for v, e in k:
                term = term * (mapping[v] ** e if v in mapping else Expr.var(v) ** e)
            result = result + term
        return result

    def evaluate(self, env: dict) -> float:
        total = 0.0
        for k, c in self.terms.items():
            t = float(c)
            for v, e in k:
                if v in env:
                    x = env[v]
                elif v in SYMBOL_VALUES:
                    x = SYMBOL_VALUES[v]
                else:
                    raise InvalidInput(f"no value for variable {v!r}")
                if e < 0 and x == 0:
                    raise InvalidInput(f"negative power of {v} at zero")
                t *= x ** e
            total += t
        return total

    def negative_power_vars(self):
        return sorted({v for k in self.terms for v, e in k if e < 0})

    def __repr__(self):
        return f"Expr({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items(), key=lambda kv: kv[0]):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in k)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)


def parse(text, constants: dict | None = None) -> Expr:
    """Parse a formula.  ``constants`` maps names to exact scalars."""
    if isinstance(text, Expr):
        return text
    if isinstance(text, (int, Fraction)):
        return Expr.const(Fraction(text))
    if not isinstance(text, str):
        raise InvalidInput(f"cannot parse expression {text!r}")
    constants = constants or {}
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise InvalidInput(f"malformed expression {text!r}") from exc
    return _walk(tree.body, constants, text)


def _walk(node, consts, src):
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            n = _int_exponent(node.right, src)
            return _walk(node.left, consts, src) ** n
        a, b = _walk(node.left, consts, src), _walk(node.right, consts, src)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if b.is_constant():
                return a * Expr.const(1 / b.constant_value())
            return a / b
        raise InvalidInput(f"unsupported operator in {src!r}")
    if isinstance(node, ast.UnaryOp):
        v = _walk(node.operand, consts, src)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise InvalidInput(f"unsupported unary operator in {src!r}")
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise InvalidInput(f"unsupported literal in {src!r}")
        # decimal literals are read exactly from their source text
        return Expr.const(Fraction(repr(node.value)) if isinstance(node.value, float) else Fraction(node.value))
    if isinstance(node, ast.Name):
        if node.id in consts:
            return Expr.const(consts[node.id])
        return Expr.var(node.id)
    raise InvalidInput(f"unsupported syntax in {src!r}")


def _int_exponent(node, src):
    sign = 1
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        sign = -1 if isinstance(node.op, ast.USub) else 1
        node = node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return sign * node.value
    raise InvalidInput(f"exponents must be integer literals in {src!r}")
