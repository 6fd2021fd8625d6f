"""A small expression language for surface and curve components.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = "-" unary | power ;
    power    = atom { "^" exponent } ;
    exponent = [ "-" ] INTEGER | "(" [ "-" ] INTEGER ")" ;
    atom     = NUMBER | CONST | VAR | FUNC "(" expr ")" | "(" expr ")" ;
    FUNC     = "sin" | "cos" | "sinh" | "cosh" | "exp" | "ln" | "sqrt" ;
    CONST    = "pi" | "e" ;
    VAR      = "x" | "y"            (surface context)
             | "t"                  (curve context) ;

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  There is no
implicit multiplication.  Expressions evaluate over floats or :class:`Jet2`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial

from . import jets
from .errors import DivisionByZero, ExprSyntaxError, UnknownIdentifier
from .jets import Jet2

SURFACE_VARS = ("x", "y")
CURVE_VARS = ("t",)
CONSTANTS = {"pi": math.pi, "e": math.e}


class Expr:
    """Base class of AST nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True, slots=True)
class Num(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Const(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True, slots=True)
class Call(Expr):
    func: str
    arg: Expr


@dataclass(frozen=True, slots=True)
class Antiderivative(Expr):
    """``integral_0^arg integrand(t) dt`` by composite Gauss-Legendre quadrature.

    Produced only by the family-2 generator for non-polynomial integrands; it
    has no surface syntax and prints as a descriptive, non-parsable form.
    """

    integrand: Expr
    arg: Expr


# --------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str  # "num", "name", an operator character, or "end"
    text: str
    offset: int


def tokenize(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup if m.lastgroup != "op" else m.group("op")
        toks.append(_Tok(kind, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, src: str, variables: tuple[str, ...]):
        self.toks = tokenize(src)
        self.i = 0
        self.variables = variables

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail({kind})
        return self.advance()

    def fail(self, expected: set[str]):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {what}", t.offset, frozenset(expected))

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "/", "^", "end"})
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            right = self.unary()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        while self.tok.kind == "^":
            self.advance()
            base = Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        paren = self.tok.kind == "("
        if paren:
            self.advance()
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        t = self.tok
        if t.kind != "num":
            self.fail({"integer"})
        value = float(t.text)
        if not value.is_integer():
            raise ExprSyntaxError("exponent must be an integer constant", t.offset, frozenset({"integer"}))
        self.advance()
        if paren:
            self.expect(")")
        return sign * int(value)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name":
            self.advance()
            if t.text in jets.FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text in CONSTANTS:
                return Const(t.text)
            if t.text in self.variables:
                return Var(t.text)
            raise UnknownIdentifier(t.text, t.offset)
        self.fail({"number", "identifier", "("})


@lru_cache(maxsize=1024)
def parse(src: str, variables: tuple[str, ...] = SURFACE_VARS) -> Expr:
    """Parse ``src`` into an AST; ``variables`` are the names in scope."""
    return _Parser(src, tuple(variables)).parse()


def parse_curve(src: str) -> Expr:
    return parse(src, CURVE_VARS)


# --------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(e: Expr) -> int:
    return _PREC.get(type(e), 5)


def to_source(e: Expr) -> str:
    if isinstance(e, Num):
        if e.value < 0:
            # unary minus of a literal re-parses as Neg(Num), keep the value exact
            return f"(0 - {repr(-float(e.value))})"
        return repr(float(e.value))
    if isinstance(e, (Const, Var)):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    if isinstance(e, Antiderivative):
        return f"<integral_0^({to_source(e.arg)}) [{to_source(e.integrand)}] dt>"
    if isinstance(e, Neg):
        inner = to_source(e.arg)
        return f"-({inner})" if _prec(e.arg) < _prec(e) else f"-{inner}"
    if isinstance(e, Pow):
        base = to_source(e.base)
        if _prec(e.base) < _prec(e):
            base = f"({base})"
        return f"{base}^{e.exponent}" if e.exponent >= 0 else f"{base}^({e.exponent})"
    sym = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    p = _prec(e)
    left = to_source(e.left)
    right = to_source(e.right)
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {sym} {right}"


# --------------------------------------------------------------------------
# evaluation


def _div(a, b):
    if isinstance(a, Jet2) or isinstance(b, Jet2):
        return jets.lift(a) / b
    if b == 0.0:
        raise DivisionByZero("division by zero")
    return a / b


def evaluate(e: Expr, env: dict):
    """Evaluate over floats or jets; ``env`` maps variable names to values."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Add):
        return evaluate(e.left, env) + evaluate(e.right, env)
    if isinstance(e, Sub):
        return evaluate(e.left, env) - evaluate(e.right, env)
    if isinstance(e, Mul):
        return evaluate(e.left, env) * evaluate(e.right, env)
    if isinstance(e, Div):
        return _div(evaluate(e.left, env), evaluate(e.right, env))
    if isinstance(e, Neg):
        return -evaluate(e.arg, env)
    if isinstance(e, Pow):
        return jets.pow_const(evaluate(e.base, env), e.exponent)
    if isinstance(e, Call):
        return jets.FUNCTIONS[e.func](evaluate(e.arg, env))
    if isinstance(e, Antiderivative):
        return _eval_antiderivative(e, evaluate(e.arg, env))
    raise TypeError(f"not an expression node: {e!r}")


def eval_jet(e: Expr, x: float, y: float) -> Jet2:
    return jets.lift(evaluate(e, {"x": Jet2.var_x(x), "y": Jet2.var_y(y)}))


def eval_float(e: Expr, **env: float) -> float:
    return float(evaluate(e, {k: float(v) for k, v in env.items()}))


def eval_curve_jet(e: Expr, t: float) -> Jet2:
    """Jet of a curve expression in t; ``dx`` holds d/dt and ``dxx`` d2/dt2."""
    return jets.lift(evaluate(e, {"t": Jet2.var_x(t)}))


def free_vars(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Num, Const)):
        return set()
    if isinstance(e, (Neg,)):
        return free_vars(e.arg)
    if isinstance(e, Call):
        return free_vars(e.arg)
    if isinstance(e, Pow):
        return free_vars(e.base)
    if isinstance(e, Antiderivative):
        return free_vars(e.arg)
    return free_vars(e.left) | free_vars(e.right)


def substitute(e: Expr, mapping: dict[str, Expr]) -> Expr:
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, (Num, Const)):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping))
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, mapping))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, mapping), e.exponent)
    if isinstance(e, Antiderivative):
        return Antiderivative(e.integrand, substitute(e.arg, mapping))
    return type(e)(substitute(e.left, mapping), substitute(e.right, mapping))


# --------------------------------------------------------------------------
# polynomials and quadrature (used by the family-2 generator)


def as_polynomial(e: Expr, var: str = "t") -> Polynomial | None:
    """Coefficients of ``e`` as a polynomial in ``var``, or None if it is not one."""
    if isinstance(e, Num):
        return Polynomial([e.value])
    if isinstance(e, Const):
        return Polynomial([CONSTANTS[e.name]])
    if isinstance(e, Var):
        return Polynomial([0.0, 1.0]) if e.name == var else None
    if isinstance(e, Neg):
        p = as_polynomial(e.arg, var)
        return None if p is None else -p
    if isinstance(e, Call):
        if free_vars(e.arg):
            return None
        return Polynomial([eval_float(e)])
    if isinstance(e, Pow):
        p = as_polynomial(e.base, var)
        if p is None:
            return None
        if e.exponent >= 0:
            return p**e.exponent
        if p.degree() == 0 and p.coef[0] != 0:
            return Polynomial([p.coef[0] ** e.exponent])
        return None
    if isinstance(e, Antiderivative):
        return None
    left = as_polynomial(e.left, var)
    right = as_polynomial(e.right, var)
    if left is None or right is None:
        return None
    if isinstance(e, Add):
        return left + right
    if isinstance(e, Sub):
        return left - right
    if isinstance(e, Mul):
        return left * right
    if right.degree() == 0 and right.coef[0] != 0:
        return left / right.coef[0]
    return None


def polynomial_source(p: Polynomial, var: str) -> str:
    """Render a polynomial as parsable source in ``var`` (Horner-free, term list)."""
    terms = []
    for k, c in enumerate(p.coef):
        c = float(c)
        if c == 0.0:
            continue
        mag = repr(abs(c))
        if k == 0:
            body = mag
        elif k == 1:
            body = f"{mag} * {var}"
        else:
            body = f"{mag} * {var}^{k}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = f"-{body}" if sign == "-" else body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def integrate_curve(integrand: Expr, upper: float, lower: float = 0.0) -> float:
    """Composite 32-point Gauss-Legendre quadrature with panels of length <= 1."""
    span = upper - lower
    if span == 0.0:
        return 0.0
    panels = max(1, math.ceil(abs(span)))
    edges = np.linspace(lower, upper, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        ts = mid + half * _GL_NODES
        vals = np.array([eval_float(integrand, t=t) for t in ts])
        total += half * float(_GL_WEIGHTS @ vals)
    return total


def _eval_antiderivative(e: Antiderivative, arg):
    s = arg.v if isinstance(arg, Jet2) else float(arg)
    value = integrate_curve(e.integrand, s)
    if not isinstance(arg, Jet2):
        return value
    c = eval_curve_jet(e.integrand, s)
    return arg._chain(value, c.v, c.dx)
