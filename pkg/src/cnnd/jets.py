"""Second-order forward-mode differentiation in two parameters.

A :class:`Jet2` carries the value of a quantity together with its first and
second partial derivatives with respect to the surface parameters (x, y).
Arithmetic is truncated Taylor arithmetic, exact through order two.

The elementary functions below accept either jets or plain floats, so the same
expression evaluator serves both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

from .errors import DivisionByZero, DomainError

TOL_ZERO = 1e-12


@dataclass(frozen=True, slots=True)
class Jet2:
    v: float
    dx: float = 0.0
    dy: float = 0.0
    dxx: float = 0.0
    dxy: float = 0.0
    dyy: float = 0.0

    @classmethod
    def const(cls, c: float) -> Jet2:
        return cls(float(c))

    @classmethod
    def var_x(cls, x: float) -> Jet2:
        return cls(float(x), 1.0)

    @classmethod
    def var_y(cls, y: float) -> Jet2:
        return cls(float(y), 0.0, 1.0)

    @classmethod
    def first_order(cls, v: float, dx: float, dy: float) -> Jet2:
        """A germ known only to first order.

        The second-order channels are set to zero, so after arithmetic only
        ``v``, ``dx`` and ``dy`` of the result are meaningful.
        """
        return cls(float(v), float(dx), float(dy))

    def grad(self) -> tuple[float, float]:
        return (self.dx, self.dy)

    def directional(self, u) -> float:
        return self.dx * u[0] + self.dy * u[1]

    def _chain(self, f0: float, f1: float, f2: float) -> Jet2:
        return Jet2(
            f0,
            f1 * self.dx,
            f1 * self.dy,
            f2 * self.dx * self.dx + f1 * self.dxx,
            f2 * self.dx * self.dy + f1 * self.dxy,
            f2 * self.dy * self.dy + f1 * self.dyy,
        )

    def __add__(self, other) -> Jet2:
        if isinstance(other, Real):
            return Jet2(self.v + other, self.dx, self.dy, self.dxx, self.dxy, self.dyy)
        if not isinstance(other, Jet2):
            return NotImplemented
        return Jet2(
            self.v + other.v,
            self.dx + other.dx,
            self.dy + other.dy,
            self.dxx + other.dxx,
            self.dxy + other.dxy,
            self.dyy + other.dyy,
        )

    __radd__ = __add__

    def __neg__(self) -> Jet2:
        return Jet2(-self.v, -self.dx, -self.dy, -self.dxx, -self.dxy, -self.dyy)

    def __sub__(self, other) -> Jet2:
        if isinstance(other, (Real, Jet2)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> Jet2:
        return (-self) + other

    def __mul__(self, other) -> Jet2:
        if isinstance(other, Real):
            c = float(other)
            return Jet2(c * self.v, c * self.dx, c * self.dy, c * self.dxx, c * self.dxy, c * self.dyy)
        if not isinstance(other, Jet2):
            return NotImplemented
        a, b = self, other
        return Jet2(
            a.v * b.v,
            a.dx * b.v + a.v * b.dx,
            a.dy * b.v + a.v * b.dy,
            a.dxx * b.v + 2.0 * a.dx * b.dx + a.v * b.dxx,
            a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy,
            a.dyy * b.v + 2.0 * a.dy * b.dy + a.v * b.dyy,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> Jet2:
        if abs(self.v) <= TOL_ZERO:
            raise DivisionByZero(f"division by a jet with value {self.v!r}")
        r = 1.0 / self.v
        return self._chain(r, -r * r, 2.0 * r * r * r)

    def __truediv__(self, other) -> Jet2:
        if isinstance(other, Real):
            if abs(other) <= TOL_ZERO:
                raise DivisionByZero(f"division by {other!r}")
            return self * (1.0 / float(other))
        if not isinstance(other, Jet2):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> Jet2:
        return self.reciprocal() * other

    def __pow__(self, n) -> Jet2:
        return pow_const(self, n)


Number = float | Jet2


def lift(value: Number) -> Jet2:
    return value if isinstance(value, Jet2) else Jet2.const(value)


def jet_arith(op: str, a: Number, b: Number | None = None) -> Jet2:
    """Named-operation entry point; ``b`` is ignored for ``neg``."""
    a = lift(a)
    if op == "neg":
        return -a
    b = lift(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown jet operation {op!r}")


def _apply(a: Number, f0, f1, f2) -> Number:
    if isinstance(a, Jet2):
        return a._chain(f0, f1, f2)
    return f0


def sin(a: Number) -> Number:
    t = a.v if isinstance(a, Jet2) else float(a)
    s, c = math.sin(t), math.cos(t)
    return _apply(a, s, c, -s)


def cos(a: Number) -> Number:
    t = a.v if isinstance(a, Jet2) else float(a)
    s, c = math.sin(t), math.cos(t)
    return _apply(a, c, -s, -c)


def sinh(a: Number) -> Number:
    t = a.v if isinstance(a, Jet2) else float(a)
    s, c = math.sinh(t), math.cosh(t)
    return _apply(a, s, c, s)


def cosh(a: Number) -> Number:
    t = a.v if isinstance(a, Jet2) else float(a)
    s, c = math.sinh(t), math.cosh(t)
    return _apply(a, c, s, c)


def exp(a: Number) -> Number:
    t = a.v if isinstance(a, Jet2) else float(a)
    e = math.exp(t)
    return _apply(a, e, e, e)


def ln(a: Number) -> Number:
    t = a.v if isinstance(a, Jet2) else float(a)
    if t <= 0.0:
        raise DomainError(f"ln of non-positive value {t!r}")
    return _apply(a, math.log(t), 1.0 / t, -1.0 / (t * t))


def sqrt(a: Number) -> Number:
    t = a.v if isinstance(a, Jet2) else float(a)
    if t <= 0.0:
        # sqrt(0) has no derivative; plain floats may still take it.
        if t == 0.0 and not isinstance(a, Jet2):
            return 0.0
        raise DomainError(f"sqrt of non-positive value {t!r}")
    r = math.sqrt(t)
    return _apply(a, r, 0.5 / r, -0.25 / (r * t))


def pow_const(a: Number, n: float) -> Number:
    """a ** n for a constant exponent n.

    Integer exponents are defined for every base (negative ones need a != 0);
    non-integer exponents require a positive base.
    """
    t = a.v if isinstance(a, Jet2) else float(a)
    n = float(n)
    if n.is_integer():
        k = int(n)
        if k == 0:
            return _apply(a, 1.0, 0.0, 0.0)
        if k < 0 and t == 0.0:
            raise DivisionByZero("negative power of zero")
        f0 = t**k
        f1 = k * t ** (k - 1) if k != 0 else 0.0
        f2 = k * (k - 1) * t ** (k - 2) if k not in (0, 1) else 0.0
        return _apply(a, f0, f1, f2)
    if t <= 0.0:
        raise DomainError(f"non-integer power {n!r} of non-positive value {t!r}")
    return _apply(a, t**n, n * t ** (n - 1), n * (n - 1) * t ** (n - 2))


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "sinh": sinh,
    "cosh": cosh,
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
}


def jet_func(name: str, a: Number, exponent: float | None = None) -> Number:
    if name == "pow_const":
        if exponent is None:
            raise ValueError("pow_const needs an exponent")
        return pow_const(a, exponent)
    try:
        return FUNCTIONS[name](a)
    except KeyError:
        raise ValueError(f"unknown function {name!r}") from None
