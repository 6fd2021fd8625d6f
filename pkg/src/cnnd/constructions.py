"""Factories for translation, graph and ruled surfaces, and the graph equation.

Curve expressions use the variable ``t``; surface expressions use ``x`` and ``y``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AlphaVanishes, DomainError
from .expr import (
    Add,
    Antiderivative,
    Div,
    Expr,
    Mul,
    Num,
    Pow,
    Sub,
    Var,
    as_polynomial,
    eval_curve_jet,
    eval_float,
    eval_jet,
    parse,
    parse_curve,
    polynomial_source,
    substitute,
)
from .geometry import _Local
from .lorentz import TOL_ZERO, CausalClass, basis, causal_class, mink_dot
from .surface import SurfaceDef

X, Y = Var("x"), Var("y")
S = Add(X, Y)  # the characteristic variable x + y of both solution families


def _expr(e: Expr | str, curve: bool = False) -> Expr:
    if isinstance(e, Expr):
        return e
    return parse_curve(e) if curve else parse(e)


def _curve4(c: Sequence[Expr | str]) -> tuple[Expr, ...]:
    if len(c) != 4:
        raise ValueError("a curve in R^{3,1} needs four component expressions")
    return tuple(_expr(e, curve=True) for e in c)


def _is_zero(e: Expr) -> bool:
    return isinstance(e, Num) and e.value == 0.0


def _plus(a: Expr, b: Expr) -> Expr:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return Add(a, b)


def _curve_velocity(c: Sequence[Expr], t: float) -> np.ndarray:
    return np.array([eval_curve_jet(e, t).dx for e in c])


# --------------------------------------------------------------------------
# split-complex numbers


@dataclass(frozen=True)
class SplitComplex:
    """u + sigma v with sigma^2 = 1."""

    u: float
    v: float

    def __add__(self, o: SplitComplex) -> SplitComplex:
        return SplitComplex(self.u + o.u, self.v + o.v)

    def __sub__(self, o: SplitComplex) -> SplitComplex:
        return SplitComplex(self.u - o.u, self.v - o.v)

    def __mul__(self, o) -> SplitComplex:
        if isinstance(o, (int, float)):
            return SplitComplex(self.u * o, self.v * o)
        return SplitComplex(self.u * o.u + self.v * o.v, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def conj(self) -> SplitComplex:
        return SplitComplex(self.u, -self.v)

    def modulus2(self) -> float:
        """z conj(z) = u^2 - v^2; may be negative or zero."""
        return self.u * self.u - self.v * self.v


class SplitDerivatives(NamedTuple):
    dz: SplitComplex
    dzbar: SplitComplex


def split_ops(f: Expr | str, g: Expr | str, x: float, y: float) -> SplitDerivatives:
    """h_z and h_zbar for h = f + sigma g, with d/dz = (d/dx + sigma d/dy)/2."""
    jf, jg = eval_jet(_expr(f), x, y), eval_jet(_expr(g), x, y)
    dz = SplitComplex(0.5 * (jf.dx + jg.dy), 0.5 * (jg.dx + jf.dy))
    dzbar = SplitComplex(0.5 * (jf.dx - jg.dy), 0.5 * (jg.dx - jf.dy))
    return SplitDerivatives(dz, dzbar)


def split_equation_residual(f: Expr | str, g: Expr | str, x: float, y: float) -> float:
    """(|h_z|^2 - |h_zbar|^2)^2 - |h_z + h_zbar|^2, which equals pde_residual."""
    d = split_ops(f, g, x, y)
    lhs = d.dz.modulus2() - d.dzbar.modulus2()
    return lhs * lhs - (d.dz + d.dzbar).modulus2()


# --------------------------------------------------------------------------
# translation surfaces


def translation_surface(alpha: Sequence[Expr | str], delta: Sequence[Expr | str], samples: Sequence[float] | None = None) -> SurfaceDef:
    """psi(x, y) = alpha(x) + delta(y).

    ``meta["diagnostics"]`` records, over the sample parameters, whether
    <alpha', delta'> vanishes and whether delta' is orthogonal to e1.
    """
    a, d = _curve4(alpha), _curve4(delta)
    comps = tuple(_plus(substitute(ai, {"t": X}), substitute(di, {"t": Y})) for ai, di in zip(a, d))
    ts = list(np.linspace(-1.0, 1.0, 9)) if samples is None else list(samples)
    orth = perp_e1 = True
    evaluated = 0
    for t in ts:
        try:
            da = _curve_velocity(a, t)
            for t2 in ts:
                dd = _curve_velocity(d, t2)
                orth &= abs(mink_dot(da, dd)) <= 1e-9
        except (DomainError, ZeroDivisionError):
            continue
        evaluated += 1
    for t in ts:
        try:
            perp_e1 &= abs(_curve_velocity(d, t)[0]) <= 1e-9
        except (DomainError, ZeroDivisionError):
            continue
    diag = {"alpha_delta_orthogonal": bool(orth), "delta_perp_e1": bool(perp_e1), "samples": len(ts), "evaluated": evaluated}
    return SurfaceDef(comps, "translation", meta={"alpha": a, "delta": d, "diagnostics": diag})


def translation_cnnd_criterion(s: SurfaceDef, x: float, tol: float = 1e-9) -> bool:
    """<e1, alpha'(x)>^2 == <alpha'(x), alpha'(x)> within tol."""
    if s.kind != "translation" or "alpha" not in s.meta:
        raise ValueError("translation_cnnd_criterion needs a surface built by translation_surface")
    da = _curve_velocity(s.meta["alpha"], x)
    return bool(abs(da[0] * da[0] - mink_dot(da, da)) <= tol)


# --------------------------------------------------------------------------
# graphs psi = (x, y, f, g)


def graph_surface(f: Expr | str, g: Expr | str, Z=None) -> SurfaceDef:
    f, g = _expr(f), _expr(g)
    kwargs = {} if Z is None else {"Z": np.asarray(Z, dtype=float)}
    return SurfaceDef((X, Y, f, g), "graph", meta={"f": f, "g": g}, **kwargs)


class CriterionStatus(enum.Enum):
    HOLDS = "Holds"
    HOLDS_DEGENERATE = "HoldsDegenerate"
    FAILS = "Fails"


@dataclass(frozen=True)
class CriterionResult:
    status: CriterionStatus
    residual: float  # G - (EG - F^2) for Z = e1 (the graph-equation residual), E - (EG - F^2) for Z = e2
    z_top: np.ndarray
    z_perp: np.ndarray


def graph_cnnd_criterion(s: SurfaceDef, x: float, y: float, tol: float = 1e-9) -> CriterionResult:
    if s.kind != "graph":
        raise ValueError("graph_cnnd_criterion needs a graph surface")
    if np.array_equal(s.Z, basis(1)):
        which = "G"
    elif np.array_equal(s.Z, basis(2)):
        which = "E"
    else:
        raise ValueError("the graph criterion is stated for Z = e1 or Z = e2")
    loc = _Local(s, x, y)
    ff = loc.ff
    target = ff.G if which == "G" else ff.E
    residual = target - ff.det
    scale = max(1.0, abs(ff.E * ff.G), ff.F * ff.F, abs(target))
    # General tangential projection; for Z = e1 and EG - F^2 = G it is psi_x - (F/G) psi_y.
    z_top = loc.tangential(s.Z)
    z_perp = s.Z - z_top
    if abs(residual) > tol * scale:
        status = CriterionStatus.FAILS
    elif causal_class(z_perp, 1e-9, TOL_ZERO) is CausalClass.ZERO:
        status = CriterionStatus.HOLDS_DEGENERATE
    else:
        status = CriterionStatus.HOLDS
    return CriterionResult(status, float(residual), z_top, z_perp)


def pde_residual(f: Expr | str, g: Expr | str, x: float, y: float) -> float:
    """(1+f_y^2) g_x^2 - 2 f_x f_y g_x g_y - (1-g_y^2) f_x^2."""
    jf, jg = eval_jet(_expr(f), x, y), eval_jet(_expr(g), x, y)
    return residual_from_partials(jf.dx, jf.dy, jg.dx, jg.dy)


def residual_from_partials(fx: float, fy: float, gx: float, gy: float) -> float:
    return (1.0 + fy * fy) * gx * gx - 2.0 * fx * fy * gx * gy - (1.0 - gy * gy) * fx * fx


# --------------------------------------------------------------------------
# explicit solution families


def family1(alpha: Expr | str, k: float = 0.0) -> tuple[Expr, Expr]:
    """f = (alpha(x+y) + k)/2, g = (alpha(x+y) - k)/2."""
    a = substitute(_expr(alpha, curve=True), {"t": S})
    k = float(k)
    if k == 0.0:
        return Div(a, Num(2.0)), Div(a, Num(2.0))
    return Div(Add(a, Num(k)), Num(2.0)), Div(Sub(a, Num(k)), Num(2.0))


@dataclass(frozen=True)
class Family2:
    f: Expr
    g: Expr
    max_residual: float
    sample_points: int

    def __iter__(self):
        return iter((self.f, self.g))


DEFAULT_DOMAIN = ((-1.0, 1.0), (-1.0, 1.0))


def _antiderivative(c: Expr) -> Expr:
    """integral_0^{x+y} c(t) dt, symbolic when c is a polynomial."""
    p = as_polynomial(c, "t")
    if p is not None:
        return substitute(parse_curve(polynomial_source(p.integ(), "t")), {"t": S})
    return Antiderivative(c, S)


def family2(
    alpha: Expr | str,
    c: Expr | str = "0",
    k: float = 0.0,
    domain: tuple[tuple[float, float], tuple[float, float]] = DEFAULT_DOMAIN,
    n: int = 21,
    tol_alpha: float = 1e-8,
) -> Family2:
    """f = (alpha^2 + x^2 - y^2 + C + k(x-y)) / (2 alpha), g likewise with the signs
    of the last four terms reversed, where alpha and C = integral c are evaluated at x + y.

    The graph equation is not asserted; ``max_residual`` is its largest
    absolute value over an n x n grid of ``domain``.
    """
    alpha_c, c_c = _expr(alpha, curve=True), _expr(c, curve=True)
    (x0, x1), (y0, y1) = domain
    for t in np.linspace(x0 + y0, x1 + y1, 8 * n + 1):
        v = eval_float(alpha_c, t=float(t))
        if not math.isfinite(v) or abs(v) < tol_alpha:
            raise AlphaVanishes(f"alpha({float(t)!r}) = {v!r} on the domain")
    a = substitute(alpha_c, {"t": S})
    quad = Sub(Pow(X, 2), Pow(Y, 2))
    tail = quad
    if not _is_zero(c_c):
        tail = Add(tail, _antiderivative(c_c))
    if float(k) != 0.0:
        tail = Add(tail, Mul(Num(float(k)), Sub(X, Y)))
    a2 = Pow(a, 2)
    den = Mul(Num(2.0), a)
    f = Div(Add(a2, tail), den)
    g = Div(Sub(a2, tail), den)
    worst = 0.0
    for x in np.linspace(x0, x1, n):
        for y in np.linspace(y0, y1, n):
            worst = max(worst, abs(pde_residual(f, g, float(x), float(y))))
    return Family2(f, g, worst, n * n)


# --------------------------------------------------------------------------
# ruled surfaces psi = alpha(y) + x D(y)


def ruled_surface(alpha: Sequence[Expr | str], direction, Z=None) -> SurfaceDef:
    """``direction`` is a constant 4-vector (Z0_top) or four curve expressions (Z_top(t))."""
    a = _curve4(alpha)
    if all(isinstance(v, (int, float, np.floating, np.integer)) for v in direction):
        vec = [float(v) for v in direction]
        if len(vec) != 4:
            raise ValueError("a constant direction needs four components")
        D = tuple(Num(v) for v in vec)
        mode = "constant"
    else:
        D = tuple(substitute(e, {"t": Y}) for e in _curve4(direction))
        mode = "curve"
    comps = []
    for ai, di in zip(a, D):
        base = substitute(ai, {"t": Y})
        if _is_zero(di):
            comps.append(base)
        elif isinstance(di, Num) and di.value == 1.0:
            comps.append(_plus(base, X))
        else:
            comps.append(_plus(base, Mul(X, di)))
    kwargs = {} if Z is None else {"Z": np.asarray(Z, dtype=float)}
    return SurfaceDef(tuple(comps), "ruled", meta={"alpha": a, "direction": D, "mode": mode}, **kwargs)
