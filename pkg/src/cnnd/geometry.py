"""Pointwise geometry of spacelike surfaces with a canonical normal null direction.

Tangent vectors are passed around in coordinate components with respect to
(psi_x, psi_y) unless a name says otherwise; normal and ambient vectors are
4-vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BetaResidual, DegenerateZperp, NotCnnd, NotSpacelike
from .jets import Jet2
from .lorentz import METRIC, TOL_NULL, TOL_ZERO, CausalClass, causal_class, det4, mink_dot
from .surface import PointJets, SurfaceDef

FD_STEP = 1e-4
TOL_SPACELIKE = 1e-12
TOL_ORTH = 1e-9


@dataclass(frozen=True)
class FirstForm:
    E: float
    F: float
    G: float

    @property
    def det(self) -> float:
        return self.E * self.G - self.F * self.F

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.E, self.F], [self.F, self.G]])

    @property
    def inverse(self) -> np.ndarray:
        d = self.det
        return np.array([[self.G, -self.F], [-self.F, self.E]]) / d

    def dot(self, u, v) -> float:
        return float(np.asarray(u) @ self.matrix @ np.asarray(v))


@dataclass(frozen=True)
class SecondForm:
    Bxx: np.ndarray
    Bxy: np.ndarray
    Byy: np.ndarray

    def __call__(self, u, v) -> np.ndarray:
        """B(u, v) for tangent vectors in coordinate components."""
        return u[0] * v[0] * self.Bxx + (u[0] * v[1] + u[1] * v[0]) * self.Bxy + u[1] * v[1] * self.Byy

    def paired(self, nu) -> np.ndarray:
        """Symmetric matrix [<B_ij, nu>]."""
        bxy = mink_dot(self.Bxy, nu)
        return np.array([[mink_dot(self.Bxx, nu), bxy], [bxy, mink_dot(self.Byy, nu)]])


@dataclass(frozen=True)
class CnndFrame:
    point: tuple[float, float]
    Ztop: np.ndarray
    W: np.ndarray
    Zperp: np.ndarray
    Wprime: np.ndarray
    a: float
    b: float
    betaZ: float
    betaW: float
    alpha_ztop: float  # <B(Z_top, W), Z_perp>; vanishes on CNND surfaces
    ztop_coords: np.ndarray
    w_coords: np.ndarray
    orientation: float  # determinant of (Ztop, W, (Zp+W')/sqrt2, (Zp-W')/sqrt2)
    beta_residual: float
    tangent_sign: float  # +1 if (Ztop, W) agrees with the (psi_x, psi_y) orientation

    @property
    def normal_basis(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal normal frame ((Zp+W')/sqrt2 spacelike, (Zp-W')/sqrt2 timelike)."""
        r = math.sqrt(2.0)
        return (self.Zperp + self.Wprime) / r, (self.Zperp - self.Wprime) / r

    def tangent(self, u1: float, u2: float) -> np.ndarray:
        """Coordinate components of u1*Ztop + u2*W."""
        return u1 * self.ztop_coords + u2 * self.w_coords

    def null_coords(self, v) -> tuple[float, float]:
        """Components (x, y) of a normal vector v = x*Zperp + y*Wprime."""
        return mink_dot(v, self.Wprime), mink_dot(v, self.Zperp)


@dataclass(frozen=True)
class GeometryReport:
    point: tuple[float, float]
    K: float
    KN: float
    Hvec: np.ndarray
    H2: float
    Hstar: np.ndarray
    frame: CnndFrame
    ff: FirstForm
    sf: SecondForm


class _Local:
    """Jets, metric and projections at one point; shared by the operations below."""

    def __init__(self, s: SurfaceDef, x: float, y: float, tol: float = TOL_SPACELIKE):
        self.s = s
        self.x, self.y = float(x), float(y)
        self.j: PointJets = s.jets(x, y)
        px, py = self.j.px, self.j.py
        self.ff = FirstForm(mink_dot(px, px), mink_dot(px, py), mink_dot(py, py))
        if not (self.ff.det > tol and self.ff.E > 0):
            raise NotSpacelike(
                f"induced metric not positive definite at ({x!r}, {y!r}): "
                f"E={self.ff.E!r}, det={self.ff.det!r}"
            )
        self.ginv = self.ff.inverse
        self.sf = SecondForm(self.normal(self.j.pxx), self.normal(self.j.pxy), self.normal(self.j.pyy))

    def coords(self, v) -> np.ndarray:
        """Coordinate components of the tangential projection of v."""
        return self.ginv @ np.array([mink_dot(v, self.j.px), mink_dot(v, self.j.py)])

    def ambient(self, u) -> np.ndarray:
        return u[0] * self.j.px + u[1] * self.j.py

    def tangential(self, v) -> np.ndarray:
        return self.ambient(self.coords(v))

    def normal(self, v) -> np.ndarray:
        return np.asarray(v, dtype=float) - self.tangential(v)


def fundamental_forms(s: SurfaceDef, x: float, y: float) -> tuple[FirstForm, SecondForm]:
    loc = _Local(s, x, y)
    return loc.ff, loc.sf


def _frame_coords(px: Sequence, py: Sequence, Z: np.ndarray):
    """Coordinates of Z_top and of the unit tangent W orthogonal to it.

    Written over generic scalars so that it runs on floats and on first-order
    jets alike; here W is oriented so that det[Z_top, W] > 0 in coordinates.
    """
    eta = np.diag(METRIC)

    def dot(u, v):
        return sum(eta[i] * u[i] * v[i] for i in range(4))

    E, F, G = dot(px, px), dot(px, py), dot(py, py)
    det = E * G - F * F
    b1 = sum(eta[i] * Z[i] * px[i] for i in range(4))
    b2 = sum(eta[i] * Z[i] * py[i] for i in range(4))
    c1 = (G * b1 - F * b2) / det
    c2 = (E * b2 - F * b1) / det
    ztop2 = b1 * c1 + b2 * c2
    scale = det * ztop2
    if not isinstance(scale, Jet2) and scale <= 0:
        norm = math.nan  # Z_top is not spacelike; callers reject the point
    else:
        norm = scale**0.5
    w1 = -b2 / norm
    w2 = b1 / norm
    return (c1, c2), (w1, w2), (E, F, G)


def _other_null(loc: _Local, zperp: np.ndarray) -> np.ndarray:
    """The null normal W' with <Zperp, W'> = 1."""
    candidates = [loc.normal(np.eye(4)[k]) for k in range(4)]
    n = max(candidates, key=lambda v: abs(mink_dot(v, zperp)))
    nz = mink_dot(n, zperp)
    lightlike = n - (mink_dot(n, n) / (2.0 * nz)) * zperp
    return lightlike / mink_dot(lightlike, zperp)


def _beta(B: np.ndarray, zperp: np.ndarray) -> tuple[float, float]:
    """Least-squares coefficient of B along Zperp and the Euclidean residual."""
    beta = float(np.dot(B, zperp) / np.dot(zperp, zperp))
    return beta, float(np.linalg.norm(B - beta * zperp))


def _frame(loc: _Local, tol: float, tol_zero: float) -> CnndFrame:
    Z = loc.s.Z
    pt = (loc.x, loc.y)
    c, w, _ = _frame_coords(loc.j.px, loc.j.py, Z)
    c, w = np.array(c), np.array(w)
    ztop = loc.ambient(c)
    zperp = Z - ztop
    cls = causal_class(zperp, tol, tol_zero)
    if cls is CausalClass.ZERO:
        raise DegenerateZperp(f"Z is tangent to the surface at {pt} (Z_perp = 0)", pt)
    q = mink_dot(zperp, zperp)
    if cls is not CausalClass.LIGHTLIKE:
        raise NotCnnd(f"<Z_perp, Z_perp> = {q!r} is not null at {pt}", pt, q)
    wprime = _other_null(loc, zperp)
    r2 = math.sqrt(2.0)
    tangent_sign = 1.0
    W = loc.ambient(w)
    orientation = det4(ztop, W, (zperp + wprime) / r2, (zperp - wprime) / r2)
    if orientation < 0:
        # W' is unique, so the ambient orientation of the frame is fixed through W.
        tangent_sign = -1.0
        w = -w
        W = -W
        orientation = -orientation
    sf = loc.sf
    Bww = sf(w, w)
    beta_z, rz = _beta(sf(c, c), zperp)
    beta_w, rw = _beta(sf(w, c), zperp)
    scale = max(1.0, float(np.linalg.norm(sf(c, c))), float(np.linalg.norm(sf(w, c))))
    resid = max(rz, rw) / scale
    if resid > tol:
        raise BetaResidual(f"B(., Z_top) not parallel to Z_perp at {pt}: residual {resid!r}")
    return CnndFrame(
        point=pt,
        Ztop=ztop,
        W=W,
        Zperp=zperp,
        Wprime=wprime,
        a=mink_dot(Bww, zperp),
        b=mink_dot(Bww, wprime),
        betaZ=beta_z,
        betaW=beta_w,
        alpha_ztop=mink_dot(sf(c, w), zperp),
        ztop_coords=c,
        w_coords=w,
        orientation=orientation,
        beta_residual=resid,
        tangent_sign=tangent_sign,
    )


def cnnd_frame(s: SurfaceDef, x: float, y: float, tol: float = TOL_NULL, tol_zero: float = TOL_ZERO) -> CnndFrame:
    return _frame(_Local(s, x, y), tol, tol_zero)


def zperp_norm2(s: SurfaceDef, x: float, y: float) -> float:
    """<Z_perp, Z_perp> at a spacelike point, with no CNND requirement."""
    loc = _Local(s, x, y)
    zperp = loc.normal(s.Z)
    return mink_dot(zperp, zperp)


def shape_operator(ff: FirstForm, sf: SecondForm, nu, u) -> np.ndarray:
    """A_nu(u) in coordinate components: <A_nu(u), v> = <B(u, v), nu>."""
    if not ff.det > 0:
        raise NotSpacelike("shape operator needs a positive definite first form")
    return ff.inverse @ sf.paired(nu) @ np.asarray(u, dtype=float)


def shape_matrix(ff: FirstForm, sf: SecondForm, nu) -> np.ndarray:
    return ff.inverse @ sf.paired(nu)


def _report(loc: _Local, frame: CnndFrame) -> GeometryReport:
    sf, ff = loc.sf, loc.ff
    c, w = frame.ztop_coords, frame.w_coords
    Bzz, Bzw, Bww = sf(c, c), sf(c, w), sf(w, w)
    K = mink_dot(Bzz, Bww) - mink_dot(Bzw, Bzw)
    n1, n2 = frame.normal_basis
    A1, A2 = shape_matrix(ff, sf, n1), shape_matrix(ff, sf, n2)
    KN = ff.dot((A1 @ A2 - A2 @ A1) @ c, w)
    H = 0.5 * (Bzz + Bww)
    return GeometryReport(
        point=(loc.x, loc.y),
        K=float(K),
        KN=float(KN),
        Hvec=H,
        H2=mink_dot(H, H),
        Hstar=Bzz - H,
        frame=frame,
        ff=ff,
        sf=sf,
    )


def geometry_report(s: SurfaceDef, x: float, y: float, tol: float = TOL_NULL) -> GeometryReport:
    loc = _Local(s, x, y)
    return _report(loc, _frame(loc, tol, TOL_ZERO))


# --------------------------------------------------------------------------
# derivatives of frame fields


@dataclass(frozen=True)
class FrameDerivatives:
    """First partials of the coordinate fields of Z_top and W, and Christoffel symbols.

    ``dc[k]`` is d/d(coordinate k) of the Z_top components, likewise ``dw``;
    ``gamma[k, i, j]`` is Gamma^k_ij.
    """

    c: np.ndarray
    w: np.ndarray
    dc: np.ndarray
    dw: np.ndarray
    gamma: np.ndarray

    def covariant(self, u, field: str) -> np.ndarray:
        """nabla_u V for V = Z_top (``"ztop"``) or W (``"w"``), in coordinates."""
        V, dV = (self.c, self.dc) if field == "ztop" else (self.w, self.dw)
        u = np.asarray(u, dtype=float)
        return u[0] * dV[0] + u[1] * dV[1] + np.einsum("kij,i,j->k", self.gamma, u, V)


def frame_derivatives(s: SurfaceDef, x: float, y: float, w_sign: float = 1.0) -> FrameDerivatives:
    """Exact first derivatives of the frame fields from order-2 jets of psi.

    ``w_sign`` is :attr:`CnndFrame.tangent_sign`, so that W matches the frame.
    """
    j = s.jets(x, y)
    px = [Jet2.first_order(j.px[i], j.pxx[i], j.pxy[i]) for i in range(4)]
    py = [Jet2.first_order(j.py[i], j.pxy[i], j.pyy[i]) for i in range(4)]
    (c1, c2), (w1, w2), (E, F, G) = _frame_coords(px, py, s.Z)
    c = np.array([c1.v, c2.v])
    w = w_sign * np.array([w1.v, w2.v])
    dc = np.array([[c1.dx, c2.dx], [c1.dy, c2.dy]])
    dw = w_sign * np.array([[w1.dx, w2.dx], [w1.dy, w2.dy]])
    g = np.array([[E.v, F.v], [F.v, G.v]])
    dg = np.array([[[E.dx, F.dx], [F.dx, G.dx]], [[E.dy, F.dy], [F.dy, G.dy]]])  # dg[l] = d g / d u^l
    ginv = np.linalg.inv(g)
    # Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    lower = np.zeros((2, 2, 2))  # lower[l, i, j]
    for l in range(2):
        for i in range(2):
            for jj in range(2):
                lower[l, i, jj] = 0.5 * (dg[i][jj, l] + dg[jj][i, l] - dg[l][i, jj])
    gamma = np.einsum("kl,lij->kij", ginv, lower)
    return FrameDerivatives(c, w, dc, dw, gamma)


# --------------------------------------------------------------------------
# scalar fields and finite-difference directional derivatives


def _frame_field(attr: str) -> Callable[[SurfaceDef, float, float], float]:
    def f(s: SurfaceDef, x: float, y: float) -> float:
        return float(getattr(cnnd_frame(s, x, y), attr))

    return f


def _report_field(attr: str) -> Callable[[SurfaceDef, float, float], float]:
    def f(s: SurfaceDef, x: float, y: float) -> float:
        return float(getattr(geometry_report(s, x, y), attr))

    return f


SCALAR_FIELDS: dict[str, Callable[[SurfaceDef, float, float], float]] = {
    "x": lambda s, x, y: float(x),
    "y": lambda s, x, y: float(y),
    "a": _frame_field("a"),
    "b": _frame_field("b"),
    "betaZ": _frame_field("betaZ"),
    "betaW": _frame_field("betaW"),
    "alpha_ztop": _frame_field("alpha_ztop"),
    "K": _report_field("K"),
    "KN": _report_field("KN"),
    "H2": _report_field("H2"),
    "zperp_norm2": zperp_norm2,
}


def directional_derivative(s: SurfaceDef, field, x: float, y: float, u, h: float = FD_STEP) -> float:
    """Central difference of a scalar field along the coordinate vector u.

    ``field`` is a key of :data:`SCALAR_FIELDS` or a callable ``(s, x, y) -> float``.
    """
    f = SCALAR_FIELDS[field] if isinstance(field, str) else field
    u = np.asarray(u, dtype=float)
    plus = f(s, x + h * u[0], y + h * u[1])
    minus = f(s, x - h * u[0], y - h * u[1])
    return (plus - minus) / (2.0 * h)
