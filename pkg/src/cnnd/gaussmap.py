"""The Gauss map into the Grassmannian of spacelike planes and what it induces.

dG is always computed from the normalized psi_x ^ psi_y field, never from the
frame, so that the frame-based closed forms remain independent checks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AZero, BetaResidual, DegenerateFormula, DegenerateZperp, NotCnnd
from .geometry import GeometryReport, _Local, cnnd_frame
from .jets import Jet2
from .lorentz import BIVECTOR_PAIRS, BIVECTOR_WEIGHTS, h_form, mink_dot, wedge, wedge4
from .surface import SurfaceDef

TOL_A = 1e-8


def _tangent_sign(s: SurfaceDef, x: float, y: float) -> float:
    try:
        return cnnd_frame(s, x, y).tangent_sign
    except (NotCnnd, DegenerateZperp, BetaResidual):
        return 1.0


def _unit_plane(s: SurfaceDef, x: float, y: float):
    """Normalized psi_x ^ psi_y as six first-order jets."""
    _Local(s, x, y)  # spacelike check
    j = s.jets(x, y)
    px = [Jet2.first_order(j.px[i], j.pxx[i], j.pxy[i]) for i in range(4)]
    py = [Jet2.first_order(j.py[i], j.pxy[i], j.pyy[i]) for i in range(4)]
    N = [px[i] * py[k] - px[k] * py[i] for i, k in BIVECTOR_PAIRS]
    n2 = sum((w * c * c for w, c in zip(BIVECTOR_WEIGHTS, N)), Jet2.const(0.0))
    inv = n2 ** (-0.5)
    return [c * inv for c in N]


def gauss_map(s: SurfaceDef, x: float, y: float, sign: float | None = None) -> np.ndarray:
    """G = u1 ^ u2 for an oriented orthonormal tangent basis.

    The orientation is that of (Z_top, W) where the point is CNND, otherwise
    that of (psi_x, psi_y); ``sign`` overrides it.
    """
    if sign is None:
        sign = _tangent_sign(s, x, y)
    return sign * np.array([c.v for c in _unit_plane(s, x, y)])


def dgauss(s: SurfaceDef, x: float, y: float, u, sign: float | None = None) -> np.ndarray:
    """dG(u) for u in coordinate components."""
    if sign is None:
        sign = _tangent_sign(s, x, y)
    G = _unit_plane(s, x, y)
    return sign * np.array([c.dx * u[0] + c.dy * u[1] for c in G])


def _dg_frame(rep: GeometryReport, s: SurfaceDef) -> tuple[np.ndarray, np.ndarray]:
    x, y = rep.point
    f = rep.frame
    return dgauss(s, x, y, f.ztop_coords, f.tangent_sign), dgauss(s, x, y, f.w_coords, f.tangent_sign)


def gstar_h(s: SurfaceDef, x: float, y: float, u, v) -> complex:
    sign = _tangent_sign(s, x, y)
    return h_form(dgauss(s, x, y, u, sign), dgauss(s, x, y, v, sign))


def gstar_h_matrix(s: SurfaceDef, x: float, y: float) -> np.ndarray:
    """G*H in the basis (Z_top, W) as a complex symmetric 2x2 matrix."""
    f = cnnd_frame(s, x, y)
    dz = dgauss(s, x, y, f.ztop_coords, f.tangent_sign)
    dw = dgauss(s, x, y, f.w_coords, f.tangent_sign)
    h12 = h_form(dz, dw)
    return np.array([[h_form(dz, dz), h12], [h12, h_form(dw, dw)]])


def gstar_h_discriminant(s: SurfaceDef, x: float, y: float, tol: float = TOL_A) -> complex:
    f = cnnd_frame(s, x, y)
    if abs(f.a) <= tol:
        raise AZero(f"a = {f.a!r} vanishes at ({x!r}, {y!r})")
    m = gstar_h_matrix(s, x, y)
    return complex(-(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]))


def delta_form(s: SurfaceDef, x: float, y: float, u) -> float:
    d = dgauss(s, x, y, u)
    return wedge4(d, d)


def mixed_wedge(s: SurfaceDef, x: float, y: float) -> float:
    """dG(Z_top) ^ dG(W)."""
    f = cnnd_frame(s, x, y)
    dz = dgauss(s, x, y, f.ztop_coords, f.tangent_sign)
    dw = dgauss(s, x, y, f.w_coords, f.tangent_sign)
    return wedge4(dz, dw)


def delta_invariant(s: SurfaceDef, x: float, y: float) -> float:
    f = cnnd_frame(s, x, y)
    dz = dgauss(s, x, y, f.ztop_coords, f.tangent_sign)
    dw = dgauss(s, x, y, f.w_coords, f.tangent_sign)
    m = wedge4(dz, dw)
    return m * m - wedge4(dz, dz) * wedge4(dw, dw)


# --------------------------------------------------------------------------
# adapted frame


@dataclass(frozen=True)
class AdaptedBasis:
    e: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    E1: np.ndarray
    E2: np.ndarray
    E3: np.ndarray

    def coords(self, eta) -> np.ndarray:
        """Complex coordinates z_k = H(eta, E_k)."""
        return np.array([h_form(eta, E) for E in (self.E1, self.E2, self.E3)])

    def gram(self) -> np.ndarray:
        Es = (self.E1, self.E2, self.E3)
        return np.array([[h_form(p, q) for q in Es] for p in Es])


def adapted_basis(rep: GeometryReport, tol: float = TOL_A) -> AdaptedBasis:
    f = rep.frame
    a, b = f.a, f.b
    if abs(a) <= tol:
        raise AZero(f"the adapted frame needs a != 0, got a = {a!r}")
    Bww = rep.sf(f.w_coords, f.w_coords)
    r = math.sqrt(2.0) * a
    e1, e2 = f.Ztop, f.W
    e3 = ((a - b) * f.Zperp + Bww) / r
    e4 = ((a + b) * f.Zperp - Bww) / r
    return AdaptedBasis((e1, e2, e3, e4), wedge(e1, e2), wedge(e2, e3), wedge(e3, e1))


CANONICAL_E = (wedge(np.eye(4)[0], np.eye(4)[1]), wedge(np.eye(4)[1], np.eye(4)[2]), wedge(np.eye(4)[2], np.eye(4)[0]))


def canonical_coords(eta) -> np.ndarray:
    """Coordinates of eta in the basis e1^e2, e2^e3, e3^e1 of the canonical frame."""
    return np.array([h_form(eta, E) for E in CANONICAL_E])


def dgauss_closed_form(rep: GeometryReport) -> tuple[np.ndarray, np.ndarray]:
    """Adapted-basis coordinates of dG(Z_top) and dG(W) from K, KN, a, b."""
    f = rep.frame
    a, b, K, KN = f.a, f.b, rep.K, rep.KN
    r = math.sqrt(2.0) * a
    dz = np.array([0.0, -(K + 1j * KN) / r, (KN - 1j * K) / r])
    dw = np.array([0.0, (KN - 1j * a * (a - b)) / r, -(a * (a + b) - 1j * KN) / r])
    return dz, dw


# --------------------------------------------------------------------------
# distinguished directions


class DirectionKind(enum.Enum):
    TWO_DISTINCT = "TwoDistinct"
    DOUBLE = "Double"
    ALL = "All"


def normalize_direction(d) -> np.ndarray:
    """Unit Euclidean length, first nonzero coordinate positive."""
    d = np.asarray(d, dtype=float)
    n = float(np.linalg.norm(d))
    if n == 0.0:
        raise DegenerateFormula("zero direction vector")
    d = d / n
    for c in d:
        if abs(c) > 1e-15:
            return d if c > 0 else -d
    return d


@dataclass(frozen=True)
class DirectionSet:
    kind: DirectionKind
    directions: tuple[np.ndarray, ...]  # (Z_top, W) components
    note: str = ""

    def tangent_coords(self, rep: GeometryReport) -> list[np.ndarray]:
        return [rep.frame.tangent(d[0], d[1]) for d in self.directions]


def asymptotic_directions(rep: GeometryReport, tol: float = TOL_A) -> DirectionSet:
    a, K, KN = rep.frame.a, rep.K, rep.KN
    if abs(a) <= tol:
        return DirectionSet(DirectionKind.ALL, ())
    if abs(K) > tol:
        return DirectionSet(
            DirectionKind.TWO_DISTINCT,
            (normalize_direction([1.0, 0.0]), normalize_direction([KN / K, 1.0])),
        )
    if abs(KN) > tol:
        return DirectionSet(DirectionKind.DOUBLE, (normalize_direction([1.0, 0.0]),))
    # delta = 2 u2 (u1 K - u2 KN) vanishes identically here.
    return DirectionSet(DirectionKind.ALL, (), note="K = KN = 0 with a != 0: delta vanishes identically")


def mean_curvature_directions(rep: GeometryReport, tol: float = TOL_A) -> DirectionSet:
    a, K, KN = rep.frame.a, rep.K, rep.KN
    if abs(a) <= tol:
        return DirectionSet(DirectionKind.ALL, ())
    if abs(K) <= tol and abs(KN) <= tol:
        raise DegenerateFormula(f"K = {K!r} and KN = {KN!r} both vanish while a = {a!r}")
    if abs(K) <= tol:
        # K (u2^2 - u1^2)/2 + KN u1 u2 = 0 reduces to u1 u2 = 0.
        return DirectionSet(
            DirectionKind.TWO_DISTINCT,
            (normalize_direction([1.0, 0.0]), normalize_direction([0.0, 1.0])),
            note="K = 0: reduced equation u1 u2 KN = 0",
        )
    r = math.hypot(K, KN)
    return DirectionSet(
        DirectionKind.TWO_DISTINCT,
        (normalize_direction([K, -KN + r]), normalize_direction([K, -KN - r])),
    )


def normal_components(rep: GeometryReport, v) -> tuple[float, float]:
    """Components of a normal vector in the orthonormal basis ((Zp+W')/sqrt2, (Zp-W')/sqrt2)."""
    n1, n2 = rep.frame.normal_basis
    return mink_dot(v, n1), -mink_dot(v, n2)


def mixed_product(rep: GeometryReport, v1, v2) -> float:
    p1, q1 = normal_components(rep, v1)
    p2, q2 = normal_components(rep, v2)
    return p1 * q2 - q1 * p2


def second_form_along(rep: GeometryReport, d) -> np.ndarray:
    """B(u, u) for u = d[0] Z_top + d[1] W."""
    u = rep.frame.tangent(d[0], d[1])
    return rep.sf(u, u)


def delta_along(rep: GeometryReport, s: SurfaceDef, d) -> float:
    x, y = rep.point
    dg = dgauss(s, x, y, rep.frame.tangent(d[0], d[1]), rep.frame.tangent_sign)
    return wedge4(dg, dg)


# --------------------------------------------------------------------------
# curvature ellipse


@dataclass(frozen=True)
class EllipseSample:
    theta: float
    x: float  # Zperp coordinate
    y: float  # Wprime coordinate
    B: np.ndarray  # B(u, u) for u = cos(theta) Z_top + sin(theta) W


@dataclass(frozen=True)
class EllipseData:
    center: tuple[float, float]
    coeff_cos: tuple[float, float]
    coeff_sin: tuple[float, float]
    degenerate: bool
    halflength: float
    samples: tuple[EllipseSample, ...]

    def at(self, theta: float) -> tuple[float, float]:
        c, s = math.cos(2.0 * theta), math.sin(2.0 * theta)
        return (
            self.center[0] + c * self.coeff_cos[0] + s * self.coeff_sin[0],
            self.center[1] + c * self.coeff_cos[1] + s * self.coeff_sin[1],
        )

    def csv_rows(self) -> list[list[float]]:
        return [[p.theta, p.x, p.y, *map(float, p.B)] for p in self.samples]


ELLIPSE_CSV_HEADER = ["theta", "x_Zperp", "y_Wprime", "B1", "B2", "B3", "B4"]


def curvature_ellipse(rep: GeometryReport, nsamples: int = 64, tol: float = TOL_A) -> EllipseData:
    if nsamples < 1:
        raise ValueError("nsamples must be positive")
    f = rep.frame
    a, K, KN, H2 = f.a, rep.K, rep.KN, rep.H2
    samples = []
    for k in range(nsamples):
        th = 2.0 * math.pi * k / nsamples
        B = second_form_along(rep, (math.cos(th), math.sin(th)))
        samples.append((th, B))
    hx, hy = f.null_coords(rep.Hvec)
    if abs(a) <= tol:
        hs = mink_dot(rep.Hstar, f.Wprime)
        h = max(hs, -hs, f.betaW, -f.betaW)
        pts = tuple(EllipseSample(th, *f.null_coords(B), B) for th, B in samples)
        return EllipseData((hx, hy), (0.0, 0.0), (0.0, 0.0), True, h, pts)
    center = (H2 / a, a / 2.0)
    ccos = ((K - H2) / a, -a / 2.0)
    csin = (-KN / a, 0.0)
    data = EllipseData(center, ccos, csin, False, 0.0, ())
    pts = tuple(EllipseSample(th, *data.at(th), B) for th, B in samples)
    return EllipseData(center, ccos, csin, False, 0.0, pts)


def ellipse_sample_error(rep: GeometryReport, data: EllipseData) -> float:
    """Largest gap between a parametrized point and the coordinates of B(u, u)."""
    err = 0.0
    for p in data.samples:
        bx, by = rep.frame.null_coords(p.B)
        err = max(err, abs(bx - p.x), abs(by - p.y))
    return err


def ellipse_implicit_residual(rep: GeometryReport, point) -> float:
    """Residual of x^2/(2||H|^2-K|) + y^2/(KN^2/a^2) = 1 at a normal point.

    ``point`` is given by (Zperp, Wprime) coordinates.  Writing P - H as
    s H* + t Zperp, the coordinates are x = s |H*| and y = t.
    """
    f = rep.frame
    P = point[0] * f.Zperp + point[1] * f.Wprime
    D = P - rep.Hvec
    hz = mink_dot(rep.Hstar, f.Zperp)  # = -a/2, never zero here
    s = mink_dot(D, f.Zperp) / hz
    t = mink_dot(D - s * rep.Hstar, f.Wprime)
    bw2 = (rep.KN / f.a) ** 2
    if bw2 > 1e-12:
        return s * s + t * t / bw2 - 1.0
    return bw2 * (s * s - 1.0) + t * t
