"""Pointwise identity checks over a set of sample points.

Each check produces a residual; a check passes when the residual, divided by
max(1, size of the quantities compared), is at most ``tol``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import gaussmap as gm
from .errors import DegenerateFormula, DegenerateZperp
from .geometry import (
    GeometryReport,
    _Local,
    _frame,
    _report,
    directional_derivative,
    frame_derivatives,
    shape_operator,
)
from .lorentz import TOL_NULL, TOL_ZERO, h_form, mink_dot, wedge, wedge4
from .surface import SurfaceDef

GEOMETRY_IDS = (
    "dp_shape",
    "dp_alpha_ztop",
    "lc_ztop_ztop",
    "lc_w_ztop",
    "lc_ztop_w",
    "lc_w_w",
    "gaussc",
    "k_dalpha",
    "gauss_beta",
    "normal",
    "kn_dbeta",
    "rel",
    "minima",
    "relation",
    "hstar",
    "hstar_metric",
)

GAUSS_IDS = (
    "grass",
    "g_frame",
    "dg_ztop",
    "dg_w",
    "disc_zz",
    "disc_ww",
    "disc_zw",
    "discriminant",
    "delta_inv",
    "mixed_wedge",
    "delta_ztop",
    "delta_w",
    "asym_dirs",
    "mean_dirs",
    "adapted_gram",
    "diff2_ztop",
    "diff2_w",
    "ellipse_points",
    "ellipse_implicit",
)

A_GATE = 1e-6


@dataclass(frozen=True)
class CheckResult:
    point: tuple[float, float]
    identity: str
    residual: float
    passed: bool


@dataclass
class BatteryReport:
    tol: float
    results: list[CheckResult] = field(default_factory=list)
    skipped: list[tuple[tuple[float, float], str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def max_residual(self, identity: str | None = None) -> float:
        vals = [r.residual for r in self.results if identity is None or r.identity == identity]
        return max(vals, default=0.0)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def add(self, point, identity: str, residual: float, scale: float = 1.0) -> None:
        r = abs(float(residual)) / max(1.0, abs(float(scale)))
        self.results.append(CheckResult(point, identity, r, bool(r <= self.tol)))

    def skip(self, point, identity: str, reason: str) -> None:
        self.skipped.append((point, identity, reason))

    def extend(self, other: BatteryReport) -> None:
        self.results.extend(other.results)
        self.skipped.extend(other.skipped)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            x, y = r.point
            out.append(f"({x!r}, {y!r}) {r.identity} {r.residual!r} {'pass' if r.passed else 'FAIL'}")
        for (x, y), ident, reason in self.skipped:
            out.append(f"({x!r}, {y!r}) {ident} skipped: {reason}")
        return out

    CSV_HEADER = ("x", "y", "identity", "residual", "status")

    def csv_rows(self) -> list[list]:
        rows: list[list] = [[r.point[0], r.point[1], r.identity, r.residual, "pass" if r.passed else "fail"] for r in self.results]
        rows += [[p[0], p[1], ident, "", "skipped"] for p, ident, _ in self.skipped]
        return rows


def _scale(*vals) -> float:
    out = 0.0
    for v in vals:
        out = max(out, float(np.max(np.abs(np.asarray(v, dtype=complex)))))
    return out


def _prepare(s: SurfaceDef, x: float, y: float, report: BatteryReport, tol_null: float):
    """Geometry at one point, or None when Z_perp vanishes there."""
    loc = _Local(s, x, y)
    try:
        frame = _frame(loc, tol_null, TOL_ZERO)
    except DegenerateZperp as exc:
        report.skip((float(x), float(y)), "*", str(exc))
        return None
    return loc, _report(loc, frame)


def _geometry_checks(s: SurfaceDef, loc: _Local, rep: GeometryReport, out: BatteryReport, h: float) -> None:
    f = rep.frame
    pt = rep.point
    x, y = pt
    c, w = f.ztop_coords, f.w_coords
    a, K, KN = f.a, rep.K, rep.KN

    A = shape_operator(rep.ff, rep.sf, f.Zperp, c)
    out.add(pt, "dp_shape", np.linalg.norm(loc.ambient(A)))
    out.add(pt, "dp_alpha_ztop", f.alpha_ztop)

    fd = frame_derivatives(s, x, y, f.tangent_sign)
    nzz, nwz = fd.covariant(c, "ztop"), fd.covariant(w, "ztop")
    nzw, nww = fd.covariant(c, "w"), fd.covariant(w, "w")
    amb = loc.ambient
    out.add(pt, "lc_ztop_ztop", np.linalg.norm(amb(nzz)))
    out.add(pt, "lc_w_ztop", np.linalg.norm(amb(nwz) - a * f.W), a)
    out.add(pt, "lc_ztop_w", np.linalg.norm(amb(nzw)))
    out.add(pt, "lc_w_w", np.linalg.norm(amb(nww) + a * f.Ztop), a)

    def d(field_name: str, u) -> float:
        return directional_derivative(s, field_name, x, y, u, h)

    za = d("a", c)
    out.add(pt, "gaussc", K + za + a * a, _scale(K, za, a * a))

    # Bracket [Z_top, W] in the frame, from the torsion-free connection.
    bracket = amb(nzw - nwz)
    b1, b2 = mink_dot(bracket, f.Ztop), mink_dot(bracket, f.W)
    w_alpha_z = d("alpha_ztop", w)
    dalpha = za - w_alpha_z - (b1 * f.alpha_ztop + b2 * a)
    out.add(pt, "k_dalpha", K + dalpha, _scale(K, dalpha))

    out.add(pt, "gauss_beta", K - a * f.betaZ, _scale(K, a * f.betaZ))
    out.add(pt, "normal", KN + a * f.betaW, _scale(KN, a * f.betaW))

    zbw, wbz = d("betaW", c), d("betaZ", w)
    dbeta = zbw - wbz - (b1 * f.betaZ + b2 * f.betaW)
    out.add(pt, "kn_dbeta", KN - dbeta, _scale(KN, dbeta))
    out.add(pt, "rel", zbw - wbz + 2.0 * a * f.betaW, _scale(zbw, wbz, a * f.betaW))

    out.add(pt, "minima", mink_dot(rep.Hvec, f.Zperp) - a / 2.0, a)
    Bww = rep.sf(w, w)
    bww2 = mink_dot(Bww, Bww)
    out.add(pt, "relation", 4.0 * rep.H2 - 2.0 * K - bww2, _scale(rep.H2, K, bww2))
    hs2 = mink_dot(rep.Hstar, rep.Hstar)
    out.add(pt, "hstar", hs2 - 2.0 * (rep.H2 - K), _scale(hs2, rep.H2, K))
    # B(Z_top, .) only has Z_perp components, so |H*|^2 comes out as |H|^2 - K.
    out.add(pt, "hstar_metric", hs2 - (rep.H2 - K), _scale(hs2, rep.H2, K))


def _gauss_checks(s: SurfaceDef, rep: GeometryReport, out: BatteryReport, nsamples: int) -> None:
    f = rep.frame
    pt = rep.point
    x, y = pt
    a, b, K, KN, H2 = f.a, f.b, rep.K, rep.KN, rep.H2
    sign = f.tangent_sign

    G = gm.gauss_map(s, x, y, sign)
    out.add(pt, "grass", abs(h_form(G, G) - 1.0))
    out.add(pt, "g_frame", np.max(np.abs(G - wedge(f.Ztop, f.W))))

    dz = gm.dgauss(s, x, y, f.ztop_coords, sign)
    dw = gm.dgauss(s, x, y, f.w_coords, sign)
    Bww = rep.sf(f.w_coords, f.w_coords)
    rz = f.betaZ * wedge(f.Zperp, f.W) + f.betaW * wedge(f.Ztop, f.Zperp)
    rw = f.betaW * wedge(f.Zperp, f.W) + wedge(f.Ztop, Bww)
    out.add(pt, "dg_ztop", np.max(np.abs(dz - rz)), _scale(rz))
    out.add(pt, "dg_w", np.max(np.abs(dw - rw)), _scale(rw))

    hzz, hww, hzw = h_form(dz, dz), h_form(dw, dw), h_form(dz, dw)
    eww = 2.0 * (2.0 * H2 - K) - 2j * KN
    ezw = -KN + 1j * K
    out.add(pt, "disc_zz", abs(hzz))
    out.add(pt, "disc_ww", abs(hww - eww), _scale(eww))
    out.add(pt, "disc_zw", abs(hzw - ezw), _scale(ezw))
    if abs(a) > A_GATE:
        disc = -(hzz * hww - hzw * hzw)
        target = -((K + 1j * KN) ** 2)
        out.add(pt, "discriminant", abs(disc - target), _scale(target))
    else:
        out.skip(pt, "discriminant", f"|a| = {abs(a)!r} <= {A_GATE!r}")

    m = wedge4(dz, dw)
    dlt_z, dlt_w = wedge4(dz, dz), wedge4(dw, dw)
    out.add(pt, "delta_inv", m * m - dlt_z * dlt_w - K * K, _scale(K * K, m * m))
    out.add(pt, "mixed_wedge", m - K, _scale(K))
    out.add(pt, "delta_ztop", dlt_z)
    out.add(pt, "delta_w", dlt_w + 2.0 * KN, _scale(KN))

    asym = gm.asymptotic_directions(rep, gm.TOL_A)
    res = max((abs(gm.delta_along(rep, s, dvec)) for dvec in asym.directions), default=0.0)
    out.add(pt, "asym_dirs", res)
    try:
        mean = gm.mean_curvature_directions(rep, gm.TOL_A)
    except DegenerateFormula as exc:
        out.skip(pt, "mean_dirs", str(exc))
    else:
        res = max(
            (abs(gm.mixed_product(rep, rep.Hvec, gm.second_form_along(rep, dvec))) for dvec in mean.directions),
            default=0.0,
        )
        out.add(pt, "mean_dirs", res)

    if abs(a) > A_GATE:
        basis = gm.adapted_basis(rep)
        out.add(pt, "adapted_gram", np.max(np.abs(basis.gram() - np.eye(3))))
        cz, cw = gm.dgauss_closed_form(rep)
        out.add(pt, "diff2_ztop", np.max(np.abs(basis.coords(dz) - cz)), _scale(cz))
        out.add(pt, "diff2_w", np.max(np.abs(basis.coords(dw) - cw)), _scale(cw))
    else:
        for ident in ("adapted_gram", "diff2_ztop", "diff2_w"):
            out.skip(pt, ident, f"|a| = {abs(a)!r} <= {A_GATE!r}")

    ell = gm.curvature_ellipse(rep, nsamples)
    if not ell.degenerate:
        out.add(pt, "ellipse_points", gm.ellipse_sample_error(rep, ell), _scale(ell.center, ell.coeff_cos, ell.coeff_sin))
        if abs(H2 - K) > A_GATE:
            res = max(abs(gm.ellipse_implicit_residual(rep, (p.x, p.y))) for p in ell.samples)
            out.add(pt, "ellipse_implicit", res)
        else:
            out.skip(pt, "ellipse_implicit", "|H|^2 = K")
    else:
        # The segment lies on the line through H spanned by Z_perp.
        hx, hy = f.null_coords(rep.Hvec)
        res = max(abs(p.y - hy) for p in ell.samples)
        out.add(pt, "ellipse_points", res, _scale(hy))
        out.skip(pt, "ellipse_implicit", "degenerate ellipse (a = 0)")


def _run(
    s: SurfaceDef,
    points: Iterable[tuple[float, float]],
    tol: float,
    checks: Callable[[SurfaceDef, _Local, GeometryReport, BatteryReport], None],
    tol_null: float,
) -> BatteryReport:
    if tol <= 0:
        raise ValueError("tol must be positive")
    report = BatteryReport(tol)
    for x, y in points:
        prepared = _prepare(s, float(x), float(y), report, tol_null)
        if prepared is None:
            continue
        loc, rep = prepared
        checks(s, loc, rep, report)
    return report


def identity_battery(
    s: SurfaceDef,
    points: Iterable[tuple[float, float]],
    tol: float = 1e-6,
    h: float = 1e-4,
    tol_null: float = TOL_NULL,
) -> BatteryReport:
    """The pointwise identities of a surface with a canonical normal null direction.

    Raises NotCnnd (carrying the point) as soon as a sample point or one of
    its finite-difference neighbours fails the CNND condition.  Points where
    Z_perp vanishes are listed as skipped.
    """
    return _run(s, points, tol, lambda s_, loc, rep, out: _geometry_checks(s_, loc, rep, out, h), tol_null)


def gauss_battery(
    s: SurfaceDef,
    points: Iterable[tuple[float, float]],
    tol: float = 1e-6,
    nsamples: int = 64,
    tol_null: float = TOL_NULL,
) -> BatteryReport:
    """Checks on the Gauss map, G*H, delta, the distinguished directions and the ellipse."""
    return _run(s, points, tol, lambda s_, loc, rep, out: _gauss_checks(s_, rep, out, nsamples), tol_null)


def grid(xr: tuple[float, float], yr: tuple[float, float], nx: int, ny: int) -> list[tuple[float, float]]:
    """Row-major grid of sample points (y outer, x inner)."""
    if nx < 1 or ny < 1:
        raise ValueError("grid counts must be at least 1")
    xs = [xr[0]] if nx == 1 else list(np.linspace(xr[0], xr[1], nx))
    ys = [yr[0]] if ny == 1 else list(np.linspace(yr[0], yr[1], ny))
    return [(float(x), float(y)) for y in ys for x in xs]


__all__ = [
    "BatteryReport",
    "CheckResult",
    "GAUSS_IDS",
    "GEOMETRY_IDS",
    "gauss_battery",
    "grid",
    "identity_battery",
]
