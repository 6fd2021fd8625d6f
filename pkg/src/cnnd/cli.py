"""Command line front end.

    cnnd analyze|verify|ellipse|gauss|pde-check|pde-solve --config PATH [--set k=v]... [--out DIR]

Exit status: 0 on success, 1 when a verification fails or the solver does not
converge, 2 on configuration or expression errors.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import gaussmap as gm
from .battery import BatteryReport, gauss_battery, grid, identity_battery
from .config import RunConfig, load, parse_floats
from .constructions import pde_residual
from .errors import (
    AZero,
    BetaResidual,
    CnndError,
    ConfigError,
    DegenerateZperp,
    Diverged,
    DomainError,
    ExprSyntaxError,
    NotCnnd,
    NotSpacelike,
    SingularJacobian,
    UnknownIdentifier,
)
from .expr import parse
from .geometry import fundamental_forms, geometry_report, zperp_norm2
from .pde import GraphPDEProblem, boundary_from_expr, pde_solve

TASKS = ("analyze", "verify", "ellipse", "gauss", "pde-check", "pde-solve")


class Failure(Exception):
    """The task ran but its outcome is a failure (exit status 1)."""


def fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))  # shortest round-trip decimal


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def _points(cfg: RunConfig) -> list[tuple[float, float]]:
    d = cfg.domain
    return grid(d.x, d.y, d.nx, d.ny)


def _point(cfg: RunConfig) -> tuple[float, float]:
    if cfg.domain.point is None:
        raise ConfigError("this task needs a sample point", "[domain] point")
    return cfg.domain.point


# --------------------------------------------------------------------------
# tasks

ANALYZE_HEADER = (
    "x", "y", "status", "E", "F", "G", "zperp_norm2", "K", "KN",
    "H1", "H2", "H3", "H4", "H_norm2", "a", "b", "betaZ", "betaW",
)  # fmt: skip


def task_analyze(cfg: RunConfig, out) -> None:
    s = cfg.surface
    rows = []
    bad = 0
    nan = math.nan
    for x, y in _points(cfg):
        row = [x, y]
        try:
            ff, _ = fundamental_forms(s, x, y)
            q = zperp_norm2(s, x, y)
        except NotSpacelike:
            rows.append(row + ["NotSpacelike"] + [nan] * 15)
            bad += 1
            continue
        except DomainError:
            rows.append(row + ["DomainError"] + [nan] * 15)
            bad += 1
            continue
        base = [ff.E, ff.F, ff.G, q]
        try:
            rep = geometry_report(s, x, y)
        except (NotCnnd, DegenerateZperp, BetaResidual) as exc:
            rows.append(row + [type(exc).__name__] + base + [nan] * 11)
            bad += 1
            continue
        f = rep.frame
        rows.append(row + ["CNND"] + base + [rep.K, rep.KN, *rep.Hvec, rep.H2, f.a, f.b, f.betaZ, f.betaW])
    write_csv(cfg.out_dir / "analyze.csv", ANALYZE_HEADER, rows)
    for r in rows:
        print(f"({fmt(r[0])}, {fmt(r[1])}) {r[2]} zperp_norm2={fmt(r[6])}", file=out)
    print(f"{len(rows) - bad} of {len(rows)} points are CNND", file=out)
    if bad:
        raise Failure(f"{bad} sample point(s) are not CNND")


def task_verify(cfg: RunConfig, out) -> None:
    pts = _points(cfg)
    tol = cfg.task_float("tol", 1e-6)
    try:
        report = identity_battery(cfg.surface, pts, tol, h=cfg.task_float("h", 1e-4))
        report.extend(gauss_battery(cfg.surface, pts, tol, cfg.task_int("nsamples", 64)))
    except NotCnnd as exc:
        raise Failure(f"not CNND at {exc.point}: {exc}") from None
    except BetaResidual as exc:
        raise Failure(str(exc)) from None
    write_csv(cfg.out_dir / "verify.csv", BatteryReport.CSV_HEADER, report.csv_rows())
    for line in report.lines():
        print(line, file=out)
    fails = report.failures()
    print(f"{len(report.results) - len(fails)} of {len(report.results)} checks passed, {len(report.skipped)} skipped", file=out)
    if fails:
        raise Failure(f"{len(fails)} identity check(s) exceed tol {tol!r}")


def task_ellipse(cfg: RunConfig, out) -> None:
    x, y = _point(cfg)
    rep = geometry_report(cfg.surface, x, y)
    data = gm.curvature_ellipse(rep, cfg.task_int("nsamples", 64))
    write_csv(cfg.out_dir / "ellipse.csv", gm.ELLIPSE_CSV_HEADER, data.csv_rows())
    print(f"point ({fmt(x)}, {fmt(y)}) a={fmt(rep.frame.a)} K={fmt(rep.K)} KN={fmt(rep.KN)} H2={fmt(rep.H2)}", file=out)
    if data.degenerate:
        print(f"degenerate segment through H along Z_perp, h={fmt(data.halflength)}", file=out)
    else:
        print(f"center={tuple(map(fmt, data.center))} cos2={tuple(map(fmt, data.coeff_cos))} sin2={tuple(map(fmt, data.coeff_sin))}", file=out)
        err = gm.ellipse_sample_error(rep, data)
        print(f"max gap to B(u,u): {fmt(err)}", file=out)
        if err > cfg.task_float("tol", 1e-6):
            raise Failure("ellipse samples do not match B(u,u)")


def task_gauss(cfg: RunConfig, out) -> None:
    x, y = _point(cfg)
    tol = cfg.task_float("tol", 1e-9)
    s = cfg.surface
    G = gm.gauss_map(s, x, y)
    rows: list[list] = [[f"G_{lbl}", v, 0.0] for lbl, v in zip(("e12", "e13", "e14", "e23", "e24", "e34"), G)]
    z = gm.canonical_coords(G)
    rows += [[f"z{k + 1}", c.real, c.imag] for k, c in enumerate(z)]
    sphere = complex(np.sum(z * z))
    rows.append(["z_sum_sq", sphere.real, sphere.imag])
    try:
        rep = geometry_report(s, x, y)
        basis = gm.adapted_basis(rep)
    except (NotCnnd, DegenerateZperp, BetaResidual, AZero) as exc:
        print(f"adapted basis unavailable: {exc}", file=out)
    else:
        w = basis.coords(G)
        rows += [[f"adapted_z{k + 1}", c.real, c.imag] for k, c in enumerate(w)]
    write_csv(cfg.out_dir / "gauss.csv", ("quantity", "re", "im"), rows)
    for r in rows:
        print(f"{r[0]} {fmt(r[1])} {fmt(r[2])}", file=out)
    if abs(sphere - 1.0) > tol:
        raise Failure(f"z1^2 + z2^2 + z3^2 = {sphere!r} is not 1")


def _fg(cfg: RunConfig):
    if cfg.graph_fg is None:
        raise ConfigError("this task needs a graph surface (kind graph, family1 or family2)", "[surface] kind")
    return cfg.graph_fg


def task_pde_check(cfg: RunConfig, out) -> None:
    f, g = _fg(cfg)
    tol = cfg.task_float("tol", 1e-9)
    rows = [[x, y, pde_residual(f, g, x, y)] for x, y in _points(cfg)]
    write_csv(cfg.out_dir / "pde_check.csv", ("x", "y", "residual"), rows)
    worst = max(abs(r[2]) for r in rows)
    print(f"max |residual| = {fmt(worst)} over {len(rows)} points", file=out)
    if worst > tol:
        raise Failure(f"graph equation residual {worst!r} exceeds tol {tol!r}")


def _task_expr(cfg: RunConfig, key: str):
    try:
        return parse(cfg.task[key])
    except (ExprSyntaxError, UnknownIdentifier) as exc:
        raise ConfigError(str(exc), f"[task] {key}") from None


def task_pde_solve(cfg: RunConfig, out) -> None:
    f, g_given = cfg.graph_fg if cfg.graph_fg is not None else (None, None)
    if "f" in cfg.task:
        f = _task_expr(cfg, "f")
    if f is None:
        raise ConfigError("pde-solve needs f from a graph surface or [task] f", "[task] f")
    d = cfg.domain
    ys = np.linspace(d.y[0], d.y[1], d.ny)
    if "boundary" in cfg.task:
        boundary = parse_floats(cfg.task["boundary"], d.ny, "[task] boundary")
    elif "boundary_g" in cfg.task:
        boundary = boundary_from_expr(_task_expr(cfg, "boundary_g"), d.x[0], ys)
    elif g_given is not None:
        boundary = boundary_from_expr(g_given, d.x[0], ys)
    else:
        raise ConfigError("pde-solve needs boundary values or boundary_g", "[task] boundary")
    try:
        prob = GraphPDEProblem(
            f,
            d.x,
            d.y,
            d.nx,
            d.ny,
            tuple(boundary),
            max_iter=cfg.task_int("max_iter", 50),
            damping=cfg.task_float("damping", 1.0),
            tol_resid=cfg.task_float("tol_resid", 1e-10),
            initial=cfg.task.get("initial", "constant"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), "[task]") from None
    try:
        sol = pde_solve(prob)
    except (Diverged, SingularJacobian) as exc:
        raise Failure(f"{type(exc).__name__}: {exc}") from None
    write_csv(cfg.out_dir / "pde_solve.csv", sol.CSV_HEADER, sol.csv_rows())
    log = cfg.out_dir / "pde_solve.log"
    with log.open("w") as fh:
        for k, r in enumerate(sol.history):
            fh.write(f"iteration {k} max_residual {fmt(r)}\n")
        fh.write(f"converged {fmt(sol.converged)} iterations {sol.iterations} max_residual {fmt(sol.max_residual)}\n")
    print(f"converged={fmt(sol.converged)} iterations={sol.iterations} max_residual={fmt(sol.max_residual)}", file=out)
    if not sol.converged:
        raise Failure("solver did not reach tol_resid")


DISPATCH = {
    "analyze": task_analyze,
    "verify": task_verify,
    "ellipse": task_ellipse,
    "gauss": task_gauss,
    "pde-check": task_pde_check,
    "pde-solve": task_pde_solve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnnd", description="Geometry of spacelike surfaces with a canonical normal null direction.")
    sub = parser.add_subparsers(dest="task", required=True)
    for name in TASKS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path of the run configuration")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE")
        p.add_argument("--out", default=None, help="output directory (overrides [output] dir)")
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = load(args.config, args.overrides, args.out)
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        DISPATCH[args.task](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return 2
    except Failure as exc:
        print(f"failed: {exc}", file=err)
        return 1
    except CnndError as exc:
        print(f"failed: {type(exc).__name__}: {exc}", file=err)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
