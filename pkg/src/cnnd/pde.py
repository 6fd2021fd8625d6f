"""Least-squares solution of the graph equation for g given f.

Unknowns are the grid values of g off the boundary column x = x0.  Residuals
are taken at the same nodes, so the Gauss-Newton system is square.  g_x and
g_y use centered differences inside the grid and second-order one-sided
differences on its edges; both are exact for quadratics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import Diverged, SingularJacobian
from .expr import Expr, eval_float, eval_jet, parse

MAX_HALVINGS = 30
INITIAL_GUESSES = ("constant", "upper", "lower")


@dataclass(frozen=True)
class GraphPDEProblem:
    f: Expr
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    nx: int
    ny: int
    boundary: tuple[float, ...]  # g(x0, y_j), j = 0..ny-1
    max_iter: int = 50
    damping: float = 1.0
    tol_resid: float = 1e-10
    initial: str = "constant"  # "constant", or "upper"/"lower" to march along a root branch

    def __post_init__(self):
        if isinstance(self.f, str):
            object.__setattr__(self, "f", parse(self.f))
        if self.nx < 3 or self.ny < 3:
            raise ValueError("the solver grid needs nx, ny >= 3")
        if len(self.boundary) != self.ny:
            raise ValueError(f"boundary data has {len(self.boundary)} values, expected ny = {self.ny}")
        if not all(np.isfinite(self.boundary)):
            raise ValueError("boundary data must be finite")
        if not (self.x_range[1] > self.x_range[0] and self.y_range[1] > self.y_range[0]):
            raise ValueError("domain ranges must be non-empty")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.max_iter < 0 or self.tol_resid <= 0:
            raise ValueError("max_iter must be >= 0 and tol_resid > 0")
        if self.initial not in INITIAL_GUESSES:
            raise ValueError(f"initial must be one of {INITIAL_GUESSES}, got {self.initial!r}")
        object.__setattr__(self, "boundary", tuple(float(b) for b in self.boundary))

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)


@dataclass
class PDESolution:
    xs: np.ndarray
    ys: np.ndarray
    g: np.ndarray  # g[j, i] at (xs[i], ys[j])
    residual: np.ndarray  # same layout; the boundary column carries nan
    max_residual: float
    converged: bool
    iterations: int
    history: list[float] = field(default_factory=list)  # max |residual| before each step

    CSV_HEADER = ("x", "y", "g", "residual")

    def csv_rows(self) -> list[list[float]]:
        return [
            [float(self.xs[i]), float(self.ys[j]), float(self.g[j, i]), float(self.residual[j, i])]
            for j in range(len(self.ys))
            for i in range(len(self.xs))
        ]


def _diff_matrix(n: int, h: float) -> np.ndarray:
    D = np.zeros((n, n))
    D[0, :3] = [-3.0, 4.0, -1.0]
    D[-1, -3:] = [1.0, -4.0, 3.0]
    for i in range(1, n - 1):
        D[i, i - 1], D[i, i + 1] = -1.0, 1.0
    return D / (2.0 * h)


class _System:
    def __init__(self, p: GraphPDEProblem):
        self.p = p
        nx, ny = p.nx, p.ny
        xs, ys = p.xs, p.ys
        # Full-grid operators on g flattened row-major (index j*nx + i).
        self.Dx = np.kron(np.eye(ny), _diff_matrix(nx, xs[1] - xs[0]))
        self.Dy = np.kron(_diff_matrix(ny, ys[1] - ys[0]), np.eye(nx))
        self.unknown = np.array([j * nx + i for j in range(ny) for i in range(1, nx)])
        fx = np.empty(nx * ny)
        fy = np.empty(nx * ny)
        for j in range(ny):
            for i in range(nx):
                jf = eval_jet(p.f, float(xs[i]), float(ys[j]))
                fx[j * nx + i], fy[j * nx + i] = jf.dx, jf.dy
        self.fx_all, self.fy_all = fx, fy
        self.fx, self.fy = fx[self.unknown], fy[self.unknown]
        self.Dx_u = self.Dx[self.unknown]
        self.Dy_u = self.Dy[self.unknown]

    def residual(self, g: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        gx, gy = self.Dx_u @ g, self.Dy_u @ g
        fx, fy = self.fx, self.fy
        r = (1.0 + fy * fy) * gx * gx - 2.0 * fx * fy * gx * gy - (1.0 - gy * gy) * fx * fx
        return r, gx, gy

    def jacobian(self, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
        fx, fy = self.fx, self.fy
        r_gx = 2.0 * (1.0 + fy * fy) * gx - 2.0 * fx * fy * gy
        r_gy = -2.0 * fx * fy * gx + 2.0 * gy * fx * fx
        J = r_gx[:, None] * self.Dx_u + r_gy[:, None] * self.Dy_u
        return J[:, self.unknown]


def _march(p: GraphPDEProblem, sysm: _System) -> np.ndarray:
    """Explicit Euler along x, taking g_x from one root of the quadratic.

    At a fixed node the equation reads A g_x^2 - 2 B g_x - C = 0 with
    A = 1 + f_y^2, B = f_x f_y g_y, C = (1 - g_y^2) f_x^2; "upper" takes the
    larger root.  A negative discriminant falls back to the vertex B / A.
    """
    nx, ny = p.nx, p.ny
    hx = p.xs[1] - p.xs[0]
    Dy = _diff_matrix(ny, p.ys[1] - p.ys[0])
    sign = 1.0 if p.initial == "upper" else -1.0
    g = np.empty((ny, nx))
    g[:, 0] = p.boundary
    for i in range(1, nx):
        col = g[:, i - 1]
        gy = Dy @ col
        idx = np.arange(ny) * nx + (i - 1)
        fx, fy = sysm.fx_all[idx], sysm.fy_all[idx]
        A = 1.0 + fy * fy
        B = fx * fy * gy
        C = (1.0 - gy * gy) * fx * fx
        disc = np.maximum(B * B + A * C, 0.0)
        g[:, i] = col + hx * (B + sign * np.sqrt(disc)) / A
    return g.reshape(-1)


def pde_solve(p: GraphPDEProblem) -> PDESolution:
    """Damped Gauss-Newton on the grid residuals.

    The equation is quadratic in g_x, so data on one edge admits several
    discrete solutions; ``p.initial`` decides which one the iteration finds.
    """
    sysm = _System(p)
    nx, ny = p.nx, p.ny
    if p.initial == "constant":
        g = np.repeat(np.asarray(p.boundary, dtype=float), nx)
    else:
        g = _march(p, sysm)
    unk = sysm.unknown
    history: list[float] = []
    r, gx, gy = sysm.residual(g)
    converged = False
    it = 0
    while True:
        worst = float(np.max(np.abs(r)))
        history.append(worst)
        if worst <= p.tol_resid:
            converged = True
            break
        if it >= p.max_iter:
            break
        J = sysm.jacobian(gx, gy)
        step, _, rank, sv = np.linalg.lstsq(J, -r, rcond=None)
        if rank < J.shape[1]:
            _, _, vt = np.linalg.svd(J)
            k = int(unk[int(np.argmax(np.abs(vt[-1])))])
            node = (float(p.xs[k % nx]), float(p.ys[k // nx]))
            raise SingularJacobian(f"Jacobian lost rank ({rank} of {J.shape[1]}) near node {node}", node)
        energy = float(r @ r)
        lam = p.damping
        for _ in range(MAX_HALVINGS):
            trial = g.copy()
            trial[unk] += lam * step
            r_new, gx_new, gy_new = sysm.residual(trial)
            if float(r_new @ r_new) < energy:
                break
            lam *= 0.5
        else:
            raise Diverged(f"no damped step reduced the residual at iteration {it} (max |residual| {worst!r})")
        g, r, gx, gy = trial, r_new, gx_new, gy_new
        it += 1
    res_grid = np.full(nx * ny, np.nan)
    res_grid[unk] = r
    return PDESolution(
        p.xs,
        p.ys,
        g.reshape(ny, nx),
        res_grid.reshape(ny, nx),
        float(np.max(np.abs(r))),
        converged,
        it,
        history,
    )


def boundary_from_expr(g: Expr | str, x0: float, ys: Sequence[float]) -> tuple[float, ...]:
    """Sample g(x0, y) at the grid ordinates."""
    g = parse(g) if isinstance(g, str) else g
    return tuple(eval_float(g, x=x0, y=float(y)) for y in ys)
