"""Parametrized surfaces (x, y) -> psi(x, y) in R^{3,1}."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .expr import Expr, SURFACE_VARS, eval_jet, free_vars, parse, to_source
from .lorentz import mink_norm2

KINDS = ("graph", "translation", "ruled", "explicit")


@dataclass(frozen=True)
class PointJets:
    """psi and its partials at one parameter point, as 4-vectors."""

    value: np.ndarray
    px: np.ndarray
    py: np.ndarray
    pxx: np.ndarray
    pxy: np.ndarray
    pyy: np.ndarray


@dataclass(frozen=True)
class SurfaceDef:
    components: tuple[Expr, Expr, Expr, Expr]
    kind: str = "explicit"
    Z: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("a surface needs exactly four component expressions")
        if self.kind not in KINDS:
            raise ValueError(f"unknown surface kind {self.kind!r}")
        for c in self.components:
            extra = free_vars(c) - set(SURFACE_VARS)
            if extra:
                raise ValueError(f"surface component uses undeclared variables {sorted(extra)}")
        Z = np.asarray(self.Z, dtype=float)
        if Z.shape != (4,) or not np.all(np.isfinite(Z)):
            raise ValueError("Z must be a finite constant 4-vector")
        if abs(mink_norm2(Z) - 1.0) > 1e-12:
            raise ValueError(f"Z must be a unit spacelike vector, <Z,Z> = {mink_norm2(Z)!r}")
        object.__setattr__(self, "Z", Z)
        if self.kind == "graph":
            x, y = (to_source(c) for c in self.components[:2])
            if (x, y) != ("x", "y"):
                raise ValueError("graph surfaces must have psi1 = x and psi2 = y")

    @classmethod
    def from_sources(cls, sources: Sequence[str], kind: str = "explicit", Z=None, meta=None) -> SurfaceDef:
        comps = tuple(parse(s) for s in sources)
        kwargs = {} if Z is None else {"Z": np.asarray(Z, dtype=float)}
        return cls(comps, kind, meta=dict(meta or {}), **kwargs)

    def with_z(self, Z) -> SurfaceDef:
        return SurfaceDef(self.components, self.kind, np.asarray(Z, dtype=float), dict(self.meta))

    def sources(self) -> tuple[str, ...]:
        return tuple(to_source(c) for c in self.components)

    def jets(self, x: float, y: float) -> PointJets:
        js = [eval_jet(c, x, y) for c in self.components]
        return PointJets(
            np.array([j.v for j in js]),
            np.array([j.dx for j in js]),
            np.array([j.dy for j in js]),
            np.array([j.dxx for j in js]),
            np.array([j.dxy for j in js]),
            np.array([j.dyy for j in js]),
        )

    def point(self, x: float, y: float) -> np.ndarray:
        return self.jets(x, y).value
