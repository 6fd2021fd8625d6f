"""Run configuration files.

A configuration is an INI file with the sections ``[surface]``, ``[domain]``,
``[task]`` and ``[output]``.  Expressions may be quoted.  Example::

    [surface]
    kind = family1
    alpha = "t^2"
    k = 0
    Z = 1, 0, 0, 0

    [domain]
    x = -1, 1
    y = -1, 1
    nx = 7
    ny = 7
    point = 0.5, 0.2

    [task]
    tol = 1e-6

Surface kinds and their keys:

    graph        f, g
    explicit     psi1 .. psi4
    translation  alpha1 .. alpha4, delta1 .. delta4   (curves in t)
    ruled        alpha1 .. alpha4 and either z0 = a, b, c, d or ztop1 .. ztop4
    family1      alpha (curve in t), k
    family2      alpha, c (curves in t), k
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .constructions import family1, family2, graph_surface, ruled_surface, translation_surface
from .errors import ConfigError, CnndError, ExprSyntaxError, UnknownIdentifier
from .expr import Expr, parse, parse_curve
from .surface import SurfaceDef

SURFACE_KINDS = ("graph", "explicit", "translation", "ruled", "family1", "family2")
SECTIONS = ("surface", "domain", "task", "output")


@dataclass(frozen=True)
class Domain:
    x: tuple[float, float]
    y: tuple[float, float]
    nx: int
    ny: int
    point: tuple[float, float] | None


@dataclass
class RunConfig:
    surface: SurfaceDef
    domain: Domain
    task: dict[str, str]
    out_dir: Path
    graph_fg: tuple[Expr, Expr] | None = None  # (f, g) when the surface is a graph
    source: str = ""

    def task_float(self, key: str, default: float) -> float:
        return _float(self.task.get(key, repr(default)), f"[task] {key}")

    def task_int(self, key: str, default: int) -> int:
        return _int(self.task.get(key, str(default)), f"[task] {key}")


def _unquote(v: str) -> str:
    v = v.strip()
    if len(v) >= 2 and v[0] == v[-1] and v[0] in "\"'":
        return v[1:-1]
    return v


def _float(v: str, where: str) -> float:
    try:
        out = float(_unquote(v))
    except ValueError:
        raise ConfigError(f"expected a number, got {v!r}", where) from None
    if not np.isfinite(out):
        raise ConfigError(f"expected a finite number, got {v!r}", where)
    return out


def _int(v: str, where: str) -> int:
    try:
        return int(_unquote(v))
    except ValueError:
        raise ConfigError(f"expected an integer, got {v!r}", where) from None


def parse_floats(v: str, n: int | None, where: str) -> tuple[float, ...]:
    parts = [p for p in _unquote(v).replace(";", ",").split(",") if p.strip()]
    vals = tuple(_float(p, where) for p in parts)
    if n is not None and len(vals) != n:
        raise ConfigError(f"expected {n} comma-separated numbers, got {len(vals)}", where)
    return vals


def _expr(sec: configparser.SectionProxy, key: str, curve: bool = False) -> Expr:
    where = f"[{sec.name}] {key}"
    if key not in sec:
        raise ConfigError("missing key", where)
    src = _unquote(sec[key])
    try:
        return parse_curve(src) if curve else parse(src)
    except (ExprSyntaxError, UnknownIdentifier) as exc:
        raise ConfigError(str(exc), where) from None


def _exprs(sec, prefix: str, curve: bool) -> tuple[Expr, ...]:
    return tuple(_expr(sec, f"{prefix}{i}", curve) for i in range(1, 5))


def apply_overrides(cp: configparser.ConfigParser, overrides: Sequence[str]) -> None:
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value, got {item!r}", "--set")
        lhs, value = item.split("=", 1)
        section, key = lhs.split(".", 1)
        section, key = section.strip(), key.strip()
        if section not in SECTIONS:
            raise ConfigError(f"unknown section {section!r}", "--set")
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, key, value.strip())


def _surface(cp: configparser.ConfigParser) -> tuple[SurfaceDef, tuple[Expr, Expr] | None]:
    if not cp.has_section("surface"):
        raise ConfigError("missing section", "[surface]")
    sec = cp["surface"]
    kind = _unquote(sec.get("kind", ""))
    if kind not in SURFACE_KINDS:
        raise ConfigError(f"kind must be one of {', '.join(SURFACE_KINDS)}, got {kind!r}", "[surface] kind")
    Z = parse_floats(sec["Z"], 4, "[surface] Z") if "Z" in sec else None
    fg = None
    try:
        if kind == "graph":
            fg = (_expr(sec, "f"), _expr(sec, "g"))
            s = graph_surface(*fg, Z=Z)
        elif kind == "explicit":
            comps = _exprs(sec, "psi", False)
            s = SurfaceDef(comps, "explicit", **({} if Z is None else {"Z": np.array(Z)}))
        elif kind == "translation":
            s = translation_surface(_exprs(sec, "alpha", True), _exprs(sec, "delta", True))
            if Z is not None:
                s = SurfaceDef(s.components, s.kind, np.array(Z), s.meta)
        elif kind == "ruled":
            alpha = _exprs(sec, "alpha", True)
            if "z0" in sec:
                direction = parse_floats(sec["z0"], 4, "[surface] z0")
            else:
                direction = _exprs(sec, "ztop", True)
            s = ruled_surface(alpha, direction, Z=Z)
        else:
            alpha = _expr(sec, "alpha", curve=True)
            k = _float(sec.get("k", "0"), "[surface] k")
            if kind == "family1":
                fg = family1(alpha, k)
            else:
                c = _expr(sec, "c", curve=True) if "c" in sec else parse_curve("0")
                dom = _domain(cp)
                fam = family2(alpha, c, k, domain=(dom.x, dom.y))
                fg = (fam.f, fam.g)
            s = graph_surface(*fg, Z=Z)
    except ConfigError:
        raise
    except (ValueError, CnndError) as exc:
        raise ConfigError(str(exc), "[surface]") from None
    return s, fg


def _range(sec, key: str) -> tuple[float, float]:
    where = f"[domain] {key}"
    if key not in sec:
        raise ConfigError("missing key", where)
    lo, hi = parse_floats(sec[key], 2, where)
    if not lo <= hi:
        raise ConfigError(f"empty range {lo!r}, {hi!r}", where)
    return lo, hi


def _domain(cp: configparser.ConfigParser) -> Domain:
    if not cp.has_section("domain"):
        raise ConfigError("missing section", "[domain]")
    sec = cp["domain"]
    nx = _int(sec.get("nx", "1"), "[domain] nx")
    ny = _int(sec.get("ny", "1"), "[domain] ny")
    if nx < 1 or ny < 1:
        raise ConfigError("grid counts must be at least 1", "[domain] nx/ny")
    point = parse_floats(sec["point"], 2, "[domain] point") if "point" in sec else None
    return Domain(_range(sec, "x"), _range(sec, "y"), nx, ny, point)  # type: ignore[arg-type]


def load(path: str | Path, overrides: Sequence[str] = (), out_dir: str | None = None) -> RunConfig:
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str  # keys are case sensitive (Z)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from None
    try:
        cp.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], str(path)) from None
    for name in cp.sections():
        if name not in SECTIONS:
            raise ConfigError(f"unknown section [{name}]", str(path))
    apply_overrides(cp, overrides)
    surface, fg = _surface(cp)
    domain = _domain(cp)
    task = {k: _unquote(v) for k, v in cp["task"].items()} if cp.has_section("task") else {}
    out = out_dir
    if out is None:
        out = _unquote(cp["output"].get("dir", "cnnd-out")) if cp.has_section("output") else "cnnd-out"
    return RunConfig(surface, domain, task, Path(out), fg, str(path))
