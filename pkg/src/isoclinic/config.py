"""Declarative problem configuration (JSON) and surface construction.

The JSON schema is documented in docs/config-schema.md.  Expressions are
strings in the grammar of isoclinic.expressions; validation errors carry the
dotted path of the offending key and exit the CLI with code 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import expressions as ex
from .curves import CurveR4, Triad, VecExpr
from .domain import Domain
from .errors import ConfigError
from .quadrature import QuadConfig
from .surfaces import (
    Surface,
    graph_pair,
    solve_bjorling,
    solve_cauchy_isoclinic,
    solve_schwarz_direct,
    weierstrass_surface,
)

__all__ = ["GridSpec", "Tolerances", "OutputSpec", "ProblemConfig", "load_config"]

PROBLEMS = ("cauchy", "bjorling", "schwarz-direct", "weierstrass", "graph-pair")
PROJECTIONS = ("drop-x1", "drop-x2", "drop-x3", "drop-x4")
FORMATS = ("csv", "obj")


@dataclass(frozen=True)
class GridSpec:
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    nu: int = 41
    nv: int = 41

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise ConfigError("grid resolution must be at least 2x2")
        if not (self.u_range[0] < self.u_range[1] and self.v_range[0] < self.v_range[1]):
            raise ConfigError("grid ranges must be nonempty")

    def points(self) -> np.ndarray:
        us = np.linspace(*self.u_range, self.nu)
        vs = np.linspace(*self.v_range, self.nv)
        return us[:, None] + 1j * vs[None, :]


@dataclass(frozen=True)
class Tolerances:
    tau_null: float = 1e-9
    tau_iso: float = 1e-9
    tau_sing: float = 1e-6
    triad: float = 1e-8
    tau_frame: float = 1e-9


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    formats: tuple[str, ...] = ("csv",)
    projection: str = "drop-x2"
    basename: str = "surface"


@dataclass(frozen=True)
class ProblemConfig:
    problem: str
    sign: str
    domain: Domain
    grid: GridSpec
    quad: QuadConfig = QuadConfig()
    tol: Tolerances = Tolerances()
    output: OutputSpec = OutputSpec()
    label: str = ""
    # problem-specific payloads (expression strings)
    curve: tuple[str, ...] | None = None
    interval_radius: float | None = None
    frame_a: tuple[str, ...] | None = None
    frame_b: tuple[str, ...] | None = None
    normalize_frame: bool = False
    dprime: tuple[str, ...] | None = None
    mu: str | None = None
    x: str | None = None
    y: str | None = None
    base: tuple[float, ...] = (0.0, 0.0, 0.0, 0.0)
    psi: str | None = None
    phi: str | None = None
    check_domain_sign: bool = True

    def build(self) -> Surface:
        """Construct the configured surface (solver preconditions may raise)."""
        if self.problem in ("cauchy", "bjorling", "schwarz-direct"):
            curve = CurveR4.parse(self.curve, self.interval_radius, self.label)
        if self.problem == "cauchy":
            return solve_cauchy_isoclinic(
                curve, self.sign, self.quad, self.domain, self.tol.tau_null
            )
        if self.problem == "bjorling":
            triad = Triad(
                curve=curve,
                frame_a=VecExpr.parse(self.frame_a),
                frame_b=VecExpr.parse(self.frame_b),
                normalize=self.normalize_frame,
                label=self.label,
            )
            return solve_bjorling(
                triad, self.sign, self.quad, self.domain, self.tol.tau_null, self.tol.triad
            )
        if self.problem == "schwarz-direct":
            return solve_schwarz_direct(
                curve,
                VecExpr.parse(self.dprime),
                self.sign,
                self.quad,
                self.domain,
                self.tol.tau_null,
                self.tol.triad,
            )
        if self.problem == "weierstrass":
            return weierstrass_surface(
                ex.parse(self.mu),
                ex.parse(self.x),
                ex.parse(self.y),
                self.base,
                self.sign,
                self.quad,
                self.domain,
            )
        if self.problem == "graph-pair":
            return graph_pair(
                ex.parse(self.psi),
                ex.parse(self.phi),
                self.sign,
                self.domain,
                self.quad,
                self.check_domain_sign,
            )
        raise ConfigError(f"unknown problem kind {self.problem!r}")


def _need(data: dict, key: str, kind, path: str):
    if key not in data:
        raise ConfigError(f"missing required key {path}.{key}")
    value = data[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{path}.{key} must be a number")
        return float(value)
    if not isinstance(value, kind):
        raise ConfigError(f"{path}.{key} must be of type {kind.__name__}")
    return value


def _expr_list(data: dict, key: str, path: str) -> tuple[str, ...]:
    value = _need(data, key, list, path)
    if len(value) != 4 or not all(isinstance(s, str) for s in value):
        raise ConfigError(f"{path}.{key} must be a list of 4 expression strings")
    return tuple(value)


def _parse_domain(data, path: str) -> Domain:
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must be an object")
    kind = _need(data, "kind", str, path)
    if kind == "disc":
        center = data.get("center", [0.0, 0.0])
        if not (isinstance(center, list) and len(center) == 2):
            raise ConfigError(f"{path}.center must be [re, im]")
        radius = _need(data, "radius", float, path)
        if radius <= 0:
            raise ConfigError(f"{path}.radius must be > 0")
        return Domain.disc(complex(center[0], center[1]), radius)
    if kind == "rect":
        u = _need(data, "u", list, path)
        v = _need(data, "v", list, path)
        try:
            return Domain.rect(u, v)
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind must be 'disc' or 'rect'")


def config_from_dict(data: dict, path: str = "config") -> ProblemConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must be a JSON object")
    problem = _need(data, "problem", str, path)
    if problem not in PROBLEMS:
        raise ConfigError(f"{path}.problem must be one of {PROBLEMS}, got {problem!r}")
    sign = _need(data, "sign", str, path)
    if sign not in ("positive", "negative"):
        raise ConfigError(f"{path}.sign must be 'positive' or 'negative'")
    domain = _parse_domain(_need(data, "domain", dict, path), f"{path}.domain")

    grid_data = data.get("grid", {})
    if not isinstance(grid_data, dict):
        raise ConfigError(f"{path}.grid must be an object")
    (du, dv) = domain.bounding_rect()
    u_range = tuple(grid_data.get("u", du))
    v_range = tuple(grid_data.get("v", dv))
    try:
        grid = GridSpec(
            u_range=(float(u_range[0]), float(u_range[1])),
            v_range=(float(v_range[0]), float(v_range[1])),
            nu=int(grid_data.get("nu", 41)),
            nv=int(grid_data.get("nv", 41)),
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"{path}.grid is malformed: {exc}") from exc

    quad_data = data.get("quadrature", {})
    try:
        quad = QuadConfig(
            panels=int(quad_data.get("panels", 4)),
            nodes=int(quad_data.get("nodes", 16)),
            tol=float(quad_data.get("tol", 1e-10)),
            max_refinements=int(quad_data.get("max_refinements", 8)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}.quadrature is malformed: {exc}") from exc

    tol_data = data.get("tolerances", {})
    try:
        tol = Tolerances(
            tau_null=float(tol_data.get("tau_null", 1e-9)),
            tau_iso=float(tol_data.get("tau_iso", 1e-9)),
            tau_sing=float(tol_data.get("tau_sing", 1e-6)),
            triad=float(tol_data.get("triad", 1e-8)),
            tau_frame=float(tol_data.get("tau_frame", 1e-9)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}.tolerances is malformed: {exc}") from exc

    out_data = data.get("output", {})
    formats = tuple(out_data.get("formats", ["csv"]))
    for f in formats:
        if f not in FORMATS:
            raise ConfigError(f"{path}.output.formats entries must be in {FORMATS}")
    projection = out_data.get("projection", "drop-x2")
    if projection not in PROJECTIONS:
        raise ConfigError(f"{path}.output.projection must be one of {PROJECTIONS}")
    output = OutputSpec(
        directory=str(out_data.get("dir", "out")),
        formats=formats,
        projection=projection,
        basename=str(out_data.get("basename", "surface")),
    )

    kwargs = dict(
        problem=problem,
        sign=sign,
        domain=domain,
        grid=grid,
        quad=quad,
        tol=tol,
        output=output,
        label=str(data.get("label", "")),
    )
    if problem in ("cauchy", "bjorling", "schwarz-direct"):
        kwargs["curve"] = _expr_list(data, "curve", path)
        radius = _need(data, "interval_radius", float, path)
        if radius <= 0:
            raise ConfigError(f"{path}.interval_radius must be > 0")
        kwargs["interval_radius"] = radius
    if problem == "bjorling":
        kwargs["frame_a"] = _expr_list(data, "frame_a", path)
        kwargs["frame_b"] = _expr_list(data, "frame_b", path)
        kwargs["normalize_frame"] = bool(data.get("normalize_frame", False))
    if problem == "schwarz-direct":
        kwargs["dprime"] = _expr_list(data, "dprime", path)
    if problem == "weierstrass":
        kwargs["mu"] = _need(data, "mu", str, path)
        kwargs["x"] = _need(data, "x", str, path)
        kwargs["y"] = _need(data, "y", str, path)
        base = data.get("base", [0.0, 0.0, 0.0, 0.0])
        if not (isinstance(base, list) and len(base) == 4):
            raise ConfigError(f"{path}.base must be a list of 4 numbers")
        kwargs["base"] = tuple(float(b) for b in base)
    if problem == "graph-pair":
        kwargs["psi"] = _need(data, "psi", str, path)
        kwargs["phi"] = _need(data, "phi", str, path)
        kwargs["check_domain_sign"] = bool(data.get("check_domain_sign", True))

    # expressions must parse at config time
    for key in ("curve", "frame_a", "frame_b", "dprime"):
        if kwargs.get(key):
            for k, text in enumerate(kwargs[key]):
                try:
                    ex.parse(text)
                except ConfigError as exc:
                    raise ConfigError(f"{path}.{key}[{k}]: {exc}") from exc
    for key in ("mu", "x", "y", "psi", "phi"):
        if kwargs.get(key) is not None:
            try:
                ex.parse(kwargs[key])
            except ConfigError as exc:
                raise ConfigError(f"{path}.{key}: {exc}") from exc

    return ProblemConfig(**kwargs)


def load_config(path: str) -> ProblemConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    return config_from_dict(data)
