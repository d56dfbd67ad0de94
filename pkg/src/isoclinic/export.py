"""Grid sampling, CSV/OBJ export, and invariant reports.

CSV columns: u, v, x1, x2, x3, x4, E, F, G, lambda2, K, isoclinic_residual,
minimality_residual -- written with 17 significant digits in a fixed
iteration order (u-major), so output is bit-reproducible for a given config.
OBJ meshes have nu*nv vertices and 2(nu-1)(nv-1) triangular faces; vertices
are a linear 4D->3D projection (default: drop x2).

Grid sampling is parallelized over row blocks; the ISOCLINIC_THREADS
environment variable caps the worker count.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import apply_L, inner
from .config import GridSpec, ProblemConfig
from .diagnostics import singular_scan
from .quadrature import path_integral_many, segment_integral
from .surfaces import Surface
from .quadric import normal_J

__all__ = ["GridSample", "sample_surface", "write_csv", "write_obj", "run_solve", "run_check"]

CSV_COLUMNS = (
    "u",
    "v",
    "x1",
    "x2",
    "x3",
    "x4",
    "E",
    "F",
    "G",
    "lambda2",
    "K",
    "isoclinic_residual",
    "minimality_residual",
)

_PROJECTION_KEEP = {
    "drop-x1": (1, 2, 3),
    "drop-x2": (0, 2, 3),
    "drop-x3": (0, 1, 3),
    "drop-x4": (0, 1, 2),
}


def _thread_count() -> int:
    raw = os.environ.get("ISOCLINIC_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        n = min(4, os.cpu_count() or 1)
    return n


@dataclass(frozen=True)
class GridSample:
    """All per-point data the exporters and reports need."""

    grid: GridSpec
    W: np.ndarray  # (nu, nv) complex
    f: np.ndarray  # (4, nu, nv)
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    lam2: np.ndarray
    K: np.ndarray  # conformal-method curvature; nan near singularities
    K2: np.ndarray  # second-form curvature; nan near singularities
    iso: np.ndarray
    minimality: np.ndarray
    quad_estimate: float


def _positions_rows(s: Surface, W: np.ndarray, threads: int):
    """f on the grid, quadrature parallelized over row blocks."""
    if s.closed_form is not None:
        return np.asarray(s.closed_form(W), dtype=float), 0.0
    rows = np.array_split(np.arange(W.shape[0]), min(threads, W.shape[0]))
    out = np.empty((4,) + W.shape, dtype=float)
    ests = []

    def work(idx):
        vals, est = path_integral_many(s.integrand.evaluate, W[idx], s.quad)
        return idx, vals.real, est

    if threads > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, rows))
    else:
        results = [work(idx) for idx in rows]
    for idx, vals, est in results:
        out[:, idx, :] = s.base.reshape(4, 1, 1) + vals
        ests.append(est)
    return out, max(ests)


def _conformal_K_grid(s: Surface, W, lam2, tau_sing, h=1e-3, richardson=True):
    eps = 1.0 if s.sign == "positive" else -1.0

    def lam2_at(pts):
        g = s.integrand.evaluate(pts)
        fu = g.real
        return np.abs(inner(np.moveaxis(fu, 0, -1), np.moveaxis(fu, 0, -1)))

    def lap(step):
        stack = [lam2_at(W + d) for d in (step, -step, 1j * step, -1j * step)]
        ok = np.ones(W.shape, dtype=bool)
        for l in stack:
            ok &= l > tau_sing
        ln_c = 0.5 * np.log(np.where(lam2 > tau_sing, lam2, 1.0))
        total = np.zeros(W.shape)
        for l in stack:
            total += 0.5 * np.log(np.where(ok, l, 1.0))
        return np.where(ok, (total - 4 * ln_c) / step**2, np.nan)

    lap_h = lap(h)
    if richardson:
        lap_h = (4.0 * lap(h / 2) - lap_h) / 3.0
    with np.errstate(invalid="ignore", divide="ignore"):
        K = -eps * lap_h / lam2
    return np.where(lam2 > tau_sing, K, np.nan)


def _secondform_K_grid(s: Surface, W, lam2, tau_sing):
    g = s.g_at(W)
    gp = s.gprime_at(W)
    K = np.full(W.shape, np.nan)
    it = np.ndindex(W.shape)
    for idx in it:
        if lam2[idx] <= tau_sing:
            continue
        gv = g[(slice(None),) + idx]
        gpv = gp[(slice(None),) + idx]
        f_u, f_v = gv.real, -gv.imag
        f_uu, f_uv, f_vv = gpv.real, -gpv.imag, -gpv.real
        try:
            zn = normal_J(gv).z
        except Exception:
            continue
        n1 = zn.real
        q1 = float(inner(n1, n1))
        if abs(q1) <= tau_sing * float(np.dot(n1, n1)):
            continue
        e1 = 1 if q1 > 0 else -1
        n1 = n1 / np.sqrt(abs(q1))
        n2 = zn.imag - e1 * float(inner(zn.imag, n1)) * n1
        q2 = float(inner(n2, n2))
        if abs(q2) <= tau_sing * float(np.dot(n2, n2)):
            continue
        e2 = 1 if q2 > 0 else -1
        n2 = n2 / np.sqrt(abs(q2))
        det_g = float(inner(f_u, f_u)) * float(inner(f_v, f_v)) - float(inner(f_u, f_v)) ** 2
        total = 0.0
        for n, e in ((n1, e1), (n2, e2)):
            b11 = float(inner(f_uu, n))
            b12 = float(inner(f_uv, n))
            b22 = float(inner(f_vv, n))
            total += e * (b11 * b22 - b12 * b12)
        K[idx] = total / det_g
    return K


def _minimality_grid(s: Surface, W, h=1e-3, richardson=True):
    flat = W.ravel()

    def lap(step):
        total = np.zeros((4, flat.size))
        for shift in (step, -step, 1j * step, -1j * step):
            deltas = segment_integral(s.integrand.evaluate, flat, flat + shift, s.quad.nodes)
            total += deltas.real
        return total / step**2

    value = lap(h)
    if richardson:
        value = (4.0 * lap(h / 2) - value) / 3.0
    return np.linalg.norm(value, axis=0).reshape(W.shape)


def sample_surface(
    s: Surface,
    grid: GridSpec,
    tau_sing: float = 1e-6,
    threads: int | None = None,
    with_secondform: bool = False,
) -> GridSample:
    threads = threads or _thread_count()
    W = grid.points()
    f, est = _positions_rows(s, W, threads)
    g = s.g_at(W)
    fu, fv = g.real, -g.imag
    t = lambda a: np.moveaxis(a, 0, -1)
    E = inner(t(fu), t(fu))
    F = inner(t(fu), t(fv))
    G = inner(t(fv), t(fv))
    lam2 = np.abs(E)
    lf = np.stack([-fu[1], fu[0], -fu[3], fu[2]])
    d_minus = np.linalg.norm(fv - lf, axis=0)
    d_plus = np.linalg.norm(fv + lf, axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        iso = np.minimum(d_minus, d_plus) / np.sqrt(lam2)
    iso = np.where(lam2 > tau_sing, iso, np.nan)
    K = _conformal_K_grid(s, W, lam2, tau_sing)
    K2 = _secondform_K_grid(s, W, lam2, tau_sing) if with_secondform else np.full(W.shape, np.nan)
    minim = _minimality_grid(s, W)
    return GridSample(
        grid=grid,
        W=W,
        f=f,
        E=E,
        F=F,
        G=G,
        lam2=lam2,
        K=K,
        K2=K2,
        iso=iso,
        minimality=minim,
        quad_estimate=est,
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(sample: GridSample, path) -> None:
    rows = [",".join(CSV_COLUMNS)]
    nu, nv = sample.W.shape
    for i in range(nu):
        for j in range(nv):
            w = sample.W[i, j]
            cells = [
                w.real,
                w.imag,
                sample.f[0, i, j],
                sample.f[1, i, j],
                sample.f[2, i, j],
                sample.f[3, i, j],
                sample.E[i, j],
                sample.F[i, j],
                sample.G[i, j],
                sample.lam2[i, j],
                sample.K[i, j],
                sample.iso[i, j],
                sample.minimality[i, j],
            ]
            rows.append(",".join(_fmt(c) for c in cells))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_obj(sample: GridSample, path, projection: str = "drop-x2") -> None:
    if projection not in _PROJECTION_KEEP:
        raise ValueError(f"unknown projection {projection!r}")
    keep = _PROJECTION_KEEP[projection]
    nu, nv = sample.W.shape
    lines = [f"# isoclinic surface mesh ({nu}x{nv}), projection {projection}"]
    for i in range(nu):
        for j in range(nv):
            p = [sample.f[k, i, j] for k in keep]
            lines.append("v " + " ".join(_fmt(c) for c in p))
    # vertex (i, j) has 1-based index i*nv + j + 1
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b = (i + 1) * nv + j + 1
            c = (i + 1) * nv + j + 2
            d = i * nv + j + 2
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _nanmax(a) -> float:
    a = np.asarray(a, dtype=float)
    finite = a[np.isfinite(a)]
    return float(np.max(finite)) if finite.size else float("nan")


def invariant_report(s: Surface, sample: GridSample, tau_sing: float = 1e-6) -> dict:
    """Maxima of the verification residuals over the sampled grid."""
    conf = s.conformality_residual(sample.W)
    flags = singular_scan(
        s,
        u_range=sample.grid.u_range,
        v_range=sample.grid.v_range,
        nu=sample.grid.nu,
        nv=sample.grid.nv,
        tau_sing=tau_sing,
    )
    both = np.isfinite(sample.K) & np.isfinite(sample.K2)
    if np.any(both):
        gap = np.abs(sample.K[both] - sample.K2[both]) / (1.0 + np.abs(sample.K2[both]))
        curvature_gap = float(np.max(gap))
    else:
        curvature_gap = float("nan")
    report = {
        "grid": [sample.grid.nu, sample.grid.nv],
        "quadrature_estimate": sample.quad_estimate,
        "max_conformality_residual": _nanmax(conf),
        "max_minimality_residual": _nanmax(sample.minimality),
        "max_isoclinic_residual": _nanmax(sample.iso)
        if s.provenance in ("cauchy", "graph-pair")
        else None,
        "curvature_method_disagreement": curvature_gap,
        "singular_cells": len(flags),
        "lambda2_min": _nanmax(-sample.lam2) * -1.0,
        "sign": s.sign,
        "provenance": s.provenance,
    }
    return report


def _report_warnings(report: dict) -> list[str]:
    warnings = []
    if report["singular_cells"]:
        warnings.append(f"{report['singular_cells']} singular cells on the grid")
    return warnings


def solve_and_sample(cfg: ProblemConfig, surface: Surface | None = None):
    """Build (or reuse) the surface, sample the grid, assemble the report."""
    s = surface if surface is not None else cfg.build()
    sample = sample_surface(s, cfg.grid, cfg.tol.tau_sing, with_secondform=True)
    report = invariant_report(s, sample, cfg.tol.tau_sing)
    report["warnings"] = _report_warnings(report)
    return s, sample, report


def write_artifacts(cfg: ProblemConfig, sample: GridSample, report: dict, out_dir=None) -> dict:
    directory = Path(out_dir or cfg.output.directory)
    directory.mkdir(parents=True, exist_ok=True)
    artifacts = {}
    if "csv" in cfg.output.formats:
        p = directory / f"{cfg.output.basename}.csv"
        write_csv(sample, p)
        artifacts["csv"] = str(p)
    if "obj" in cfg.output.formats:
        p = directory / f"{cfg.output.basename}.obj"
        write_obj(sample, p, cfg.output.projection)
        artifacts["obj"] = str(p)
    report["artifacts"] = artifacts
    rp = directory / f"{cfg.output.basename}.report.json"
    rp.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    report["report_path"] = str(rp)
    return report


def run_solve(cfg: ProblemConfig, out_dir: str | None = None) -> dict:
    """Solve, sample, and write the configured artifacts; returns the report."""
    _, sample, report = solve_and_sample(cfg)
    return write_artifacts(cfg, sample, report, out_dir)


CHECK_FIELDS = (
    ("max conformality residual", "max_conformality_residual"),
    ("max minimality residual", "max_minimality_residual"),
    ("max isoclinic residual", "max_isoclinic_residual"),
    ("curvature method disagreement", "curvature_method_disagreement"),
    ("singular cells", "singular_cells"),
)


def run_check(cfg: ProblemConfig) -> dict:
    """Solve and report invariants without writing mesh artifacts."""
    _, _, report = solve_and_sample(cfg)
    return report


def format_check_table(report: dict) -> str:
    lines = []
    width = max(len(name) for name, _ in CHECK_FIELDS)
    for name, key in CHECK_FIELDS:
        value = report.get(key)
        if value is None:
            rendered = "n/a"
        elif isinstance(value, int):
            rendered = str(value)
        else:
            rendered = f"{value:.3e}"
        lines.append(f"  {name:<{width}}  {rendered}")
    for w in report.get("warnings", []):
        lines.append(f"  warning: {w}")
    return "\n".join(lines)
