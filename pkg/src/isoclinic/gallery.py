"""Built-in worked examples, each with its expected closed form or residual.

Every entry is a JSON config shipped with the package plus verification
hooks: where a closed-form solution is known the grid is compared against it
(sup-norm, 1e-8); construction-specific entries instead assert their defining
residual (geodesic, asymptotic, flatness, or the bilinear-form identities of
the Weierstrass data).  A failed assertion raises ToleranceNotMet (CLI exit
code 3).
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .algebra import apply_L, inner
from .config import ProblemConfig, config_from_dict
from .curves import interior_grid
from .diagnostics import asymptotic_check, gauss_curvature, geodesic_check
from .errors import ToleranceNotMet, UnknownGallery
from .export import solve_and_sample, write_artifacts

__all__ = ["GALLERY_NAMES", "gallery_config", "run_gallery"]

_SQ5 = np.sqrt(5.0)
_A, _B = 0.92, 0.9
_RHO = np.sqrt(_A**2 - _B**2)
_NRM = np.sqrt(_B**2 - _A**4)


def _f_exa(W):
    u, v = W.real, W.imag
    return np.stack([u, v, (u * u - v * v) / 2.0, u * v])


def _f_torus(n):
    def f(W):
        e1 = np.exp(1j * W)
        en = np.exp(1j * n * W)
        return np.stack([e1.real, (-1j * e1).real, en.real, (-1j * en).real])

    return f


def _f_torus_asymptotic(W):
    C = np.stack([np.cos(W), np.sin(W), np.cos(2 * W), np.sin(2 * W)])
    C0 = np.array([1.0, 0.0, 1.0, 0.0]).reshape((4,) + (1,) * W.ndim)
    D = np.stack([np.sin(W), -np.cos(W), 2 * np.sin(2 * W), -2 * np.cos(2 * W)]) / -_SQ5
    D0 = (np.array([0.0, -1.0, 0.0, -2.0]) / -_SQ5).reshape((4,) + (1,) * W.ndim)
    base = np.array([1.0, 0.0, 1.0, 0.0]).reshape((4,) + (1,) * W.ndim)
    return base + ((C - C0) - 1j * (D - D0)).real


def _f_helix(W):
    t = W / _RHO
    alpha = np.stack([_B * np.cos(t), _B * np.sin(t), np.cos(_A * t), np.sin(_A * t)])
    alpha0 = np.array([_B, 0.0, 1.0, 0.0]).reshape((4,) + (1,) * W.ndim)
    # antiderivative of N3 = (a^2 cos t, a^2 sin t, b cos at, b sin at)/nrm, t = s/rho
    int_n3 = (
        np.stack(
            [
                _A**2 * _RHO * np.sin(t),
                _A**2 * _RHO * (1 - np.cos(t)),
                (_B * _RHO / _A) * np.sin(_A * t),
                (_B * _RHO / _A) * (1 - np.cos(_A * t)),
            ]
        )
        / _NRM
    )
    # d' = -N3, so f = alpha(0) + Re[(alpha - alpha(0)) + i * int N3]
    return alpha0 + ((alpha - alpha0) + 1j * int_n3).real


def _f_bihelix(W):
    C = np.stack(
        [np.sqrt(2.0) * np.cos(W), np.sqrt(2.0) * np.sin(W), np.cos(2 * W) / 2, np.sin(2 * W) / 2]
    )
    C0 = np.array([np.sqrt(2.0), 0.0, 0.5, 0.0]).reshape((4,) + (1,) * W.ndim)
    delta = C - C0
    l_delta = np.moveaxis(apply_L(np.moveaxis(delta, 0, -1)), -1, 0)
    return C0 + (delta - 1j * l_delta).real


def _f_entire(W):
    F = np.stack(
        [
            (1 + 1j) * W**2 / 2,
            -(1 + 1j) * W**2 / 2,
            W + 1j * W**3 / 3,
            1j * W + W**3 / 3,
        ]
    )
    return F.real


def _f_graph_flat(W):
    p = 0.5 * np.exp(W)
    f = np.exp(W)
    return np.stack([p.real, p.imag, f.real, f.imag])


def _check_agreement(entry, surface, sample, report, tol=1e-8):
    expected = entry["closed_form"](sample.W)
    sup = float(np.max(np.abs(sample.f - expected)))
    report["gallery"]["closed_form_sup_error"] = sup
    report["gallery"]["closed_form_pass"] = sup <= tol
    if sup > tol:
        raise ToleranceNotMet(
            f"gallery {entry['name']!r}: closed-form disagreement {sup:.3g} > {tol:.0e}",
            estimate=sup,
        )


def _check_geodesic(entry, surface, sample, report, tol=1e-6):
    ts = interior_grid(surface.curve.radius, 21)
    worst = max(geodesic_check(surface, None, float(t)) for t in ts)
    report["gallery"]["geodesic_residual_max"] = worst
    if worst > tol:
        raise ToleranceNotMet(
            f"gallery {entry['name']!r}: geodesic residual {worst:.3g} > {tol:.0e}",
            estimate=worst,
        )


def _check_asymptotic(entry, surface, sample, report, tol=1e-6):
    ts = interior_grid(surface.curve.radius, 21)
    worst = max(asymptotic_check(surface, None, float(t)) for t in ts)
    report["gallery"]["asymptotic_residual_max"] = worst
    if worst > tol:
        raise ToleranceNotMet(
            f"gallery {entry['name']!r}: asymptotic residual {worst:.3g} > {tol:.0e}",
            estimate=worst,
        )


def _check_quadrature_route(entry, surface, sample, report, tol=1e-8):
    """For closed-form surfaces: the quadrature route must agree with it."""
    vals = surface.positions(sample.W, force_quadrature=True)
    sup = float(np.max(np.abs(vals - sample.f)))
    report["gallery"]["quadrature_route_sup_error"] = sup
    if sup > tol:
        raise ToleranceNotMet(
            f"gallery {entry['name']!r}: quadrature route differs by {sup:.3g}",
            estimate=sup,
        )


def _check_flat(entry, surface, sample, report, tol=1e-5):
    rng = np.random.default_rng(11)
    (u0, u1), (v0, v1) = surface.domain.bounding_rect()
    ws = rng.uniform(u0, u1, 50) + 1j * rng.uniform(v0, v1, 50)
    worst = max(abs(gauss_curvature(surface, w, "conformal", richardson=True)) for w in ws)
    report["gallery"]["flatness_K_max"] = worst
    if worst > tol:
        raise ToleranceNotMet(
            f"gallery {entry['name']!r}: |K| = {worst:.3g} > {tol:.0e}", estimate=worst
        )


def _check_weierstrass_identities(entry, surface, sample, report, tol=1e-10):
    """<<g,g>> = 0 and <<g, conj g>> = 8|mu|^2 (1-|x|^2)(1-|y|^2) on the grid."""
    W = sample.W
    g = np.moveaxis(surface.g_at(W), 0, -1)
    zz = np.max(np.abs(inner(g, g)))
    mu = 0.5
    x = W
    y = 1j * W
    expect = 8 * abs(mu) ** 2 * (1 - np.abs(x) ** 2) * (1 - np.abs(y) ** 2)
    zzbar = inner(g, np.conj(g)).real
    gap = float(np.max(np.abs(zzbar - expect)))
    report["gallery"]["conformality_identity_max"] = float(zz)
    report["gallery"]["pairing_identity_max_gap"] = gap
    if zz > tol or gap > 1e-9:
        raise ToleranceNotMet(
            f"gallery {entry['name']!r}: Weierstrass identities violated "
            f"(<<g,g>> = {float(zz):.3g}, pairing gap = {gap:.3g})"
        )


_ENTRIES = {
    "example-exa": {
        "closed_form": _f_exa,
        "checks": (_check_agreement,),
        "describe": "isoclinic graph of w^2/2 through (t, 0, t^2/2, 0), Cauchy data",
    },
    "bjorling-parabola": {
        "closed_form": _f_exa,
        "checks": (_check_agreement,),
        "describe": "Bjorling strip along the parabola curve; same surface as example-exa",
    },
    "torus-n2": {
        "closed_form": _f_torus(2),
        "checks": (_check_agreement,),
        "describe": "cycle (cos t, sin t, cos 2t, sin 2t) on the null-sphere torus",
    },
    "torus-n3": {
        "closed_form": _f_torus(3),
        "checks": (_check_agreement,),
        "describe": "cycle (cos t, sin t, cos 3t, sin 3t) on the null-sphere torus",
    },
    "torus-asymptotic": {
        "closed_form": _f_torus_asymptotic,
        "checks": (_check_agreement, _check_asymptotic),
        "describe": "surface with the torus cycle as an asymptotic line (d' = c''/sqrt 5)",
    },
    "helix-geodesic": {
        "closed_form": _f_helix,
        "checks": (_check_agreement, _check_geodesic),
        "describe": "surface with the (a, b)-helix as a geodesic (d' = -N3)",
    },
    "bihelix": {
        "closed_form": _f_bihelix,
        "checks": (_check_agreement,),
        "describe": "isoclinic bi-helix surface from Cauchy data (b=1, m=1, n=2)",
    },
    "entire-weierstrass": {
        "closed_form": _f_entire,
        "checks": (_check_agreement, _check_weierstrass_identities),
        "describe": "entire minimal surface from Weierstrass data x = w, y = iw",
    },
    "graph-pair-flat": {
        "closed_form": _f_graph_flat,
        "checks": (_check_agreement, _check_quadrature_route, _check_flat),
        "describe": "flat isoclinic surface of the pair (0.5 e^w, e^w)",
    },
}

GALLERY_NAMES = tuple(sorted(_ENTRIES))


def gallery_config(name: str) -> ProblemConfig:
    """The built-in ProblemConfig of a gallery entry."""
    if name not in _ENTRIES:
        raise UnknownGallery(
            f"unknown gallery entry {name!r}; valid names: {', '.join(GALLERY_NAMES)}"
        )
    text = resources.files("isoclinic").joinpath(f"gallery_configs/{name}.json").read_text()
    return config_from_dict(json.loads(text))


def run_gallery(name: str, out_dir: str | None = None, cfg: ProblemConfig | None = None) -> dict:
    """Run a gallery entry: solve, write artifacts, verify its expected values."""
    if cfg is None:
        cfg = gallery_config(name)
    entry = dict(_ENTRIES[name], name=name)
    surface, sample, report = solve_and_sample(cfg)
    report["gallery"] = {"name": name, "description": entry["describe"]}
    failure = None
    for check in entry["checks"]:
        try:
            check(entry, surface, sample, report)
        except ToleranceNotMet as exc:
            failure = exc
            break
    report["gallery"]["pass"] = failure is None
    write_artifacts(cfg, sample, report, out_dir or f"out/{name}")
    if failure is not None:
        raise failure
    return report
