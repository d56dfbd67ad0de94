"""Command-line interface.

    isoclinic solve <config.json> [--out DIR] [common flags]
    isoclinic check <config.json> [common flags]
    isoclinic gallery <name> [--out DIR] [common flags]
    isoclinic gallery --list

Common flags override the config: --format csv|obj|both, --projection
drop-x1|drop-x2|drop-x3|drop-x4, --grid NUxNV, --tol T.  Exit codes:
0 success (warnings allowed), 1 config error, 2 solver precondition failure,
3 tolerance not met.  Errors go to stderr as "error[ClassName]: message".
The ISOCLINIC_THREADS environment variable caps sampling parallelism.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import GridSpec, OutputSpec, ProblemConfig, load_config
from .errors import ConfigError, IsoclinicError
from .export import format_check_table, run_check, run_solve
from .gallery import GALLERY_NAMES, gallery_config, run_gallery
from .quadrature import QuadConfig

__all__ = ["main"]


def _add_common(p):
    p.add_argument("--format", choices=["csv", "obj", "both"], help="artifact formats")
    p.add_argument(
        "--projection",
        choices=["drop-x1", "drop-x2", "drop-x3", "drop-x4"],
        help="4D -> 3D projection for OBJ output",
    )
    p.add_argument("--grid", metavar="NUxNV", help="grid resolution, e.g. 41x21")
    p.add_argument("--tol", type=float, metavar="T", help="quadrature target tolerance")


def _parse_grid_flag(text: str):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ConfigError(f"--grid expects NUxNV, got {text!r}")
    try:
        nu, nv = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"--grid expects integers, got {text!r}") from exc
    return nu, nv


def _apply_overrides(cfg: ProblemConfig, args) -> ProblemConfig:
    changes = {}
    if args.format:
        formats = ("csv", "obj") if args.format == "both" else (args.format,)
        changes["output"] = dataclasses.replace(cfg.output, formats=formats)
    if args.projection:
        out = changes.get("output", cfg.output)
        changes["output"] = dataclasses.replace(out, projection=args.projection)
    if args.grid:
        nu, nv = _parse_grid_flag(args.grid)
        changes["grid"] = GridSpec(cfg.grid.u_range, cfg.grid.v_range, nu, nv)
    if args.tol is not None:
        if args.tol <= 0:
            raise ConfigError("--tol must be > 0")
        changes["quad"] = dataclasses.replace(cfg.quad, tol=args.tol)
    return dataclasses.replace(cfg, **changes) if changes else cfg


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="isoclinic",
        description="Minimal spacelike surfaces in R^4_2: solve, verify, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a configured problem and write artifacts")
    p_solve.add_argument("config", help="path to a JSON problem config")
    p_solve.add_argument("--out", help="output directory (default: config output.dir)")
    _add_common(p_solve)

    p_check = sub.add_parser("check", help="solve and print the invariant table only")
    p_check.add_argument("config", help="path to a JSON problem config")
    _add_common(p_check)

    p_gal = sub.add_parser("gallery", help="run a built-in example")
    p_gal.add_argument("name", nargs="?", help="gallery entry name")
    p_gal.add_argument("--list", action="store_true", help="list gallery entries")
    p_gal.add_argument("--out", help="output directory (default: out/<name>)")
    _add_common(p_gal)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            cfg = _apply_overrides(load_config(args.config), args)
            report = run_solve(cfg, args.out)
            for w in report.get("warnings", []):
                print(f"warning: {w}")
            print(f"wrote {', '.join(report['artifacts'].values()) or 'no artifacts'}")
            print(f"report: {report['report_path']}")
            return 0
        if args.command == "check":
            cfg = _apply_overrides(load_config(args.config), args)
            report = run_check(cfg)
            print(format_check_table(report))
            return 0
        if args.command == "gallery":
            if args.list or not args.name:
                for name in GALLERY_NAMES:
                    print(name)
                return 0
            cfg = _apply_overrides(gallery_config(args.name), args)
            # run through the gallery runner so the embedded expectations assert
            report = run_gallery(args.name, args.out, cfg)
            extra = {
                k: v
                for k, v in report["gallery"].items()
                if k not in ("name", "description", "pass")
            }
            status = "PASS" if report["gallery"]["pass"] else "FAIL"
            print(f"gallery {args.name}: {status}")
            for k, v in sorted(extra.items()):
                print(f"  {k}: {v:.3e}" if isinstance(v, float) else f"  {k}: {v}")
            print(format_check_table(report))
            return 0
        raise ConfigError(f"unknown command {args.command!r}")
    except IsoclinicError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
