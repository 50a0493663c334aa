"""Batch command-line front end.

Subcommands map one-to-one onto the reproduction artifacts: `point` for a
single evaluation (JSON to stdout), `sweep` and `region` for CSV files
driven by a JSON config, `peak` for the velocity maximizer at one (d,
omega), and `validate` for the self-check report. All configuration is
explicit; no environment variables are consulted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .model import (
    DetectorSettings,
    EncounterGeometry,
    find_peak_velocity,
    negativity,
    spacelike_min_distance,
)
from .quadrature import QuadratureSettings
from .sweep import GridSpec, SweepSpec, run_sweep, run_region_scan, write_region_csv, write_sweep_csv
from .validate import run_validation


def _quad_from_args(base: QuadratureSettings, args: argparse.Namespace) -> QuadratureSettings:
    overrides = {}
    for name in ("rel_tol", "abs_tol", "truncation_sigmas", "max_subdivisions"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return replace(base, **overrides) if overrides else base


def _add_quad_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    parser.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
    parser.add_argument("--truncation-sigmas", dest="truncation_sigmas", type=float, default=None)
    parser.add_argument("--max-subdivisions", dest="max_subdivisions", type=int, default=None)


def _cmd_point(args: argparse.Namespace) -> int:
    quad = _quad_from_args(QuadratureSettings(), args)
    det = DetectorSettings(sigma=args.sigma, omega=args.omega)
    geom = EncounterGeometry(d=args.d, v=args.v)
    q = negativity(det, geom, quad)
    payload = {
        "d_over_sigma": geom.d / det.sigma,
        "v": geom.v,
        "sigma_omega": det.gap,
        "p": q.p,
        "x_re": q.x.real,
        "x_im": q.x.imag,
        "x_abs": abs(q.x),
        "m": q.m,
        "negativity": q.negativity,
        "x_error_estimate": q.x_error_estimate,
        "spacelike": geom.d >= spacelike_min_distance(geom.v, det.sigma),
    }
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = SweepSpec.from_json(args.config)
    spec = replace(spec, quad=_quad_from_args(spec.quad, args))
    rows = run_sweep(spec, workers=args.workers)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        write_sweep_csv(rows, fh, spec.outputs)
    failures = sum(1 for row in rows if row.error)
    if failures:
        print(f"{failures}/{len(rows)} points failed; see the error column", file=sys.stderr)
        return 1
    return 0


def _cmd_peak(args: argparse.Namespace) -> int:
    quad = _quad_from_args(QuadratureSettings(), args)
    det = DetectorSettings(sigma=args.sigma, omega=args.omega)
    peak = find_peak_velocity(det, args.d, quad)
    payload = {"d_over_sigma": args.d / args.sigma, "sigma_omega": det.gap}
    if peak is None:
        payload["peak"] = None
    else:
        payload["peak"] = {
            "v_star": peak.v_star,
            "n_star": peak.n_star,
            "multimodal": peak.multimodal,
        }
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_region(args: argparse.Namespace) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    d_grid = GridSpec.from_dict(cfg["d_over_sigma"])
    omega_grid = GridSpec.from_dict(cfg["sigma_omega"])
    quad = _quad_from_args(QuadratureSettings(**cfg.get("quadrature", {})), args)
    rows = run_region_scan(d_grid, omega_grid, quad, workers=args.workers)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        write_region_csv(rows, fh)
    failures = sum(1 for row in rows if row.error)
    if failures:
        print(f"{failures}/{len(rows)} points failed; see the error column", file=sys.stderr)
        return 1
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    quad = _quad_from_args(QuadratureSettings(), args)
    report = run_validation(grid=args.grid, quad=quad)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status} {check['name']}", file=sys.stderr)
    return 0 if report["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entharvest",
        description="Negativity harvested by two inertially moving detectors",
    )
    parser.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", help="evaluate one parameter point, JSON to stdout")
    p_point.add_argument("--d", type=float, required=True)
    p_point.add_argument("--v", type=float, required=True)
    p_point.add_argument("--omega", type=float, required=True)
    p_point.add_argument("--sigma", type=float, default=1.0)
    _add_quad_flags(p_point)
    p_point.set_defaults(func=_cmd_point)

    p_sweep = sub.add_parser("sweep", help="grid sweep to CSV")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    _add_quad_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_peak = sub.add_parser("peak", help="velocity maximizer at one (d, omega)")
    p_peak.add_argument("--d", type=float, required=True)
    p_peak.add_argument("--omega", type=float, required=True)
    p_peak.add_argument("--sigma", type=float, default=1.0)
    _add_quad_flags(p_peak)
    p_peak.set_defaults(func=_cmd_peak)

    p_region = sub.add_parser("region", help="(d, omega) region classification to CSV")
    p_region.add_argument("--config", required=True)
    p_region.add_argument("--out", required=True)
    _add_quad_flags(p_region)
    p_region.set_defaults(func=_cmd_region)

    p_val = sub.add_parser("validate", help="run the self-check battery")
    p_val.add_argument("--grid", choices=("coarse", "full"), default="full")
    p_val.add_argument("--out", default=None)
    _add_quad_flags(p_val)
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
