"""Command-line interface.

Subcommands: simulate | verify | norms | lifespan | radius-track |
characteristics | sweep. Usage errors exit with status 64; check failures
with 1; diverged runs with 2; I/O failures with 3.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import runner
from .checks import lifespan_time
from .config import PRESETS, ConfigError, load_preset, parse_config
from .dynamics import momentum
from .spectral import ConfigurationError
from .families import load_field
from .flow import evolve_flow, transport_residual
from .runner import (
    STATUS_IO_ERROR,
    STATUS_OK,
    STATUS_USAGE,
    _fmt_float,
    run_experiment,
    run_sweep,
)
from .spaces import (
    analyticity_radius,
    c1_norm,
    gevrey_norm,
    himonas_misiolek_norm,
    kato_masuda_sq,
    l1_norm,
    sobolev_norm,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage failures raise instead of exiting 2."""

    def error(self, message):
        raise _UsageError(message)


def _load_config(args) -> "RunConfig":
    if getattr(args, "preset", None):
        return load_preset(args.preset)
    if getattr(args, "config", None):
        return parse_config(Path(args.config).read_text())
    raise _UsageError("one of --preset or --config is required")


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    cfg.checks = []
    return run_experiment(cfg, args.out)


def _cmd_verify(args) -> int:
    cfg = _load_config(args)
    return run_experiment(cfg, args.out)


def _cmd_norms(args) -> int:
    f = load_field(args.field)
    report: dict = {
        "half_length": f.grid.half_length,
        "n_points": f.grid.n_points,
        "l1": l1_norm(f),
        "c1": c1_norm(f),
        "sobolev": {format(s, "g"): sobolev_norm(f, s) for s in args.sobolev},
    }
    for sigma, s in args.gevrey:
        val = gevrey_norm(f, sigma, s)
        report.setdefault("gevrey", {})[f"{sigma:g},{s:g}"] = {
            "value": val.value,
            "tail_dominated": val.tail_dominated,
        }
    for sigma, s, max_j in args.km:
        report.setdefault("kato_masuda_sq", {})[f"{sigma:g},{s:g},{int(max_j)}"] = (
            kato_masuda_sq(f, sigma, s, int(max_j))
        )
    for sigma, m, max_j in args.em:
        report.setdefault("himonas_misiolek", {})[f"{sigma:g},{int(m)},{int(max_j)}"] = (
            himonas_misiolek_norm(f, sigma, int(m), int(max_j))
        )
    fit = analyticity_radius(f)
    report["radius"] = {
        "value": "inf" if math.isinf(fit.radius) else fit.radius,
        "fit_quality": fit.fit_quality,
        "n_points": fit.n_points,
        "super_exponential": fit.super_exponential,
        "low_quality": fit.low_quality,
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.json_out:
        Path(args.json_out).write_text(text + "\n")
    print(text)
    return STATUS_OK


def _cmd_lifespan(args) -> int:
    if args.table:
        from .runner import lifespan_table

        for row in lifespan_table(list(range(1, args.max_k + 1)), args.cm):
            print(f"k={row['k']}: kappa = {row['kappa_exact']} = {row['kappa']:.12e}")
        return STATUS_OK
    if args.norm is None:
        raise _UsageError("--norm is required unless --table is given")
    if not 0 < args.sigma0 <= 1:
        raise _UsageError("--sigma0 must lie in (0, 1]")
    if not 0 < args.sigma < args.sigma0:
        raise _UsageError("--sigma must lie in (0, sigma0)")
    bound = lifespan_time(args.k, args.cm, args.norm) * (args.sigma0 - args.sigma)
    print(_fmt_float(bound))
    return STATUS_OK


def _cmd_radius_track(args) -> int:
    cfg = _load_config(args)
    if "radius_lower_bound" not in cfg.checks:
        cfg.checks = list(cfg.checks) + ["radius_lower_bound"]
    if 2.0 not in cfg.norms.sobolev_s:
        cfg.norms.sobolev_s = list(cfg.norms.sobolev_s) + [2.0]
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        result = runner.execute(cfg)
        runner.write_artifacts(cfg, result, out)
    except OSError:
        return STATUS_IO_ERROR
    status = runner.status_of(result)
    if status == 2:
        return status
    bound_params = next(
        (r.parameters for r in result.reports if r.claim == "radius_lower_bound"), None
    )
    lines = ["t,radius_fit,radius_bound,ratio"]
    if bound_params and "mu" in bound_params:
        from .checks import radius_lower_bound as rb

        series = result.series
        for t, fit in zip(series.times, series.col("radius_fit")):
            bound = rb(
                float(t), bound_params["sigma0"], bound_params["u0_km_norm"], bound_params["mu"]
            )
            ratio = math.inf if bound == 0 else fit / bound
            lines.append(",".join(_fmt_float(float(v)) for v in (t, fit, bound, ratio)))
    try:
        (out / "radius_track.csv").write_text("\n".join(lines) + "\n")
    except OSError:
        return STATUS_IO_ERROR
    return status


def _cmd_characteristics(args) -> int:
    cfg = _load_config(args)
    cfg.store_fields = True
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        result = runner.execute(cfg)
        runner.write_artifacts(cfg, result, out)
    except OSError:
        return STATUS_IO_ERROR
    status = runner.status_of(result)
    if status == 2:
        return status
    series = result.series
    maps = evolve_flow(list(series.times), series.snapshots, cfg.model)
    m_t = momentum(series.snapshots[-1])
    residual = transport_residual(maps[-1], result.m0, m_t)
    try:
        lines = ["t," + ",".join(format(s, ".17g") for s in maps[0].seeds)]
        for fm in maps:
            lines.append(
                _fmt_float(fm.t) + "," + ",".join(_fmt_float(p) for p in fm.positions)
            )
        (out / "flow_map.csv").write_text("\n".join(lines) + "\n")
        (out / "characteristics_report.json").write_text(
            json.dumps(
                {
                    "t_final": maps[-1].t,
                    "transport_residual": residual,
                    "monotone": all(fm.monotone for fm in maps),
                    "n_seeds": int(maps[0].seeds.size),
                },
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
    except OSError:
        return STATUS_IO_ERROR
    print(f"transport residual at t={maps[-1].t:g}: {residual:.6e}")
    return status


def _cmd_sweep(args) -> int:
    doc = json.loads(Path(args.config).read_text())
    return run_sweep(doc, args.out, jobs=args.jobs)


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected sigma,s")
    return float(parts[0]), float(parts[1])


def _triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated values")
    return float(parts[0]), float(parts[1]), float(parts[2])


def build_parser() -> _Parser:
    parser = _Parser(prog="zeroeq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p):
        p.add_argument("--config", help="path to a JSON configuration")
        p.add_argument("--preset", help=f"named preset; one of {sorted(PRESETS)}")
        p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("simulate", help="bare integration, CSV diagnostics only")
    add_config_args(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="run the configured checks")
    add_config_args(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("norms", help="one-shot norm report for a field file")
    p.add_argument("--field", required=True, help="JSON field file")
    p.add_argument("--sobolev", type=float, action="append", default=[0.0, 1.0, 2.0],
                   help="Sobolev order to report (repeatable)")
    p.add_argument("--gevrey", type=_pair, action="append", default=[],
                   metavar="SIGMA,S")
    p.add_argument("--km", type=_triple, action="append", default=[],
                   metavar="SIGMA,S,MAXJ")
    p.add_argument("--em", type=_triple, action="append", default=[],
                   metavar="SIGMA,M,MAXJ")
    p.add_argument("--json-out", dest="json_out", help="also write the report here")
    p.set_defaults(func=_cmd_norms)

    p = sub.add_parser("lifespan", help="guaranteed-existence-time calculator")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--cm", type=float, default=1.0)
    p.add_argument("--norm", type=float, help="analytic-scale norm of u0")
    p.add_argument("--sigma0", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--table", action="store_true", help="print the kappa table")
    p.add_argument("--max-k", dest="max_k", type=int, default=4)
    p.set_defaults(func=_cmd_lifespan)

    p = sub.add_parser("radius-track", help="radius fit with the decay-bound overlay")
    add_config_args(p)
    p.set_defaults(func=_cmd_radius_track)

    p = sub.add_parser("characteristics", help="particle flow and transport residual")
    add_config_args(p)
    p.set_defaults(func=_cmd_characteristics)

    p = sub.add_parser("sweep", help="cartesian parameter sweep")
    p.add_argument("--config", required=True, help="sweep document (base + sweep)")
    p.add_argument("--out", default="sweep_out")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return STATUS_USAGE
    except ConfigError as exc:
        print(f"configuration error:\n{exc}", file=sys.stderr)
        return STATUS_USAGE
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return STATUS_USAGE
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return STATUS_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return STATUS_IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
