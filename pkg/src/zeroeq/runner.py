"""Experiment orchestration: run a configuration, write the artifacts, and
map outcomes to the exit-status contract.

Exit statuses: 0 all requested checks pass or are inapplicable; 1 at least
one check failed; 2 the trajectory diverged; 3 an I/O failure occurred;
64 is reserved for CLI usage errors.

Artifacts per run directory: diagnostics.csv (one row per snapshot, fixed
column order, floats at 17 significant digits), reports.json (array of
check reports), resolved_config.json, optional SVG plots, and run_log.txt
(the only file allowed to contain wall-clock data).
"""

from __future__ import annotations

import concurrent.futures
import itertools
import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

from . import checks as checks_mod
from .checks import (
    DiagnosticsRecorder,
    DiagnosticsSeries,
    TheoremReport,
    lifespan_coefficient,
    run_with_diagnostics,
)
from .config import ConfigError, RunConfig, config_to_dict, parse_config
from .dynamics import momentum
from .families import make_field
from .spectral import Field

STATUS_OK = 0
STATUS_CHECK_FAILED = 1
STATUS_DIVERGED = 2
STATUS_IO_ERROR = 3
STATUS_USAGE = 64


def _fmt_float(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def write_csv(series: DiagnosticsSeries, names: list[str], path: Path) -> None:
    rows = len(series.columns["t"])
    lines = [",".join(names)]
    for i in range(rows):
        lines.append(",".join(_fmt_float(series.columns[name][i]) for name in names))
    path.write_text("\n".join(lines) + "\n")


def write_reports(reports: list[TheoremReport], path: Path) -> None:
    path.write_text(json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n")


def run_checks(cfg: RunConfig, series: DiagnosticsSeries, u0: Field, m0: Field) -> list[TheoremReport]:
    reports = []
    for name in cfg.checks:
        if name == "mean_conservation":
            reports.append(checks_mod.check_mean_conservation(series))
        elif name == "l1_conservation":
            reports.append(checks_mod.check_l1_conservation(series))
        elif name == "sign_invariance":
            reports.append(checks_mod.check_sign_invariance(series, m0))
        elif name == "slope_bound":
            reports.append(checks_mod.check_slope_bound(series, m0))
        elif name == "h3_growth":
            reports.append(checks_mod.check_h3_growth(series, m0))
        elif name == "i_functional_identity":
            reports.append(checks_mod.check_i_functional_identity(series))
        elif name == "support_spreading":
            reports.append(checks_mod.check_support_spreading(series))
        elif name == "radius_lower_bound":
            reports.append(
                checks_mod.check_radius_bound(series, u0, cfg.radius.sigma0, cfg.radius.max_j)
            )
    return reports


def lifespan_table(ks: list[int], c_m: float = 1.0) -> list[dict]:
    """Rows of the kappa_k table; exact rationals at c_m = 1."""
    rows = []
    for k in ks:
        frac = lifespan_coefficient(k)
        rows.append(
            {
                "k": k,
                "kappa_exact": f"{frac.numerator}/{frac.denominator}",
                "kappa": float(frac) / c_m**k,
                "c_m": c_m,
            }
        )
    return rows


def build_initial_field(cfg: RunConfig) -> Field:
    grid = cfg.grid.build()
    return make_field(
        grid,
        cfg.initial_data.family,
        amplitude=cfg.initial_data.amplitude,
        width=cfg.initial_data.width,
        center=cfg.initial_data.center,
        sign=cfg.initial_data.sign,
        mode=cfg.initial_data.mode,
        path=cfg.initial_data.path,
    )


@dataclass
class ExperimentResult:
    series: DiagnosticsSeries
    reports: list[TheoremReport]
    u0: Field
    m0: Field
    column_names: list[str]


def execute(cfg: RunConfig) -> ExperimentResult:
    """Run a simulation configuration in memory (no artifacts written)."""
    u0 = build_initial_field(cfg)
    m0 = momentum(u0)
    recorder = DiagnosticsRecorder(
        cfg.model,
        sobolev_orders=cfg.norms.sobolev_s,
        kato_masuda_requests=cfg.norms.kato_masuda,
        support_eps_rel=cfg.support_eps_rel,
        store_fields=cfg.store_fields,
    )
    series = run_with_diagnostics(u0, cfg.solver, cfg.model, recorder)
    reports = run_checks(cfg, series, u0, m0)
    return ExperimentResult(series, reports, u0, m0, recorder.column_names())


def write_artifacts(cfg: RunConfig, result: ExperimentResult, out: Path) -> None:
    write_csv(result.series, result.column_names, out / "diagnostics.csv")
    write_reports(result.reports, out / "reports.json")
    (out / "resolved_config.json").write_text(
        json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"
    )
    if cfg.plots:
        from . import plots

        plot_dir = out / "plots"
        plot_dir.mkdir(exist_ok=True)
        plots.plot_norms(result.series, plot_dir / "norms.svg")
        plots.plot_support(result.series, plot_dir / "support.svg")
        if result.series.snapshots:
            plots.plot_spectrum_decay(result.series.snapshots[-1], plot_dir / "spectrum.svg")


def status_of(result: ExperimentResult) -> int:
    if result.series.status == "diverged":
        return STATUS_DIVERGED
    if any(r.verdict == "fail" for r in result.reports):
        return STATUS_CHECK_FAILED
    return STATUS_OK


def run_experiment(cfg: RunConfig, out_dir: str | Path) -> int:
    """Execute one configuration and write its artifacts; returns exit status."""
    t_wall = time.time()
    try:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)

        if cfg.kind == "lifespan_table":
            rows = lifespan_table(cfg.lifespan_ks, cfg.solver.c_m)
            reports = [
                TheoremReport(
                    "lifespan_constant",
                    {"k": row["k"], "c_m": row["c_m"]},
                    row["kappa"],
                    1e-15,
                    "pass",
                    f"kappa = {row['kappa_exact']} at c_m = 1",
                )
                for row in rows
            ]
            write_reports(reports, out / "reports.json")
            (out / "resolved_config.json").write_text(
                json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"
            )
            for row in rows:
                print(f"k={row['k']}: kappa = {row['kappa_exact']} = {row['kappa']:.12e}")
            _write_log(out, "completed", t_wall)
            return STATUS_OK

        result = execute(cfg)
        write_artifacts(cfg, result, out)
        _write_log(out, result.series.status, t_wall)
        return status_of(result)
    except OSError:
        return STATUS_IO_ERROR


def _write_log(out: Path, status: str, t_start: float) -> None:
    (out / "run_log.txt").write_text(
        f"status: {status}\nwall_seconds: {time.time() - t_start:.3f}\n"
    )


# ---------------------------------------------------------------------------
# Parameter sweeps
# ---------------------------------------------------------------------------


def _set_dotted(doc: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = doc
    for key in keys[:-1]:
        node = node.setdefault(key, {})
    node[keys[-1]] = value


def expand_sweep(doc: dict) -> list[tuple[str, dict]]:
    """Cartesian grid of overrides: doc = {"base": {...}, "sweep": {path: [..]}}."""
    if "sweep" not in doc:
        raise ConfigError([("sweep", "sweep document needs a 'sweep' object")])
    base = doc.get("base", {})
    axes = sorted(doc["sweep"].items())
    points = []
    for idx, combo in enumerate(itertools.product(*(vals for _, vals in axes))):
        point = json.loads(json.dumps(base))
        label_parts = []
        for (path, _), value in zip(axes, combo):
            _set_dotted(point, path, value)
            label_parts.append(f"{path}={value}")
        label = f"point_{idx:03d}" + ("_" + "_".join(label_parts) if label_parts else "")
        points.append((label, point))
    return points


def _run_sweep_point(args: tuple[str, dict, str]) -> tuple[str, int]:
    label, doc, out_root = args
    try:
        cfg = parse_config(json.dumps(doc))
    except ConfigError:
        return label, STATUS_USAGE
    status = run_experiment(cfg, Path(out_root) / label)
    return label, status


def run_sweep(doc: dict, out_dir: str | Path, jobs: int = 1) -> int:
    """Run every sweep point into its own subdirectory and write index.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    points = expand_sweep(doc)
    tasks = [(label, point, str(out)) for label, point in points]
    results: list[tuple[str, int]] = []
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_sweep_point, tasks))
    else:
        results = [_run_sweep_point(t) for t in tasks]
    index = [
        {"dir": label, "overrides": point, "exit_status": status}
        for (label, point), (_, status) in zip(points, results)
    ]
    try:
        (out / "index.json").write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    except OSError:
        return STATUS_IO_ERROR
    worst = max((status for _, status in results), default=STATUS_OK)
    return worst
