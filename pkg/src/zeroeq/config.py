"""Run configuration: JSON schema, validation, defaults, and named presets.

A configuration is a JSON object; unknown keys are rejected and every parsed
run embeds its fully resolved configuration in the output directory so runs
are reproducible from the artifact alone.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field as dc_field

from .checks import SUPPORT_EPS_REL
from .dynamics import ModelParams, SolverConfig
from .spectral import Grid

KNOWN_CHECKS = (
    "mean_conservation",
    "l1_conservation",
    "sign_invariance",
    "slope_bound",
    "h3_growth",
    "i_functional_identity",
    "support_spreading",
    "radius_lower_bound",
)


class ConfigError(ValueError):
    """Schema violations, reported as (path, message) pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(f"{path}: {msg}" for path, msg in self.errors))


@dataclass
class GridConfig:
    half_length: float = 20.0
    n_points: int = 512

    def build(self) -> Grid:
        return Grid(self.half_length, self.n_points)


@dataclass
class InitialDataSpec:
    family: str = "gaussian_momentum"
    amplitude: float = 1.0
    width: float = 1.0
    center: float = 0.0
    sign: int = 1
    mode: int = 1
    path: str | None = None


@dataclass
class NormRequests:
    """Norm columns to record: Sobolev orders and Kato-Masuda triples."""

    sobolev_s: list[float] = dc_field(default_factory=lambda: [2.0])
    kato_masuda: list[tuple[float, float, int]] = dc_field(
        default_factory=lambda: [(-0.1, 2.0, 10)]
    )


@dataclass
class RadiusSettings:
    sigma0: float = -0.1
    max_j: int = 10


@dataclass
class RunConfig:
    kind: str = "simulation"  # "simulation" | "lifespan_table"
    model: ModelParams = dc_field(default_factory=ModelParams)
    grid: GridConfig = dc_field(default_factory=GridConfig)
    solver: SolverConfig = dc_field(default_factory=SolverConfig)
    initial_data: InitialDataSpec = dc_field(default_factory=InitialDataSpec)
    norms: NormRequests = dc_field(default_factory=NormRequests)
    checks: list[str] = dc_field(default_factory=list)
    radius: RadiusSettings = dc_field(default_factory=RadiusSettings)
    support_eps_rel: float = SUPPORT_EPS_REL
    store_fields: bool = False
    plots: bool = False
    lifespan_ks: list[int] = dc_field(default_factory=lambda: [1, 2, 3, 4])


_SCHEMA = {
    "kind": str,
    "model": {"k": int},
    "grid": {"half_length": float, "n_points": int},
    "solver": {
        "dt": float,
        "t_end": float,
        "dealias_fraction": float,
        "filter_on": bool,
        "snapshot_stride": int,
        "c_m": float,
        "c_s": float,
    },
    "initial_data": {
        "family": str,
        "amplitude": float,
        "width": float,
        "center": float,
        "sign": int,
        "mode": int,
        "path": str,
    },
    "norms": {"sobolev_s": list, "kato_masuda": list},
    "checks": list,
    "radius": {"sigma0": float, "max_j": int},
    "support_eps_rel": float,
    "store_fields": bool,
    "plots": bool,
    "lifespan_ks": list,
}


def _coerce(value, want, path, errors):
    if want is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            errors.append((path, f"expected a number, got {type(value).__name__}"))
            return None
        return float(value)
    if want is int:
        if isinstance(value, bool) or not isinstance(value, int):
            errors.append((path, f"expected an integer, got {type(value).__name__}"))
            return None
        return value
    if want is bool:
        if not isinstance(value, bool):
            errors.append((path, f"expected a boolean, got {type(value).__name__}"))
            return None
        return value
    if want is str:
        if not isinstance(value, str):
            errors.append((path, f"expected a string, got {type(value).__name__}"))
            return None
        return value
    if want is list:
        if not isinstance(value, list):
            errors.append((path, f"expected a list, got {type(value).__name__}"))
            return None
        return value
    raise AssertionError(want)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON configuration document.

    Raises :class:`ConfigError` carrying every (path, message) pair found, so
    a bad document reports all of its problems at once.
    """
    errors: list[tuple[str, str]] = []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("$", f"invalid JSON: {exc}")]) from exc
    if not isinstance(doc, dict):
        raise ConfigError([("$", "top level must be a JSON object")])

    cfg = RunConfig()
    for key, value in doc.items():
        if key not in _SCHEMA:
            errors.append((key, "unknown key"))
            continue
        want = _SCHEMA[key]
        if isinstance(want, dict):
            if not isinstance(value, dict):
                errors.append((key, "expected an object"))
                continue
            fields = {}
            for sub, subval in value.items():
                if sub not in want:
                    errors.append((f"{key}.{sub}", "unknown key"))
                    continue
                coerced = _coerce(subval, want[sub], f"{key}.{sub}", errors)
                if coerced is not None:
                    fields[sub] = coerced
            if key == "model":
                if "k" in fields and fields["k"] >= 1:
                    cfg.model = ModelParams(**fields)
                elif "k" in fields:
                    errors.append(("model.k", "must be >= 1"))
            else:
                section = getattr(cfg, key)
                for sub, coerced in fields.items():
                    setattr(section, sub, coerced)
        else:
            coerced = _coerce(value, want, key, errors)
            if coerced is not None:
                setattr(cfg, key, coerced)

    _validate(cfg, errors)
    if errors:
        raise ConfigError(errors)
    return cfg


def _validate(cfg: RunConfig, errors: list) -> None:
    if cfg.kind not in ("simulation", "lifespan_table"):
        errors.append(("kind", f"unknown kind {cfg.kind!r}"))
    if cfg.kind == "lifespan_table":
        for i, k in enumerate(cfg.lifespan_ks):
            if not isinstance(k, int) or k < 1:
                errors.append((f"lifespan_ks[{i}]", "entries must be integers >= 1"))
        return
    if cfg.model.k < 1:
        errors.append(("model.k", "must be >= 1"))
    if cfg.grid.n_points % 2 != 0 or cfg.grid.n_points < 16:
        errors.append(("grid.n_points", "must be an even integer >= 16"))
    if cfg.grid.half_length <= 0:
        errors.append(("grid.half_length", "must be positive"))
    if cfg.solver.dt <= 0:
        errors.append(("solver.dt", "must be positive"))
    if cfg.solver.t_end < 0:
        errors.append(("solver.t_end", "must be nonnegative"))
    if not 0.0 < cfg.solver.dealias_fraction <= 1.0:
        errors.append(("solver.dealias_fraction", "must lie in (0, 1]"))
    if cfg.solver.snapshot_stride < 1:
        errors.append(("solver.snapshot_stride", "must be a positive integer"))
    if cfg.initial_data.family not in (
        "gaussian_u", "gaussian_momentum", "poisson_kernel",
        "smooth_bump", "single_mode", "file",
    ):
        errors.append(("initial_data.family", f"unknown family {cfg.initial_data.family!r}"))
    if cfg.initial_data.family == "file" and not cfg.initial_data.path:
        errors.append(("initial_data.path", "required for family 'file'"))
    if cfg.initial_data.sign not in (-1, 1):
        errors.append(("initial_data.sign", "must be +1 or -1"))
    for i, s in enumerate(cfg.norms.sobolev_s):
        if isinstance(s, bool) or not isinstance(s, (int, float)):
            errors.append((f"norms.sobolev_s[{i}]", "entries must be numbers"))
    cfg.norms.sobolev_s = [float(s) for s in cfg.norms.sobolev_s
                           if isinstance(s, (int, float)) and not isinstance(s, bool)]
    km: list[tuple[float, float, int]] = []
    for i, entry in enumerate(cfg.norms.kato_masuda):
        ok = (
            isinstance(entry, (list, tuple))
            and len(entry) == 3
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
            and isinstance(entry[2], int)
        )
        if not ok:
            errors.append((f"norms.kato_masuda[{i}]", "entries must be [sigma, s, max_j]"))
            continue
        if entry[2] > 12 or entry[2] < 0:
            errors.append((f"norms.kato_masuda[{i}]", "max_j must lie in 0..12"))
            continue
        km.append((float(entry[0]), float(entry[1]), int(entry[2])))
    cfg.norms.kato_masuda = km
    for i, name in enumerate(cfg.checks):
        if name not in KNOWN_CHECKS:
            errors.append((f"checks[{i}]", f"unknown check {name!r}"))
    if "radius_lower_bound" in cfg.checks:
        if cfg.radius.sigma0 >= 0:
            errors.append(("radius.sigma0", "must be negative"))
        if 2.0 not in cfg.norms.sobolev_s:
            errors.append(
                ("norms.sobolev_s", "the radius bound needs the H^2 norm; include 2")
            )
    if not 0 <= cfg.radius.max_j <= 12:
        errors.append(("radius.max_j", "must lie in 0..12"))
    if cfg.support_eps_rel <= 0:
        errors.append(("support_eps_rel", "must be positive"))


def config_to_dict(cfg: RunConfig) -> dict:
    """Fully resolved configuration as a plain JSON-serialisable dict."""
    return {
        "kind": cfg.kind,
        "model": {"k": cfg.model.k},
        "grid": {"half_length": cfg.grid.half_length, "n_points": cfg.grid.n_points},
        "solver": {
            "dt": cfg.solver.dt,
            "t_end": cfg.solver.t_end,
            "dealias_fraction": cfg.solver.dealias_fraction,
            "filter_on": cfg.solver.filter_on,
            "snapshot_stride": cfg.solver.snapshot_stride,
            "c_m": cfg.solver.c_m,
            "c_s": cfg.solver.c_s,
        },
        "initial_data": {
            "family": cfg.initial_data.family,
            "amplitude": cfg.initial_data.amplitude,
            "width": cfg.initial_data.width,
            "center": cfg.initial_data.center,
            "sign": cfg.initial_data.sign,
            "mode": cfg.initial_data.mode,
            **({"path": cfg.initial_data.path} if cfg.initial_data.path else {}),
        },
        "norms": {
            "sobolev_s": list(cfg.norms.sobolev_s),
            "kato_masuda": [list(e) for e in cfg.norms.kato_masuda],
        },
        "checks": list(cfg.checks),
        "radius": {"sigma0": cfg.radius.sigma0, "max_j": cfg.radius.max_j},
        "support_eps_rel": cfg.support_eps_rel,
        "store_fields": cfg.store_fields,
        "plots": cfg.plots,
        "lifespan_ks": list(cfg.lifespan_ks),
    }


# ---------------------------------------------------------------------------
# Presets: named configuration bundles, one per verification scenario
# ---------------------------------------------------------------------------

PRESETS: dict[str, dict] = {
    "smoke": {
        "model": {"k": 1},
        "grid": {"half_length": 20.0, "n_points": 256},
        "solver": {"dt": 2e-3, "t_end": 0.1, "snapshot_stride": 10},
        "initial_data": {"family": "gaussian_momentum"},
        "checks": ["mean_conservation", "sign_invariance"],
    },
    "conservation_k1": {
        "model": {"k": 1},
        "grid": {"half_length": 20.0, "n_points": 512},
        "solver": {"dt": 1e-3, "t_end": 2.0, "snapshot_stride": 10},
        "initial_data": {"family": "gaussian_momentum"},
        "checks": ["mean_conservation", "l1_conservation"],
    },
    "sign_invariance_k1": {
        "model": {"k": 1},
        "grid": {"half_length": 20.0, "n_points": 512},
        "solver": {"dt": 1e-3, "t_end": 1.0, "snapshot_stride": 5},
        "initial_data": {"family": "gaussian_momentum"},
        "checks": ["sign_invariance"],
    },
    "sign_invariance_k2": {
        "model": {"k": 2},
        "grid": {"half_length": 20.0, "n_points": 512},
        "solver": {"dt": 1e-3, "t_end": 1.0, "snapshot_stride": 5},
        "initial_data": {"family": "gaussian_momentum"},
        "checks": ["sign_invariance"],
    },
    "sign_invariance_k3": {
        "model": {"k": 3},
        "grid": {"half_length": 20.0, "n_points": 512},
        "solver": {"dt": 1e-3, "t_end": 1.0, "snapshot_stride": 5},
        "initial_data": {"family": "gaussian_momentum"},
        "checks": ["sign_invariance"],
    },
    "slope_h3_bounds": {
        "model": {"k": 1},
        "grid": {"half_length": 20.0, "n_points": 512},
        "solver": {"dt": 1e-3, "t_end": 2.0, "snapshot_stride": 10},
        "initial_data": {"family": "gaussian_momentum"},
        "checks": ["slope_bound", "h3_growth"],
    },
    "energy_identity": {
        "model": {"k": 1},
        "grid": {"half_length": 20.0, "n_points": 512},
        "solver": {"dt": 1e-3, "t_end": 0.2, "snapshot_stride": 1},
        "initial_data": {"family": "gaussian_momentum"},
        "checks": ["i_functional_identity"],
    },
    "support": {
        "model": {"k": 1},
        "grid": {"half_length": 30.0, "n_points": 1024},
        "solver": {"dt": 1e-3, "t_end": 0.1, "snapshot_stride": 1},
        "initial_data": {"family": "smooth_bump", "amplitude": 0.5, "width": 1.0},
        "checks": ["support_spreading"],
    },
    "radius_track": {
        "model": {"k": 1},
        "grid": {"half_length": 20.0, "n_points": 512},
        "solver": {"dt": 1e-3, "t_end": 0.02, "snapshot_stride": 1},
        "initial_data": {"family": "poisson_kernel", "width": 2.0},
        "norms": {"sobolev_s": [2.0], "kato_masuda": [[-0.1, 2.0, 10]]},
        "radius": {"sigma0": -0.1, "max_j": 10},
        "checks": ["radius_lower_bound", "sign_invariance"],
    },
    "characteristics_k1": {
        "model": {"k": 1},
        "grid": {"half_length": 20.0, "n_points": 512},
        "solver": {"dt": 1e-3, "t_end": 1.0, "snapshot_stride": 1},
        "initial_data": {"family": "gaussian_momentum", "amplitude": 2.0},
        "checks": ["sign_invariance"],
        "store_fields": True,
    },
    "lifespan_table": {
        "kind": "lifespan_table",
        "lifespan_ks": [1, 2, 3, 4],
    },
}


def load_preset(name: str) -> RunConfig:
    """Parse a named preset into a validated RunConfig."""
    if name not in PRESETS:
        raise ConfigError([("preset", f"unknown preset {name!r}; known: {sorted(PRESETS)}")])
    return parse_config(json.dumps(copy.deepcopy(PRESETS[name])))
