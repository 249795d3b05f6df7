"""Named initial-data families and the on-disk field format.

Families on a periodic box realise their whole-line counterparts either by
direct sampling (when the profile decays below roundoff at the edges) or by
spectral synthesis from the closed-form transform, which is the exact
periodisation of the line profile.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .dynamics import velocity_from_momentum
from .spectral import ConfigurationError, Field, Grid, Spectrum, to_field

FAMILIES = (
    "gaussian_u",
    "gaussian_momentum",
    "poisson_kernel",
    "smooth_bump",
    "single_mode",
    "file",
)


def gaussian(grid: Grid, amplitude: float = 1.0, width: float = 1.0, center: float = 0.0) -> Field:
    """A exp(-((x - c)/w)^2), sampled directly."""
    x = grid.x
    return Field(grid, amplitude * np.exp(-(((x - center) / width) ** 2)))


def gaussian_momentum(
    grid: Grid, amplitude: float = 1.0, width: float = 1.0, center: float = 0.0
) -> Field:
    """u with momentum u - u_xx equal to a Gaussian bump exactly.

    One-signed momentum by construction (for one sign of the amplitude).
    """
    return velocity_from_momentum(gaussian(grid, amplitude, width, center))


def poisson_kernel(
    grid: Grid, amplitude: float = 1.0, width: float = 1.0, center: float = 0.0
) -> Field:
    """Periodised Poisson kernel A * a / (pi (x^2 + a^2)) with a = width.

    Synthesised spectrally from the closed-form transform
    A exp(-a |xi|) / sqrt(2 pi), so the coefficients decay exactly
    exponentially on the box; the strip of analyticity has half-width a.
    """
    if width <= 0:
        raise ConfigurationError("poisson_kernel width must be positive")
    xi = grid.wavenumbers
    coeffs = amplitude * np.exp(-width * np.abs(xi)) / math.sqrt(2.0 * math.pi)
    coeffs = coeffs * np.exp(-1j * xi * center)
    return to_field(Spectrum(grid, coeffs))


def smooth_bump(
    grid: Grid, amplitude: float = 1.0, width: float = 1.0, center: float = 0.0
) -> Field:
    """C-infinity bump A exp(1 - 1/(1 - ((x-c)/w)^2)) supported on |x-c| < w.

    Exactly zero outside the support; smooth but not analytic, so it is the
    canonical compactly supported probe.
    """
    x = (grid.x - center) / width
    inside = np.abs(x) < 1.0
    vals = np.zeros(grid.n_points)
    arg = 1.0 - x[inside] ** 2
    vals[inside] = amplitude * np.exp(1.0 - 1.0 / arg)
    return Field(grid, vals)


def single_mode(
    grid: Grid, amplitude: float = 1.0, mode: int = 1, center: float = 0.0
) -> Field:
    """A cos(pi j (x - c) / L) for integer mode j."""
    x = grid.x
    return Field(
        grid, amplitude * np.cos(np.pi * mode * (x - center) / grid.half_length)
    )


def save_field(f: Field, path: str | Path) -> None:
    """Write a field as JSON: {"half_length": L, "values": [...]}."""
    doc = {"half_length": f.grid.half_length, "values": f.values.tolist()}
    Path(path).write_text(json.dumps(doc))


def load_field(path: str | Path) -> Field:
    """Read a field written by :func:`save_field`."""
    doc = json.loads(Path(path).read_text())
    try:
        half_length = float(doc["half_length"])
        values = np.asarray(doc["values"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed field file {path}: {exc}") from exc
    grid = Grid(half_length, len(values))
    return Field(grid, values)


def make_field(
    grid: Grid,
    family: str,
    amplitude: float = 1.0,
    width: float = 1.0,
    center: float = 0.0,
    sign: int = 1,
    mode: int = 1,
    path: str | None = None,
) -> Field:
    """Construct initial data from a named family."""
    if family not in FAMILIES:
        raise ConfigurationError(
            f"unknown initial-data family {family!r}; choose one of {FAMILIES}"
        )
    amp = amplitude * sign
    if family == "gaussian_u":
        return gaussian(grid, amp, width, center)
    if family == "gaussian_momentum":
        return gaussian_momentum(grid, amp, width, center)
    if family == "poisson_kernel":
        return poisson_kernel(grid, amp, width, center)
    if family == "smooth_bump":
        return smooth_bump(grid, amp, width, center)
    if family == "single_mode":
        return single_mode(grid, amp, mode, center)
    if path is None:
        raise ConfigurationError("family 'file' requires a path")
    f = load_field(path)
    if f.grid != grid:
        raise ConfigurationError(
            f"field file grid (L={f.grid.half_length}, N={f.grid.n_points}) does not "
            f"match the configured grid (L={grid.half_length}, N={grid.n_points})"
        )
    if sign != 1 or amplitude != 1.0:
        f = Field(grid, amp * f.values)
    return f
