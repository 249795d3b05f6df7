"""Function-space diagnostics: Sobolev, Gevrey, and factorially weighted
analytic norms, plus a Paley-Wiener estimator for the radius of analyticity.

All spectral norms use the single quadrature convention of the grid: Riemann
sums over xi_j with weight dxi = pi/L, so that they approximate the
corresponding whole-line integrals for data that decays at the box edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .spectral import (
    DEFAULT_MAX_DERIVATIVE_ORDER,
    ConfigurationError,
    Field,
    Grid,
    derivative,
    to_spectrum,
)

#: Series/sup cutoff for the factorially weighted norms.
DEFAULT_NORM_TRUNCATION = 10

#: Band used by the radius fit: coefficients within these relative magnitudes.
RADIUS_FIT_FLOOR = 1e-13
RADIUS_FIT_CEILING = 1e-2

#: Mean second difference of the log-spectrum below this value marks
#: super-exponential decay (entire function, radius +inf).
CONVEXITY_THRESHOLD = -1e-3

#: Minimum usable points for a trustworthy radius fit.
RADIUS_MIN_POINTS = 8

#: A weighted spectral sum is tail-dominated when the top tenth of the
#: resolved wavenumber range (|xi| >= 0.9 xi_max) contributes more than this
#: fraction: the true norm is then infinite or the field is under-resolved.
TAIL_FRACTION = 0.10


def _abs_coeffs_sq(f: Field) -> np.ndarray:
    c = to_spectrum(f).coeffs
    return (c * np.conj(c)).real


def _sobolev_sq_from_mag2(grid: Grid, mag2: np.ndarray, s: float) -> float:
    w = (1.0 + grid.wavenumbers**2) ** s
    return float(np.sum(w * mag2) * grid.dxi)


def sobolev_norm(f: Field, s: float) -> float:
    """H^s norm: (sum_j (1+xi_j^2)^s |fhat_j|^2 dxi)^(1/2).

    Nondecreasing in s. Negative s is accepted as a documented extension.
    """
    return math.sqrt(_sobolev_sq_from_mag2(f.grid, _abs_coeffs_sq(f), s))


class GevreyNorm(NamedTuple):
    """Value of a Gevrey norm together with its reliability flag.

    ``tail_dominated`` is set when the top decade of wavenumbers carries more
    than 10% of the weighted sum, signalling that the true norm is infinite
    or the field is under-resolved for this sigma.
    """

    value: float
    tail_dominated: bool


def gevrey_norm(f: Field, sigma: float, s: float) -> GevreyNorm:
    """G^{sigma,s} norm: H^s weight times exp(2*sigma*|xi|) under the sum.

    sigma = 0 reduces exactly to :func:`sobolev_norm`. Requires sigma >= 0.
    """
    if sigma < 0:
        raise ConfigurationError("gevrey_norm requires sigma >= 0")
    g = f.grid
    mag2 = _abs_coeffs_sq(f)
    axi = np.abs(g.wavenumbers)
    with np.errstate(over="ignore"):
        terms = (1.0 + axi**2) ** s * np.exp(2.0 * sigma * axi) * mag2
    total = float(np.sum(terms) * g.dxi)
    if not np.isfinite(total):
        return GevreyNorm(math.inf, True)
    if total == 0.0:
        return GevreyNorm(0.0, False)
    top = axi >= 0.9 * axi.max()
    tail = float(np.sum(terms[top]) * g.dxi)
    return GevreyNorm(math.sqrt(total), tail / total > TAIL_FRACTION)


def _derivative_mag2_sequence(f: Field, max_j: int) -> list[np.ndarray]:
    """|fhat|^2 for f, f', .., f^(max_j), built by cumulative xi^2 weighting.

    The Nyquist mode is dropped from every derivative term, matching the
    convention of :func:`zeroeq.spectral.derivative` for odd orders.
    """
    if max_j > DEFAULT_MAX_DERIVATIVE_ORDER:
        raise ConfigurationError(
            f"truncation {max_j} exceeds the derivative-order cap "
            f"{DEFAULT_MAX_DERIVATIVE_ORDER}"
        )
    g = f.grid
    mag2 = _abs_coeffs_sq(f)
    out = [mag2]
    xi2 = g.wavenumbers**2
    cur = mag2.copy()
    cur[g._nyquist_index] = 0.0
    for _ in range(max_j):
        cur = cur * xi2
        out.append(cur)
    return out


def kato_masuda_terms(
    f: Field, sigma: float, s: float, max_j: int = DEFAULT_NORM_TRUNCATION
) -> np.ndarray:
    """Terms exp(2*sigma*j)/(j!)^2 * ||d^j f||_{H^s}^2 for j = 0..max_j."""
    seq = _derivative_mag2_sequence(f, max_j)
    g = f.grid
    return np.array(
        [
            math.exp(2.0 * sigma * j) / math.factorial(j) ** 2
            * _sobolev_sq_from_mag2(g, m2, s)
            for j, m2 in enumerate(seq)
        ]
    )


def kato_masuda_sq(
    f: Field, sigma: float, s: float, max_j: int = DEFAULT_NORM_TRUNCATION
) -> float:
    """Squared Kato-Masuda norm, truncated at max_j:

        sum_{j=0}^{J} exp(2*sigma*j)/(j!)^2 * ||d^j f||_{H^s}^2.

    Monotone in both J and sigma; J = 0 equals sobolev_norm(f, s)^2 exactly.
    The strip proxy is exp(sigma), so sigma is typically negative.
    """
    return float(np.sum(kato_masuda_terms(f, sigma, s, max_j)))


def himonas_misiolek_norm(
    f: Field, sigma: float, m: int, max_j: int = DEFAULT_NORM_TRUNCATION
) -> float:
    """Sup-type analytic norm max_{j<=J} sigma^j (j+1)^2 / j! * ||d^j f||_{H^{2m}}.

    Requires 0 < sigma <= 1 and m >= 1; nondecreasing in m. J = 0 reduces to
    sobolev_norm(f, 2m).
    """
    if not 0.0 < sigma <= 1.0:
        raise ConfigurationError("himonas_misiolek_norm requires sigma in (0, 1]")
    if m < 1:
        raise ConfigurationError("himonas_misiolek_norm requires m >= 1")
    seq = _derivative_mag2_sequence(f, max_j)
    g = f.grid
    best = 0.0
    for j, m2 in enumerate(seq):
        w = sigma**j * (j + 1) ** 2 / math.factorial(j)
        best = max(best, w * math.sqrt(_sobolev_sq_from_mag2(g, m2, 2 * m)))
    return best


def c1_norm(f: Field) -> float:
    """max|f| + max|f'| on the grid."""
    return float(np.max(np.abs(f.values)) + np.max(np.abs(derivative(f, 1).values)))


def l1_norm(f: Field) -> float:
    """sum |f(x_i)| dx."""
    return float(np.sum(np.abs(f.values)) * f.grid.dx)


def integral(f: Field) -> float:
    """sum f(x_i) dx, the grid realisation of the line integral of f."""
    return float(np.sum(f.values) * f.grid.dx)


@dataclass(frozen=True)
class RadiusFit:
    """Result of the analyticity-radius fit.

    ``radius`` is -slope of log|fhat| against |xi| over the fitting band, the
    Paley-Wiener width of the analyticity strip; math.inf when the log
    spectrum is concave enough to indicate super-exponential decay.
    ``fit_quality`` is the coefficient of determination of the linear fit.
    """

    radius: float
    fit_quality: float
    n_points: int
    super_exponential: bool = False
    low_quality: bool = False


def analyticity_radius(
    f: Field,
    rel_floor: float = RADIUS_FIT_FLOOR,
    rel_ceiling: float = RADIUS_FIT_CEILING,
    convexity_threshold: float = CONVEXITY_THRESHOLD,
    min_points: int = RADIUS_MIN_POINTS,
) -> RadiusFit:
    """Estimate the strip of analyticity from the decay of |fhat(xi)|.

    Fits log|fhat| ~ a - radius*|xi| by least squares over the positive modes
    with |fhat| between ``rel_floor`` and ``rel_ceiling`` times the spectral
    maximum. A mean second difference of the log spectrum below
    ``convexity_threshold`` marks super-exponential decay (radius +inf).
    """
    g = f.grid
    c = to_spectrum(f).coeffs
    mags = np.abs(c)
    peak = float(mags.max())
    if peak == 0.0:
        raise ConfigurationError("analyticity_radius is undefined for the zero field")

    pos = g.mode_numbers >= 1
    xi = g.wavenumbers[pos]
    mag = mags[pos]
    order = np.argsort(xi)
    xi, mag = xi[order], mag[order]
    band = (mag > rel_floor * peak) & (mag < rel_ceiling * peak)
    xb, mb = xi[band], mag[band]

    n = int(band.sum())
    low_quality = n < min_points
    if n < 2:
        return RadiusFit(math.nan, 0.0, n, low_quality=True)

    logs = np.log(mb)
    design = np.vstack([xb, np.ones(n)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, logs, rcond=None)
    pred = design @ np.array([slope, intercept])
    ss_res = float(np.sum((logs - pred) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    quality = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    super_exp = False
    if n >= 3:
        super_exp = bool(np.mean(np.diff(logs, 2)) < convexity_threshold)
    radius = math.inf if super_exp else -float(slope)
    return RadiusFit(radius, quality, n, super_exponential=super_exp, low_quality=low_quality)
