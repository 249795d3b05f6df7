"""Shared fixtures and independent oracle helpers.

Oracles here deliberately avoid the library's FFT code paths: finite
difference stencils, direct quadrature, and direct series summation, so that
tests compare two genuinely different routes to the same quantity.
"""

import numpy as np
import pytest

from zeroeq import Field, Grid


@pytest.fixture
def grid() -> Grid:
    return Grid(20.0, 256)


@pytest.fixture
def grid512() -> Grid:
    return Grid(20.0, 512)


@pytest.fixture
def gaussian(grid) -> Field:
    return Field(grid, np.exp(-grid.x**2))


@pytest.fixture
def gaussian512(grid512) -> Field:
    return Field(grid512, np.exp(-grid512.x**2))


def random_band_limited(grid: Grid, seed: int, max_mode: int = 20, scale: float = 1.0) -> Field:
    """Real field with random coefficients on modes 1..max_mode, zero beyond."""
    rng = np.random.default_rng(seed)
    vals = np.zeros(grid.n_points)
    x = grid.x
    L = grid.half_length
    for j in range(1, max_mode + 1):
        a, b = rng.standard_normal(2) / j
        vals += a * np.cos(np.pi * j * x / L) + b * np.sin(np.pi * j * x / L)
    return Field(grid, scale * vals)


def fd_derivative_2(values: np.ndarray, dx: float) -> np.ndarray:
    """Second-order centered second difference on a periodic grid."""
    return (np.roll(values, -1) - 2.0 * values + np.roll(values, 1)) / dx**2


def fd1_order4(values: np.ndarray, dx: float) -> np.ndarray:
    """Fourth-order centered first difference on a periodic grid."""
    return (
        8.0 * (np.roll(values, -1) - np.roll(values, 1))
        - (np.roll(values, -2) - np.roll(values, 2))
    ) / (12.0 * dx)


def fd2_order4(values: np.ndarray, dx: float) -> np.ndarray:
    """Fourth-order centered second difference on a periodic grid."""
    return (
        -(np.roll(values, -2) + np.roll(values, 2))
        + 16.0 * (np.roll(values, -1) + np.roll(values, 1))
        - 30.0 * values
    ) / (12.0 * dx**2)


def trapezoid_green(values: np.ndarray, x: np.ndarray, dx: float) -> np.ndarray:
    """Plain trapezoid quadrature of the exp(-|x-y|)/2 convolution.

    No kink correction: accurate only to O(dx^2); used where that suffices.
    """
    kernel = 0.5 * np.exp(-np.abs(x[:, None] - x[None, :]))
    return kernel @ values * dx


def direct_series_sum(grid: Grid, coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Naive mode-by-mode summation of the truncated Fourier series."""
    out = np.zeros(len(points), dtype=complex)
    for j, c in zip(grid.mode_numbers, coeffs):
        out += c * np.exp(1j * j * grid.dxi * points)
    return (out * grid.dxi / np.sqrt(2.0 * np.pi)).real


def riemann_spectral_sum(grid: Grid, integrand_of_xi) -> float:
    """Riemann sum over the grid wavenumbers with weight dxi.

    The quadrature convention shared by all discrete norms; the integrand is
    supplied in closed form, independent of any FFT.
    """
    xi = grid.wavenumbers
    return float(np.sum(integrand_of_xi(xi)) * grid.dxi)
