import math

import numpy as np
import pytest

from zeroeq import (
    ConfigurationError,
    Field,
    Grid,
    analyticity_radius,
    c1_norm,
    derivative,
    gevrey_norm,
    helmholtz_inverse,
    himonas_misiolek_norm,
    integral,
    kato_masuda_sq,
    kato_masuda_terms,
    l1_norm,
    sobolev_norm,
)
from zeroeq.families import poisson_kernel

from conftest import random_band_limited, riemann_spectral_sum


class TestSobolevNorm:
    def test_zero(self, grid):
        assert sobolev_norm(Field(grid, np.zeros(grid.n_points)), 2.0) == 0.0

    def test_sine_l2(self):
        # integral of sin^2 over one period is pi
        g = Grid(np.pi, 64)
        f = Field(g, np.sin(g.x))
        assert abs(sobolev_norm(f, 0.0) - math.sqrt(math.pi)) <= 1e-10

    def test_gaussian_h2_vs_quadrature_oracle(self, gaussian):
        g = gaussian.grid
        oracle_sq = riemann_spectral_sum(
            g, lambda xi: (1.0 + xi**2) ** 2 * np.exp(-(xi**2) / 2.0) / 2.0
        )
        assert abs(sobolev_norm(gaussian, 2.0) - math.sqrt(oracle_sq)) <= 1e-8

    def test_monotone_in_s(self, grid):
        f = random_band_limited(grid, 4)
        norms = [sobolev_norm(f, s) for s in (0.0, 0.5, 1.0, 2.0, 3.5)]
        assert all(a <= b * (1 + 1e-14) for a, b in zip(norms, norms[1:]))


class TestGevreyNorm:
    def test_sigma_zero_equals_sobolev(self, gaussian):
        got = gevrey_norm(gaussian, 0.0, 1.5)
        assert got.value == sobolev_norm(gaussian, 1.5)
        assert not got.tail_dominated

    def test_poisson_kernel_finite_matches_oracle(self, grid):
        # a = 2, sigma = 1: integrand decays like exp(-2|xi|); N = 256 keeps
        # the exp(2|xi|) weight from amplifying the spectral noise floor
        a = 2.0
        f = poisson_kernel(grid, width=a)
        got = gevrey_norm(f, 1.0, 0.0)
        oracle_sq = riemann_spectral_sum(
            grid, lambda xi: np.exp(2.0 * np.abs(xi)) * np.exp(-2.0 * a * np.abs(xi)) / (2 * np.pi)
        )
        assert not got.tail_dominated
        assert abs(got.value - math.sqrt(oracle_sq)) <= 1e-6 * math.sqrt(oracle_sq)

    def test_divergent_sigma_sets_tail_flag(self, grid):
        f = poisson_kernel(grid, width=2.0)
        got = gevrey_norm(f, 3.0, 0.0)
        assert got.tail_dominated

    def test_negative_sigma_rejected(self, gaussian):
        with pytest.raises(ConfigurationError):
            gevrey_norm(gaussian, -0.5, 0.0)

    def test_monotone_in_sigma_and_s(self, grid):
        f = random_band_limited(grid, 8)
        v = [gevrey_norm(f, s_, 1.0).value for s_ in (0.0, 0.2, 0.5)]
        assert v[0] <= v[1] <= v[2]
        w = [gevrey_norm(f, 0.3, s_).value for s_ in (0.0, 1.0, 2.0)]
        assert w[0] <= w[1] <= w[2]


class TestKatoMasuda:
    def test_zero(self, grid):
        assert kato_masuda_sq(Field(grid, np.zeros(grid.n_points)), -0.1, 2.0, 5) == 0.0

    def test_j0_equals_sobolev_squared(self, gaussian):
        got = kato_masuda_sq(gaussian, -0.3, 2.0, 0)
        assert got == pytest.approx(sobolev_norm(gaussian, 2.0) ** 2, rel=1e-15)

    def test_single_mode_partial_sum(self):
        # every derivative of cos(x) on L = pi has the same H^s norm, so the
        # truncated sum is ||cos||^2 * sum_j exp(2 sigma j)/(j!)^2
        g = Grid(np.pi, 64)
        f = Field(g, np.cos(g.x))
        sigma, s, J = -0.2, 1.0, 6
        base = sobolev_norm(f, s) ** 2
        partial = sum(math.exp(2 * sigma * j) / math.factorial(j) ** 2 for j in range(J + 1))
        assert kato_masuda_sq(f, sigma, s, J) == pytest.approx(base * partial, rel=1e-12)

    def test_monotone_in_truncation_and_sigma(self, grid):
        f = random_band_limited(grid, 12)
        vals = [kato_masuda_sq(f, -0.1, 2.0, J) for J in (0, 2, 5, 10)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        sig = [kato_masuda_sq(f, s_, 2.0, 6) for s_ in (-1.0, -0.5, -0.1)]
        assert sig[0] <= sig[1] <= sig[2]

    def test_truncation_cap(self, gaussian):
        with pytest.raises(ConfigurationError):
            kato_masuda_sq(gaussian, -0.1, 2.0, 13)

    def test_terms_agree_with_explicit_derivatives(self, grid):
        f = random_band_limited(grid, 30, max_mode=10)
        terms = kato_masuda_terms(f, -0.2, 1.0, 4)
        for j in range(5):
            d = f
            for _ in range(j):
                d = derivative(d, 1)
            expected = math.exp(-0.4 * j) / math.factorial(j) ** 2 * sobolev_norm(d, 1.0) ** 2
            assert terms[j] == pytest.approx(expected, rel=1e-10)


class TestHimonasMisiolekNorm:
    def test_zero(self, grid):
        assert himonas_misiolek_norm(Field(grid, np.zeros(grid.n_points)), 0.5, 1, 5) == 0.0

    def test_j0_is_sobolev_2m(self, gaussian):
        assert himonas_misiolek_norm(gaussian, 0.5, 2, 0) == sobolev_norm(gaussian, 4.0)

    def test_monotone_in_m(self, grid):
        for seed in range(20):
            f = random_band_limited(grid, seed, max_mode=15)
            a = himonas_misiolek_norm(f, 0.5, 1, 8)
            b = himonas_misiolek_norm(f, 0.5, 2, 8)
            assert a <= b * (1 + 1e-14)

    def test_domain_checks(self, gaussian):
        with pytest.raises(ConfigurationError):
            himonas_misiolek_norm(gaussian, 1.5, 1)
        with pytest.raises(ConfigurationError):
            himonas_misiolek_norm(gaussian, 0.5, 0)


class TestPointwiseNorms:
    def test_zero(self, grid):
        z = Field(grid, np.zeros(grid.n_points))
        assert c1_norm(z) == 0.0 and l1_norm(z) == 0.0

    def test_sine_closed_form(self):
        # |sin| has kinks, so the L1 quadrature needs a fine grid for 1e-6
        g = Grid(np.pi, 8192)
        f = Field(g, np.sin(g.x))
        assert abs(c1_norm(f) - 2.0) <= 1e-6
        assert abs(l1_norm(f) - 4.0) <= 1e-6

    def test_gaussian_l1(self, gaussian):
        assert abs(l1_norm(gaussian) - math.sqrt(math.pi)) <= 1e-8

    def test_integral_gaussian(self, gaussian):
        assert abs(integral(gaussian) - math.sqrt(math.pi)) <= 1e-8


class TestAnalyticityRadius:
    def test_poisson_kernel_recovers_width(self, grid512):
        fit = analyticity_radius(poisson_kernel(grid512, width=1.5))
        assert not fit.super_exponential
        assert abs(fit.radius - 1.5) <= 0.05 * 1.5
        assert fit.fit_quality > 0.999
        assert fit.n_points >= 8

    def test_gaussian_flags_infinite(self, gaussian512):
        fit = analyticity_radius(gaussian512)
        assert fit.super_exponential
        assert math.isinf(fit.radius)

    def test_sech_recovers_pi_over_2(self):
        # direct sampling works here: sech decays to ~2e-13 at L = 30
        g = Grid(30.0, 512)
        f = Field(g, 1.0 / np.cosh(g.x))
        fit = analyticity_radius(f)
        assert abs(fit.radius - math.pi / 2.0) <= 0.05 * (math.pi / 2.0)

    def test_zero_field_rejected(self, grid):
        with pytest.raises(ConfigurationError):
            analyticity_radius(Field(grid, np.zeros(grid.n_points)))

    def test_low_quality_flag_with_few_points(self):
        # a single mode leaves almost no band to fit
        g = Grid(10.0, 64)
        f = Field(g, np.cos(np.pi * g.x / 10.0) + 1e-8 * np.cos(3 * np.pi * g.x / 10.0))
        fit = analyticity_radius(f)
        assert fit.low_quality


class TestSpaceIdentities:
    def test_helmholtz_shifts_sobolev_index(self, grid):
        for seed in range(5):
            f = random_band_limited(grid, seed)
            for s in (0.0, 1.0, 2.5):
                a = sobolev_norm(helmholtz_inverse(f), s + 2.0)
                b = sobolev_norm(f, s)
                assert abs(a - b) <= 1e-10 * max(b, 1.0)

    def test_helmholtz_analytic_scale_smoothing(self, grid):
        for seed in range(5):
            f = random_band_limited(grid, seed)
            lhs = himonas_misiolek_norm(helmholtz_inverse(f), 0.5, 2, 8)
            rhs = himonas_misiolek_norm(f, 0.5, 1, 8)
            assert lhs <= rhs * (1 + 1e-10)

    def test_derivative_loses_one_sigma_power(self, grid):
        # ||d_x f|| at sigma' is controlled by ||f|| at sigma > sigma'
        sigma = 0.8
        for seed, sigma_p in [(1, 0.2), (2, 0.4), (3, 0.6)]:
            f = random_band_limited(grid, seed, max_mode=12)
            lhs = himonas_misiolek_norm(derivative(f, 1), sigma_p, 1, 7)
            rhs = himonas_misiolek_norm(f, sigma, 1, 8) / (sigma - sigma_p)
            assert lhs <= rhs * (1 + 1e-8)

    def test_product_norm_ratio_bounded(self, grid):
        # the algebra constant is unspecified; record the observed ratio
        worst = 0.0
        for seed in range(10):
            f = random_band_limited(grid, seed, max_mode=10)
            g_ = random_band_limited(grid, seed + 100, max_mode=10)
            prod = Field(grid, f.values * g_.values)
            num = himonas_misiolek_norm(prod, 0.5, 1, 6)
            den = himonas_misiolek_norm(f, 0.5, 1, 6) * himonas_misiolek_norm(g_, 0.5, 1, 6)
            assert den > 0
            worst = max(worst, num / den)
        assert math.isfinite(worst)
        print(f"\nobserved product-norm ratio bound: {worst:.4f}")

    def test_gevrey_controls_kato_masuda_convergence(self, grid):
        # finite unflagged Gevrey norm at sigma implies the factorial sum
        # converges at every sigma' with exp(sigma') < sigma
        sigma = 0.5
        for seed in range(5):
            f = random_band_limited(grid, seed, max_mode=15)
            gv = gevrey_norm(f, sigma, 1.0)
            assert not gv.tail_dominated
            sigma_p = math.log(sigma) - 0.2
            terms = kato_masuda_terms(f, sigma_p, 1.0, 10)
            total = float(np.sum(terms))
            assert math.isfinite(total)
            assert terms[-1] <= 1e-6 * total  # converged well before the cutoff
