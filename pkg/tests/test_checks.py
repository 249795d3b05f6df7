import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeroeq import (
    ConfigurationError,
    Field,
    Grid,
    ModelParams,
    SolverConfig,
    check_h3_growth,
    check_i_functional_identity,
    check_l1_conservation,
    check_mean_conservation,
    check_radius_bound,
    check_sign_invariance,
    check_slope_bound,
    check_support_spreading,
    empirical_energy_ratio,
    lifespan_bound,
    lifespan_coefficient,
    lifespan_time,
    momentum,
    radius_lower_bound,
    run_with_diagnostics,
)
from zeroeq.checks import DiagnosticsRecorder, DiagnosticsSeries
from zeroeq.families import gaussian_momentum, poisson_kernel, smooth_bump


@pytest.fixture(scope="module")
def short_run():
    grid = Grid(20.0, 256)
    u0 = gaussian_momentum(grid)
    cfg = SolverConfig(dt=2e-3, t_end=0.2, snapshot_stride=10)
    series = run_with_diagnostics(u0, cfg, ModelParams(1))
    return u0, momentum(u0), series


@pytest.fixture(scope="module")
def zero_run():
    grid = Grid(20.0, 256)
    u0 = Field(grid, np.zeros(grid.n_points))
    cfg = SolverConfig(dt=1e-2, t_end=0.05, snapshot_stride=1)
    series = run_with_diagnostics(u0, cfg, ModelParams(1))
    return u0, momentum(u0), series


class TestLifespanFormulas:
    def test_k1_constant_exact(self):
        assert lifespan_coefficient(1) == Fraction(1, 144)

    def test_k2_constant_exact(self):
        # bracket 1/3 + 3 + 1 = 13/3, times 2^8 + 8 = 264: 1144
        assert lifespan_coefficient(2) == Fraction(1, 1144)

    def test_float_value_matches_fraction(self):
        assert abs(lifespan_time(1, 1.0, 1.0) - 1.0 / 144.0) <= 1e-15 / 144.0

    @given(
        norm=st.floats(min_value=1e-3, max_value=1e3),
        k=st.integers(min_value=1, max_value=5),
    )
    @settings(max_examples=50, deadline=None)
    def test_doubling_norm_scales_by_2_pow_k(self, norm, k):
        a = lifespan_time(k, 1.0, norm)
        b = lifespan_time(k, 1.0, 2.0 * norm)
        assert b == pytest.approx(a / 2.0**k, rel=1e-12)

    def test_lifespan_bound_on_field(self, grid):
        u0 = gaussian_momentum(grid)
        t1 = lifespan_bound(u0, k=1, m=3, sigma0=1.0, sigma=0.5)
        t2 = lifespan_bound(u0, k=1, m=3, sigma0=1.0, sigma=0.25)
        assert t1 > 0
        assert t2 == pytest.approx(t1 * 0.75 / 0.5, rel=1e-12)

    def test_lifespan_bound_rejects_bad_sigmas(self, grid):
        u0 = gaussian_momentum(grid)
        with pytest.raises(ConfigurationError):
            lifespan_bound(u0, 1, 3, sigma0=0.5, sigma=0.5)
        with pytest.raises(ConfigurationError):
            lifespan_bound(u0, 1, 3, sigma0=1.5, sigma=0.5)
        with pytest.raises(ConfigurationError):
            lifespan_bound(u0, 1, 2, sigma0=1.0, sigma=0.5)


class TestRadiusBoundFormula:
    def test_t_zero_is_exp_sigma0(self):
        assert radius_lower_bound(0.0, -0.25, 3.0, 1.7) == pytest.approx(
            math.exp(-0.25), rel=1e-15
        )

    def test_unit_l1_closed_form(self):
        # mu = 1 and norm = 7/(52 sqrt(2)) make the prefactor exactly 1, so
        # the bound is r(0) * e * exp(-exp(112 t))
        sigma0 = -0.3
        norm = 7.0 / (52.0 * math.sqrt(2.0))
        for t in (0.0, 0.005, 0.01):
            expected = math.exp(sigma0) * math.e * math.exp(-math.exp(112.0 * t))
            got = radius_lower_bound(t, sigma0, norm, 1.0)
            assert got == pytest.approx(expected, rel=1e-12)

    def test_domain_checks(self):
        with pytest.raises(ConfigurationError):
            radius_lower_bound(0.1, -0.1, 1.0, 0.5)
        with pytest.raises(ConfigurationError):
            radius_lower_bound(0.1, 0.1, 1.0, 1.5)


class TestConservationChecks:
    def test_mean_pass_on_short_run(self, short_run):
        _, _, series = short_run
        rep = check_mean_conservation(series)
        assert rep.verdict == "pass"
        assert rep.measured <= 1e-7

    def test_mean_inapplicable_for_k2(self, grid):
        u0 = gaussian_momentum(grid, amplitude=0.5)
        series = run_with_diagnostics(
            u0, SolverConfig(dt=5e-3, t_end=0.05), ModelParams(2)
        )
        assert check_mean_conservation(series).verdict == "inapplicable"

    def test_mean_zero_data(self, zero_run):
        _, _, series = zero_run
        rep = check_mean_conservation(series)
        assert rep.verdict == "pass" and rep.measured == 0.0

    def test_mean_absolute_for_odd_data(self, grid):
        # odd initial data integrates to ~0; drift is then measured absolutely
        u0 = Field(grid, grid.x * np.exp(-grid.x**2))
        series = run_with_diagnostics(u0, SolverConfig(dt=2e-3, t_end=0.05), ModelParams(1))
        rep = check_mean_conservation(series)
        assert abs(series.col("mean_u")[0]) < 1e-12
        assert rep.verdict == "pass"

    def test_l1_pass_on_signed_run(self, short_run):
        _, _, series = short_run
        rep = check_l1_conservation(series)
        assert rep.verdict == "pass"
        assert rep.measured <= 1e-7

    def test_l1_inapplicable_for_sign_changing_u(self, grid):
        u0 = Field(grid, grid.x * np.exp(-grid.x**2))
        series = run_with_diagnostics(u0, SolverConfig(dt=2e-3, t_end=0.05), ModelParams(1))
        assert check_l1_conservation(series).verdict == "inapplicable"

    def test_l1_zero_data(self, zero_run):
        _, _, series = zero_run
        assert check_l1_conservation(series).verdict == "pass"


class TestSignInvariance:
    def test_positive_momentum_passes(self, short_run):
        _, m0, series = short_run
        rep = check_sign_invariance(series, m0)
        assert rep.verdict == "pass"

    def test_mirrored_negative_momentum(self, grid):
        # k odd: u -> -u is a symmetry, so the mirrored data must also pass
        u0 = gaussian_momentum(grid, amplitude=-1.0)
        series = run_with_diagnostics(u0, SolverConfig(dt=2e-3, t_end=0.1), ModelParams(1))
        rep = check_sign_invariance(series, momentum(u0))
        assert rep.parameters["sign"] == -1
        assert rep.verdict == "pass"

    def test_even_k_direct_run_notes(self, grid):
        u0 = gaussian_momentum(grid, amplitude=-0.5)
        series = run_with_diagnostics(u0, SolverConfig(dt=2e-3, t_end=0.1), ModelParams(2))
        rep = check_sign_invariance(series, momentum(u0))
        assert rep.verdict == "pass"
        assert "direct run" in rep.notes

    def test_zero_momentum_trivial_pass(self, zero_run):
        _, m0, series = zero_run
        assert check_sign_invariance(series, m0).verdict == "pass"

    def test_sign_changing_momentum_inapplicable(self, grid, short_run):
        _, _, series = short_run
        m0 = Field(grid, grid.x * np.exp(-grid.x**2))
        assert check_sign_invariance(series, m0).verdict == "inapplicable"


class TestStructuralBounds:
    def test_slope_bound(self, short_run):
        _, m0, series = short_run
        rep = check_slope_bound(series, m0)
        assert rep.verdict == "pass"
        assert rep.measured <= rep.parameters["kappa"]

    def test_h3_growth(self, short_run):
        _, m0, series = short_run
        rep = check_h3_growth(series, m0)
        assert rep.verdict == "pass"

    def test_h3_bound_tight_at_t0(self, short_run):
        # the growth bound holds with equality at t = 0
        _, m0, series = short_run
        rep = check_h3_growth(series, m0)
        kappa = rep.parameters["kappa"]
        h3 = series.col("h3")
        t = series.times
        bound0 = math.exp(kappa * t[0] / 2.0) * h3[0]
        assert h3[0] == bound0
        assert rep.measured >= 1.0 - 1e-12

    def test_inapplicable_for_k3(self, grid):
        u0 = gaussian_momentum(grid, amplitude=0.5)
        series = run_with_diagnostics(u0, SolverConfig(dt=2e-3, t_end=0.05), ModelParams(3))
        assert check_slope_bound(series, momentum(u0)).verdict == "inapplicable"
        assert check_h3_growth(series, momentum(u0)).verdict == "inapplicable"


class TestIFunctionalIdentity:
    def test_zero_run(self, zero_run):
        _, _, series = zero_run
        rep = check_i_functional_identity(series)
        assert rep.verdict == "pass"

    def test_stride_one_run_passes(self, grid):
        u0 = gaussian_momentum(grid)
        series = run_with_diagnostics(
            u0, SolverConfig(dt=2e-3, t_end=0.1, snapshot_stride=1), ModelParams(1)
        )
        rep = check_i_functional_identity(series)
        assert rep.verdict == "pass"
        assert rep.measured <= 1e-3

    def test_needs_three_snapshots(self, grid):
        u0 = gaussian_momentum(grid)
        series = run_with_diagnostics(u0, SolverConfig(dt=1e-2, t_end=0.01), ModelParams(1))
        assert check_i_functional_identity(series).verdict == "inapplicable"


class TestSupportSpreading:
    def test_bump_spreads_and_never_contracts(self):
        grid = Grid(30.0, 1024)
        u0 = smooth_bump(grid, amplitude=0.5, width=1.0)
        series = run_with_diagnostics(
            u0, SolverConfig(dt=1e-3, t_end=0.02, snapshot_stride=1), ModelParams(1)
        )
        rep = check_support_spreading(series)
        assert rep.verdict == "pass"
        assert rep.measured > 0  # net widening

    def test_zero_data_inapplicable(self, zero_run):
        _, _, series = zero_run
        assert check_support_spreading(series).verdict == "inapplicable"

    def test_frozen_control_shows_no_spread(self):
        # control: with t_end = 0 there is exactly one snapshot and no claim
        grid = Grid(30.0, 1024)
        u0 = smooth_bump(grid, amplitude=0.5, width=1.0)
        series = run_with_diagnostics(u0, SolverConfig(dt=1e-3, t_end=0.0), ModelParams(1))
        assert check_support_spreading(series).verdict == "inapplicable"
        lo, hi = series.col("support_lo")[0], series.col("support_hi")[0]
        assert -1.0 <= lo <= -0.9 and 0.9 <= hi <= 1.0


class TestRadiusBoundCheck:
    def test_poisson_run_passes_with_large_margin(self, grid512):
        u0 = poisson_kernel(grid512, width=2.0)
        series = run_with_diagnostics(
            u0,
            SolverConfig(dt=1e-3, t_end=0.01, snapshot_stride=1),
            ModelParams(1),
            sobolev_orders=[2.0],
        )
        rep = check_radius_bound(series, u0, sigma0=-0.1)
        assert rep.verdict == "pass"
        assert rep.measured is None or rep.measured >= 1.0

    def test_missing_h2_column_inapplicable(self, grid):
        u0 = poisson_kernel(grid, width=2.0)
        series = run_with_diagnostics(
            u0,
            SolverConfig(dt=2e-3, t_end=0.01),
            ModelParams(1),
            sobolev_orders=[3.5],
        )
        assert check_radius_bound(series, u0).verdict == "inapplicable"


class TestSeriesInvariants:
    def test_times_strictly_increasing(self, short_run):
        _, _, series = short_run
        assert np.all(np.diff(series.times) > 0)

    def test_all_columns_finite_on_completed_run(self, short_run):
        # radius_fit may legitimately carry the +inf flag for entire data
        _, _, series = short_run
        for name, vals in series.columns.items():
            arr = np.asarray(vals)
            if name == "dIdt_residual":
                assert np.all(np.isfinite(arr[1:-1]))
            elif name == "radius_fit":
                assert not np.any(np.isnan(arr))
            else:
                assert np.all(np.isfinite(arr)), name

    def test_empirical_energy_ratio_finite(self, short_run):
        _, _, series = short_run
        ratio = empirical_energy_ratio(series, 2.0)
        assert math.isfinite(ratio)
        print(f"\nempirical energy-rate constant along the run: {ratio:.4f}")

    def test_sign_and_transport_consistency(self, grid512):
        # when momentum is carried along particles to within tolerance and
        # m0 >= 0, the sign check cannot fail
        from zeroeq import evolve_flow, transport_residual

        u0 = gaussian_momentum(grid512)
        m0 = momentum(u0)
        recorder = DiagnosticsRecorder(ModelParams(1), store_fields=True)
        series = run_with_diagnostics(
            u0, SolverConfig(dt=2e-3, t_end=0.2, snapshot_stride=1), ModelParams(1), recorder
        )
        maps = evolve_flow(list(series.times), series.snapshots, ModelParams(1))
        residual = transport_residual(maps[-1], m0, momentum(series.snapshots[-1]))
        tol_abs = 1e-6 * float(np.max(np.abs(m0.values)))
        assert residual <= tol_abs
        assert check_sign_invariance(series, m0).verdict == "pass"
