"""Named verification of the model's provable claims against a recorded run.

Each check consumes a :class:`DiagnosticsSeries` (plus initial data where
needed) and produces a :class:`TheoremReport` with one of four verdicts:
pass, fail, inapplicable (hypothesis violated), or diverged. Tolerances are
fixed here, pinned by convergence studies at the reference resolution
N = 512, dt = 1e-3, L = 20.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dynamics import ModelParams, SolverConfig, State, integrate, momentum
from .spaces import (
    DEFAULT_NORM_TRUNCATION,
    analyticity_radius,
    c1_norm,
    himonas_misiolek_norm,
    integral,
    kato_masuda_sq,
    l1_norm,
    sobolev_norm,
)
from .spectral import ConfigurationError, Field, derivative

MEAN_CONSERVATION_TOL = 1e-7
L1_CONSERVATION_TOL = 1e-7
SIGN_TOL_REL = 1e-6
SLOPE_BOUND_SLACK = 1e-6
H3_GROWTH_SLACK = 1e-6
I_IDENTITY_TOL = 1e-3

#: "One-signed" means no excursions beyond this fraction of max|m0|.
SIGN_FLOOR_REL = 1e-12

#: Default relative threshold defining the support interval of u.
SUPPORT_EPS_REL = 1e-10


@dataclass
class TheoremReport:
    """Outcome of one named check."""

    claim: str
    parameters: dict
    measured: float | None
    tolerance: float | None
    verdict: str  # pass | fail | inapplicable | diverged
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "parameters": self.parameters,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "notes": self.notes,
        }


@dataclass
class DiagnosticsSeries:
    """Time-indexed record of every monitored functional of a run.

    ``columns`` maps column name to a list with one entry per snapshot; "t"
    is always present and strictly increasing. ``snapshots`` holds the
    recorded velocity fields when the recorder was asked to store them.
    ``meta`` carries grid and model facts needed by post-processing checks.
    """

    columns: dict[str, list[float]]
    status: str
    meta: dict
    snapshots: list[Field] | None = None

    @property
    def times(self) -> np.ndarray:
        return np.asarray(self.columns["t"])

    def col(self, name: str) -> np.ndarray:
        return np.asarray(self.columns[name])


class DiagnosticsRecorder:
    """Observer that measures every monitored functional at each snapshot.

    Pass its bound :meth:`observe` to :func:`zeroeq.dynamics.integrate`, then
    call :meth:`finalize` with the integration status.
    """

    def __init__(
        self,
        params: ModelParams,
        sobolev_orders: Sequence[float] = (2.0,),
        kato_masuda_requests: Sequence[tuple[float, float, int]] = ((-0.1, 2.0, 10),),
        support_eps_rel: float = SUPPORT_EPS_REL,
        store_fields: bool = False,
    ):
        self.params = params
        self.sobolev_orders = [float(s) for s in sobolev_orders]
        self.km_requests = [(float(a), float(b), int(c)) for a, b, c in kato_masuda_requests]
        self.support_eps_rel = support_eps_rel
        self.store_fields = store_fields
        self.columns: dict[str, list[float]] = {name: [] for name in self.column_names()}
        self.columns["min_u"] = []
        self.columns["max_u"] = []
        self.columns["min_neg_ux"] = []
        self.columns["i_rhs"] = []
        self.columns["edge_abs"] = []
        self.snapshots: list[Field] = []
        self._support_eps: float | None = None
        self._grid = None

    def column_names(self) -> list[str]:
        """CSV column order; a pure function of the requested diagnostics."""
        names = ["t", "mean_u", "l1_u", "l1_m", "min_m", "max_m", "max_neg_ux", "h1", "h3"]
        names += [f"hs_{_fmt(s)}" for s in self.sobolev_orders]
        names += ["c1", "I_functional", "dIdt_residual", "support_lo", "support_hi",
                  "radius_fit", "radius_fit_quality"]
        names += [f"km_sq_{_fmt(a)}_{_fmt(b)}_{c}" for a, b, c in self.km_requests]
        return names

    def observe(self, state: State) -> None:
        u = state.u
        grid = u.grid
        self._grid = grid
        if self._support_eps is None:
            self._support_eps = self.support_eps_rel * float(np.max(np.abs(u.values)))
        m = momentum(u)
        ux = derivative(u, 1)
        uxx = derivative(u, 2)
        uxxx = derivative(u, 3)
        cols = self.columns

        cols["t"].append(state.t)
        cols["mean_u"].append(integral(u))
        cols["l1_u"].append(l1_norm(u))
        cols["l1_m"].append(l1_norm(m))
        cols["min_m"].append(float(m.values.min()))
        cols["max_m"].append(float(m.values.max()))
        cols["max_neg_ux"].append(float(np.max(-ux.values)))
        cols["min_neg_ux"].append(float(np.min(-ux.values)))
        cols["min_u"].append(float(u.values.min()))
        cols["max_u"].append(float(u.values.max()))
        cols["h1"].append(sobolev_norm(u, 1.0))
        cols["h3"].append(sobolev_norm(u, 3.0))
        for s in self.sobolev_orders:
            cols[f"hs_{_fmt(s)}"].append(sobolev_norm(u, s))
        cols["c1"].append(c1_norm(u))
        cols["I_functional"].append(i_functional(u))
        cols["i_rhs"].append(i_functional_rate(u, ux, uxx, uxxx))
        cols["dIdt_residual"].append(math.nan)  # filled in finalize()
        lo, hi = support_interval(u, self._support_eps)
        cols["support_lo"].append(lo)
        cols["support_hi"].append(hi)
        try:
            fit = analyticity_radius(u)
            cols["radius_fit"].append(fit.radius)
            cols["radius_fit_quality"].append(fit.fit_quality)
        except ConfigurationError:
            cols["radius_fit"].append(math.nan)
            cols["radius_fit_quality"].append(math.nan)
        for a, b, c in self.km_requests:
            cols[f"km_sq_{_fmt(a)}_{_fmt(b)}_{c}"].append(kato_masuda_sq(u, a, b, c))
        cols["edge_abs"].append(float(max(abs(u.values[0]), abs(u.values[-1]))))
        if self.store_fields:
            self.snapshots.append(u)

    def finalize(self, status: str) -> DiagnosticsSeries:
        cols = self.columns
        t = np.asarray(cols["t"])
        I = np.asarray(cols["I_functional"])
        rhs_vals = np.asarray(cols["i_rhs"])
        resid = [math.nan] * len(t)
        for i in range(1, len(t) - 1):
            dIdt = (I[i + 1] - I[i - 1]) / (t[i + 1] - t[i - 1])
            resid[i] = float(abs(dIdt - rhs_vals[i]))
        cols["dIdt_residual"] = resid
        meta = {
            "k": self.params.k,
            "support_eps": self._support_eps,
            "support_eps_rel": self.support_eps_rel,
            "sobolev_orders": self.sobolev_orders,
            "kato_masuda_requests": self.km_requests,
        }
        if self._grid is not None:
            meta["half_length"] = self._grid.half_length
            meta["n_points"] = self._grid.n_points
            meta["dx"] = self._grid.dx
        return DiagnosticsSeries(
            columns=cols,
            status=status,
            meta=meta,
            snapshots=self.snapshots if self.store_fields else None,
        )


def _fmt(v: float) -> str:
    return format(v, "g")


def i_functional(u: Field) -> float:
    """I[u] = int 1/4 (u^2 + u_x^2) + 1/2 (u_x^2 + u_xx^2) + 1/2 (u_xx^2 + u_xxx^2) dx."""
    v = u.values
    v1 = derivative(u, 1).values
    v2 = derivative(u, 2).values
    v3 = derivative(u, 3).values
    dens = 0.25 * (v**2 + v1**2) + 0.5 * (v1**2 + v2**2) + 0.5 * (v2**2 + v3**2)
    return float(np.sum(dens) * u.grid.dx)


def i_functional_rate(u: Field, ux=None, uxx=None, uxxx=None) -> float:
    """Spatial side of the energy identity: int (-u_x)(2 u_xx^2 + u_xxx^2 / 2) dx."""
    v1 = (ux or derivative(u, 1)).values
    v2 = (uxx or derivative(u, 2)).values
    v3 = (uxxx or derivative(u, 3)).values
    return float(np.sum((-v1) * (2.0 * v2**2 + 0.5 * v3**2)) * u.grid.dx)


def support_interval(u: Field, eps: float) -> tuple[float, float]:
    """Smallest [lo, hi] containing every node with |u| > eps; NaNs if none."""
    idx = np.nonzero(np.abs(u.values) > eps)[0]
    if idx.size == 0:
        return math.nan, math.nan
    x = u.grid.x
    return float(x[idx[0]]), float(x[idx[-1]])


def _diverged(claim: str, params: dict) -> TheoremReport:
    return TheoremReport(claim, params, None, None, "diverged", "run diverged before t_end")


def _sign_of(m0: Field) -> int | None:
    """+1, -1, or 0 if m0 is one-signed up to SIGN_FLOOR_REL; None otherwise."""
    peak = float(np.max(np.abs(m0.values)))
    if peak == 0.0:
        return 0
    floor = SIGN_FLOOR_REL * peak
    if m0.values.min() >= -floor:
        return 1
    if m0.values.max() <= floor:
        return -1
    return None


def check_mean_conservation(
    series: DiagnosticsSeries, tol: float = MEAN_CONSERVATION_TOL
) -> TheoremReport:
    """Drift of int u dx relative to max(1, |int u0 dx|); k = 1 only."""
    claim = "mean_conservation"
    params = {"k": series.meta["k"], "tol": tol}
    if series.meta["k"] != 1:
        return TheoremReport(claim, params, None, tol, "inapplicable",
                             "the mean of u is conserved only for k = 1")
    if series.status == "diverged":
        return _diverged(claim, params)
    means = series.col("mean_u")
    drift = float(np.max(np.abs(means - means[0]))) / max(1.0, abs(means[0]))
    verdict = "pass" if drift <= tol else "fail"
    return TheoremReport(claim, params, drift, tol, verdict)


def check_l1_conservation(
    series: DiagnosticsSeries, tol: float = L1_CONSERVATION_TOL
) -> TheoremReport:
    """Relative drift of ||u||_L1; k = 1 with u one-signed along the run."""
    claim = "l1_conservation"
    params = {"k": series.meta["k"], "tol": tol}
    if series.meta["k"] != 1:
        return TheoremReport(claim, params, None, tol, "inapplicable",
                             "L1 conservation holds only for k = 1")
    if series.status == "diverged":
        return _diverged(claim, params)
    min_u = series.col("min_u")
    max_u = series.col("max_u")
    scale = float(np.max(np.abs(np.concatenate([min_u, max_u]))))
    floor = SIGN_FLOOR_REL * max(scale, 1e-300)
    signed = bool(np.all(min_u >= -floor) or np.all(max_u <= floor))
    if not signed:
        return TheoremReport(claim, params, None, tol, "inapplicable",
                             "u changes sign along the run")
    l1 = series.col("l1_u")
    if l1[0] == 0.0:
        return TheoremReport(claim, params, 0.0, tol, "pass", "zero data")
    drift = float(np.max(np.abs(l1 - l1[0]))) / l1[0]
    verdict = "pass" if drift <= tol else "fail"
    return TheoremReport(claim, params, drift, tol, verdict)


def check_sign_invariance(
    series: DiagnosticsSeries, m0: Field, tol_rel: float = SIGN_TOL_REL
) -> TheoremReport:
    """One-signed m0 stays one-signed, and u shares the sign, for all t."""
    claim = "sign_invariance"
    sign = _sign_of(m0)
    peak = float(np.max(np.abs(m0.values)))
    params = {"k": series.meta["k"], "sign": sign, "tol_abs": tol_rel * peak}
    if sign is None:
        return TheoremReport(claim, params, None, None, "inapplicable",
                             "m0 changes sign")
    if series.status == "diverged":
        return _diverged(claim, params)
    if sign == 0:
        return TheoremReport(claim, params, 0.0, 0.0, "pass", "zero data")
    tol_abs = tol_rel * peak
    if sign > 0:
        worst = -min(float(series.col("min_m").min()), float(series.col("min_u").min()))
    else:
        worst = max(float(series.col("max_m").max()), float(series.col("max_u").max()))
    verdict = "pass" if worst <= tol_abs else "fail"
    note = "" if series.meta["k"] % 2 == 1 else \
        "even k lacks the u -> -u mirror symmetry; verified by direct run"
    return TheoremReport(claim, params, float(worst), tol_abs, verdict, note)


def check_slope_bound(
    series: DiagnosticsSeries, m0: Field, slack: float = SLOPE_BOUND_SLACK
) -> TheoremReport:
    """max_t max_x (-u_x) <= ||m0||_L1 for one-signed m0, k = 1."""
    claim = "slope_bound"
    kappa = l1_norm(m0)
    params = {"k": series.meta["k"], "kappa": kappa}
    if series.meta["k"] != 1:
        return TheoremReport(claim, params, None, None, "inapplicable", "k must be 1")
    if _sign_of(m0) is None:
        return TheoremReport(claim, params, None, None, "inapplicable", "m0 changes sign")
    if series.status == "diverged":
        return _diverged(claim, params)
    worst = float(series.col("max_neg_ux").max())
    bound = kappa * (1.0 + slack) + 1e-9
    verdict = "pass" if worst <= bound else "fail"
    return TheoremReport(claim, params, worst, bound, verdict)


def check_h3_growth(
    series: DiagnosticsSeries, m0: Field, slack: float = H3_GROWTH_SLACK
) -> TheoremReport:
    """||u(t)||_H3 <= exp(kappa t / 2) ||u0||_H3 with kappa = ||m0||_L1."""
    claim = "h3_growth"
    kappa = l1_norm(m0)
    params = {"k": series.meta["k"], "kappa": kappa}
    if series.meta["k"] != 1:
        return TheoremReport(claim, params, None, None, "inapplicable", "k must be 1")
    if _sign_of(m0) is None:
        return TheoremReport(claim, params, None, None, "inapplicable", "m0 changes sign")
    if series.status == "diverged":
        return _diverged(claim, params)
    t = series.times
    h3 = series.col("h3")
    if h3[0] == 0.0:
        return TheoremReport(claim, params, 0.0, 0.0, "pass", "zero data")
    ratios = h3 / (np.exp(kappa * t / 2.0) * h3[0])
    worst = float(ratios.max())
    bound = 1.0 + slack
    verdict = "pass" if worst <= bound else "fail"
    return TheoremReport(claim, params, worst, bound, verdict)


def check_i_functional_identity(
    series: DiagnosticsSeries, tol: float = I_IDENTITY_TOL
) -> TheoremReport:
    """Centered-difference dI/dt matches int (-u_x)(2 u_xx^2 + u_xxx^2/2) dx.

    Relative to the largest magnitude of the spatial side along the run; the
    residual is O(dt^2) from the time differencing.
    """
    claim = "i_functional_identity"
    params = {"k": series.meta["k"], "tol": tol}
    if series.meta["k"] != 1:
        return TheoremReport(claim, params, None, tol, "inapplicable", "k must be 1")
    if series.status == "diverged":
        return _diverged(claim, params)
    resid = series.col("dIdt_residual")
    rhs_scale = float(np.max(np.abs(series.col("i_rhs"))))
    interior = resid[1:-1] if resid.size > 2 else np.array([])
    if interior.size == 0:
        return TheoremReport(claim, params, None, tol, "inapplicable",
                             "need at least three snapshots")
    if rhs_scale == 0.0:
        worst = float(np.max(interior))
        verdict = "pass" if worst == 0.0 or worst < 1e-300 else "fail"
        return TheoremReport(claim, params, worst, tol, verdict, "stationary run")
    worst = float(np.max(interior)) / rhs_scale
    verdict = "pass" if worst <= tol else "fail"
    return TheoremReport(claim, params, worst, tol, verdict)


def check_support_spreading(series: DiagnosticsSeries) -> TheoremReport:
    """Compactly supported u0 loses compactness instantly.

    Requires the eps-support to be strictly wider on at least one side at the
    first recorded t > 0, and never to contract afterwards (within one grid
    cell, the resolution of the discrete support measurement).
    """
    claim = "support_spreading"
    eps = series.meta.get("support_eps")
    params = {"k": series.meta["k"], "support_eps": eps}
    if series.status == "diverged":
        return _diverged(claim, params)
    lo = series.col("support_lo")
    hi = series.col("support_hi")
    if np.isnan(lo[0]):
        return TheoremReport(claim, params, None, None, "inapplicable", "u0 is zero")
    if lo.size < 2:
        return TheoremReport(claim, params, None, None, "inapplicable",
                             "need at least two snapshots")
    widened = hi[1] > hi[0] or lo[1] < lo[0]
    slack = 0.5 * series.meta.get("dx", 0.0)
    monotone = bool(
        np.all(np.diff(hi) >= -slack) and np.all(np.diff(lo) <= slack)
    )
    initial_width = hi[0] - lo[0]
    final_width = hi[-1] - lo[-1]
    verdict = "pass" if (widened and monotone) else "fail"
    return TheoremReport(
        claim, params, float(final_width - initial_width), None, verdict,
        f"width grew from {initial_width:.6g} to {final_width:.6g}; "
        f"monotone within one cell: {monotone}",
    )


# ---------------------------------------------------------------------------
# Lifespan and analyticity-radius formulas
# ---------------------------------------------------------------------------


def lifespan_coefficient(k: int) -> Fraction:
    """Exact kappa_k at c_m = 1:

        1 / ( [1/(k+1) + 3k/2 + k(k-1)/2] * (2^(2(k+2)) + 8) ).

    k = 1 gives 1/144 and k = 2 gives 1/1144 exactly.
    """
    if k < 1:
        raise ConfigurationError("k must be >= 1")
    bracket = Fraction(1, k + 1) + Fraction(3 * k, 2) + Fraction(k * (k - 1), 2)
    return 1 / (bracket * (2 ** (2 * (k + 2)) + 8))


def lifespan_time(k: int, c_m: float, norm: float) -> float:
    """T = kappa_k / (c_m^k * norm^k) for a given analytic-scale norm of u0."""
    if norm <= 0:
        raise ConfigurationError("norm must be positive")
    return float(lifespan_coefficient(k)) / (c_m**k * norm**k)


def lifespan_bound(
    u0: Field,
    k: int,
    m: int,
    sigma0: float,
    sigma: float,
    c_m: float = 1.0,
    max_j: int = DEFAULT_NORM_TRUNCATION,
) -> float:
    """Guaranteed existence time T * (sigma0 - sigma) on the analytic scale.

    Requires 0 < sigma < sigma0 <= 1 and m >= 3. Scales as norm^{-k}, so
    doubling the norm of u0 divides the bound by 2^k exactly.
    """
    if not 0.0 < sigma0 <= 1.0:
        raise ConfigurationError("sigma0 must lie in (0, 1]")
    if not sigma < sigma0:
        raise ConfigurationError("sigma must be strictly below sigma0")
    if sigma <= 0:
        raise ConfigurationError("sigma must be positive")
    if m < 3:
        raise ConfigurationError("m must be >= 3")
    norm = himonas_misiolek_norm(u0, sigma0, m, max_j)
    return lifespan_time(k, c_m, norm) * (sigma0 - sigma)


def radius_lower_bound(t: float, sigma0: float, u0_km_norm: float, mu: float) -> float:
    """Lower bound exp(sigma(t)) for the analyticity radius of a k = 1 run:

        sigma(t) = sigma0 - A (exp(B t) - 1),
        A = (26 sqrt(2) / (7 mu)) (1 + mu) ||u0||,  B = 112 mu,

    where ||u0|| is the Kato-Masuda norm of u0 at (sigma0, s=2) and
    mu = 1 + max_t ||u||_H2 over the run. Requires mu >= 1 and sigma0 < 0.
    The bound collapses double-exponentially and is highly conservative.
    """
    if mu < 1.0:
        raise ConfigurationError("mu must be >= 1")
    if sigma0 >= 0.0:
        raise ConfigurationError("sigma0 must be negative (strip proxy exp(sigma0) < 1)")
    a_coef = (26.0 * math.sqrt(2.0) / (7.0 * mu)) * (1.0 + mu) * u0_km_norm
    b_coef = 112.0 * mu
    sigma_t = sigma0 - a_coef * math.expm1(b_coef * t)
    return math.exp(sigma_t)


def check_radius_bound(
    series: DiagnosticsSeries,
    u0: Field,
    sigma0: float = -0.1,
    max_j: int = DEFAULT_NORM_TRUNCATION,
) -> TheoremReport:
    """Fitted analyticity radius stays above the double-exponential bound.

    Post-processing pass: mu needs the completed run's max H^2 norm. Records
    the worst fitted/bound ratio (typically astronomically large).
    """
    claim = "radius_lower_bound"
    params = {"k": series.meta["k"], "sigma0": sigma0, "max_j": max_j}
    if series.meta["k"] != 1:
        return TheoremReport(claim, params, None, None, "inapplicable", "k must be 1")
    if series.status == "diverged":
        return _diverged(claim, params)
    h2_col = f"hs_{_fmt(2.0)}"
    if h2_col not in series.columns:
        return TheoremReport(claim, params, None, None, "inapplicable",
                             "run did not record the H^2 norm (needed for mu)")
    mu = 1.0 + float(series.col(h2_col).max())
    km_norm = math.sqrt(kato_masuda_sq(u0, sigma0, 2.0, max_j))
    params["mu"] = mu
    params["u0_km_norm"] = km_norm
    t = series.times
    fitted = series.col("radius_fit")
    worst_ratio = math.inf
    ok = True
    for ti, ri in zip(t, fitted):
        bound = radius_lower_bound(float(ti), sigma0, km_norm, mu)
        if not (ri >= bound or math.isinf(ri)):
            ok = False
        if bound > 0 and math.isfinite(ri):
            worst_ratio = min(worst_ratio, ri / bound)
    measured = None if math.isinf(worst_ratio) else float(worst_ratio)
    verdict = "pass" if ok else "fail"
    return TheoremReport(claim, params, measured, 1.0, verdict,
                         "measured = min_t fitted/bound")


def empirical_energy_ratio(series: DiagnosticsSeries, s: float) -> float:
    """Running max of (d/dt ||u||_Hs) / (||u||_C1 ||u||_Hs) along the run.

    An empirical stand-in for the unspecified embedding constant in the
    energy rate estimate; finite on every resolved run.
    """
    col = f"hs_{_fmt(float(s))}"
    hs = series.col(col)
    c1 = series.col("c1")
    t = series.times
    worst = 0.0
    for i in range(1, len(t) - 1):
        rate = (hs[i + 1] - hs[i - 1]) / (t[i + 1] - t[i - 1])
        denom = c1[i] * hs[i]
        if denom > 0:
            worst = max(worst, rate / denom)
    return float(worst)


def run_with_diagnostics(
    u0: Field,
    cfg: SolverConfig,
    params: ModelParams,
    recorder: DiagnosticsRecorder | None = None,
    **recorder_kwargs,
) -> DiagnosticsSeries:
    """Integrate from u0 and return the assembled diagnostics series."""
    if recorder is None:
        recorder = DiagnosticsRecorder(params, **recorder_kwargs)
    result = integrate(State(0.0, u0), cfg, params, observers=[recorder.observe])
    series = recorder.finalize(result.status)
    series.meta["dt"] = cfg.dt
    series.meta["t_end"] = cfg.t_end
    series.meta["notes"] = result.notes
    return series
