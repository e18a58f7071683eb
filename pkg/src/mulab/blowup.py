"""Blow-up criteria with explicit breakdown-time bounds, observed
breakdown estimation and blow-up rate fitting.

Five sufficient criteria are evaluated from initial data alone.  For the
muCH family (lambda = 2):

* ``mu_ch_ratio``  - holds when (sqrt(3)/pi) |mu0| < mu1; the time bound
  is minimized over a free parameter alpha in an open interval whose
  endpoints make the bound diverge.
* ``mu_ch_slope``  - the complementary regime (sqrt(3)/pi) |mu0| >= mu1
  with a sufficiently steep initial slope inf u0' < -K.
* ``mu_ch_h2``     - based on the sign/size of the invariant H2.

For the muDP family (lambda = 3):

* ``mu_dp_sign``   - holds when mu0 * Ht2 <= 0 (a sign condition on the
  cubic invariant); the bound needs a grid point where mu0 * u0 <= 0.
* ``mu_dp_ratio``  - holds when |mu0| < sqrt((32 pi^2 - 9)/(32 pi^2)) mu2,
  again with an alpha-minimized bound.

Observed breakdown: near breakdown inf u_x behaves like -sigma/(T - t)
with sigma = 2 for muCH and sigma = 1 for muDP, so -1/inf u_x is fitted
linearly in t; the t-intercept estimates T and -1/slope estimates sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple, Optional

import numpy as np

from .diagnostics import conserved_mu_ch, conserved_mu_dp
from .evolution import ModelParams, SolutionRecord
from .field import PeriodicField, derivative, mean

SQRT3 = math.sqrt(3.0)
PI = math.pi

MU_CH_CRITERIA = ("mu_ch_ratio", "mu_ch_slope", "mu_ch_h2")
MU_DP_CRITERIA = ("mu_dp_sign", "mu_dp_ratio")
ALL_CRITERIA = MU_CH_CRITERIA + MU_DP_CRITERIA

RATE_LIMIT = {2.0: 2.0, 3.0: 1.0}


class ResolutionError(RuntimeError):
    """The hypothesis guarantees an admissible point but the grid has none."""


@dataclass(frozen=True)
class CriterionResult:
    criterion: str
    family: str
    applicable: bool
    hypothesis_holds: bool
    t_bound: Optional[float]
    detail: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "family": self.family,
            "applicable": self.applicable,
            "hypothesis_holds": self.hypothesis_holds,
            "t_bound": self.t_bound,
            "detail": dict(self.detail),
        }


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_EDGE_MARGIN = 1e-9


def _minimize_on_open_interval(fn, lo: float, hi: float) -> tuple[float, float]:
    """Golden-section minimum of fn on (lo, hi), log-parameterized.

    The objective diverges at both endpoints, so the bracket is pulled in
    by a small relative margin.  The interval midpoint (geometric mean) is
    always evaluated as a candidate, guaranteeing the result is no worse
    than the midpoint value.
    """
    a = math.log(lo * (1.0 + _EDGE_MARGIN))
    b = math.log(hi * (1.0 - _EDGE_MARGIN))
    g = lambda s: fn(math.exp(s))
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = g(c), g(d)
    for _ in range(200):
        if b - a < 1e-12:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = g(d)
    s_best, f_best = (c, fc) if fc < fd else (d, fd)
    s_mid = 0.5 * (math.log(lo) + math.log(hi))
    f_mid = g(s_mid)
    if f_mid < f_best:
        s_best, f_best = s_mid, f_mid
    return math.exp(s_best), f_best


def mu_ch_ratio_criterion(mu0: float, mu1: float, i3: float) -> CriterionResult:
    """muCH criterion from the mean/slope-energy ratio.

    Holds when (sqrt(3)/pi) |mu0| < mu1 (with mu1 > 0).  The bound

        T <= inf_alpha [ 6/(1 - 6 alpha |mu0|)
                         + 4 pi^2 alpha (1 + |i3|)
                           / (6 pi^2 alpha mu1^4 - 3 |mu0| mu1^2) ]

    is minimized over alpha in (|mu0|/(2 pi^2 mu1^2), 1/(6 |mu0|)); for
    mu0 = 0 the interval is (0, inf) and the bound is alpha-independent.
    """
    holds = mu1 > 0 and (SQRT3 / PI) * abs(mu0) < mu1
    if not holds:
        return CriterionResult("mu_ch_ratio", "mu_ch", True, False, None)
    if mu0 == 0.0:
        bound = 6.0 + 2.0 * (1.0 + abs(i3)) / (3.0 * mu1**4)
        return CriterionResult(
            "mu_ch_ratio", "mu_ch", True, True, bound, {"alpha": None}
        )
    lo = abs(mu0) / (2.0 * PI**2 * mu1**2)
    hi = 1.0 / (6.0 * abs(mu0))

    def bound_at(alpha):
        return 6.0 / (1.0 - 6.0 * alpha * abs(mu0)) + (
            4.0 * PI**2 * alpha * (1.0 + abs(i3))
        ) / (6.0 * PI**2 * alpha * mu1**4 - 3.0 * abs(mu0) * mu1**2)

    alpha, bound = _minimize_on_open_interval(bound_at, lo, hi)
    return CriterionResult(
        "mu_ch_ratio", "mu_ch", True, True, bound, {"alpha": alpha}
    )


def mu_ch_slope_criterion(
    mu0: float, mu1: float, inf_u0x: float
) -> CriterionResult:
    """muCH criterion for steep initial slope in the large-mean regime.

    Holds when (sqrt(3)/pi) |mu0| >= mu1 and inf u0' < -K with
    K = sqrt(2 mu1 ((sqrt(3)/3) |mu0| - mu1/2)); then

        T <= -2 / (inf u0' + sqrt(-K inf u0')).
    """
    if (SQRT3 / PI) * abs(mu0) < mu1:
        return CriterionResult("mu_ch_slope", "mu_ch", True, False, None)
    k_sq = 2.0 * mu1 * ((SQRT3 / 3.0) * abs(mu0) - 0.5 * mu1)
    if k_sq < 0.0:
        return CriterionResult("mu_ch_slope", "mu_ch", True, False, None)
    K = math.sqrt(k_sq)
    if not inf_u0x < -K:
        return CriterionResult(
            "mu_ch_slope", "mu_ch", True, False, None, {"K": K}
        )
    bound = -2.0 / (inf_u0x + math.sqrt(-K * inf_u0x))
    return CriterionResult(
        "mu_ch_slope", "mu_ch", True, True, bound, {"K": K}
    )


def mu_ch_h2_criterion(
    mu0: float, mu1: float, h2: float, i3: float
) -> CriterionResult:
    """muCH criterion from the invariant H2.

    Holds when mu1^4 + 4 mu0^2 mu1^2 > 8 mu0 H2 (in particular whenever
    mu0 H2 <= 0 with mu1 > 0); then

        T <= 6 + (1 + |i3|) / ((3/2) mu1^4 + 6 mu0^2 mu1^2 - 12 mu0 H2).
    """
    denom = 1.5 * mu1**4 + 6.0 * mu0**2 * mu1**2 - 12.0 * mu0 * h2
    holds = mu1 > 0 and denom > 0.0
    if not holds:
        return CriterionResult("mu_ch_h2", "mu_ch", True, False, None)
    bound = 6.0 + (1.0 + abs(i3)) / denom
    return CriterionResult("mu_ch_h2", "mu_ch", True, True, bound)


def mu_dp_sign_criterion(u0: PeriodicField) -> CriterionResult:
    """muDP criterion from the sign of mu0 * Ht2.

    Holds when mu0 * Ht2 <= 0.  For mu0 != 0 the bound is

        T <= 1 + (1 + |u0'(xi0)|) / (3 mu0^2)

    where xi0 is a point with mu0 * u0(xi0) <= 0; the admissible grid
    point minimizing |u0'| is chosen to make the bound tightest.  For
    mu0 = 0 the criterion holds with no quantitative bound (the muBurgers
    regime, covered by prior results).
    """
    mu0 = mean(u0)
    ht2 = conserved_mu_dp(u0)[2]
    holds = mu0 * ht2 <= 0.0
    if not holds:
        return CriterionResult(
            "mu_dp_sign", "mu_dp", True, False, None, {"ht2": ht2}
        )
    if mu0 == 0.0:
        return CriterionResult(
            "mu_dp_sign", "mu_dp", True, True, None,
            {"ht2": ht2, "note": "mu0 = 0: holds with no quantitative bound"},
        )
    admissible = mu0 * u0.values <= 0.0
    if not admissible.any():
        raise ResolutionError(
            "mu0 * Ht2 <= 0 guarantees a point with mu0 * u0 <= 0, but no "
            "grid point qualifies; the grid is too coarse"
        )
    u0x = derivative(u0, 1).values
    cand = np.where(admissible)[0]
    xi_idx = cand[np.argmin(np.abs(u0x[cand]))]
    xi0 = float(u0.grid.x[xi_idx])
    slope = abs(float(u0x[xi_idx]))
    bound = 1.0 + (1.0 + slope) / (3.0 * mu0**2)
    return CriterionResult(
        "mu_dp_sign", "mu_dp", True, True, bound,
        {"ht2": ht2, "xi0": xi0, "u0x_at_xi0": float(u0x[xi_idx])},
    )


def mu_dp_ratio_criterion(mu0: float, mu2: float, i3: float) -> CriterionResult:
    """muDP criterion from the mean/L2-norm ratio.

    Holds when |mu0| < sqrt((32 pi^2 - 9)/(32 pi^2)) mu2.  For mu0 != 0:

        T <= inf_alpha [ 6/(4 - 9 alpha |mu0|)
                         + 2 alpha (1 + |i3|)
                           / (72 pi^2 alpha mu0^2 (mu2^2 - mu0^2)
                              - 9 |mu0| mu2^2) ]

    over alpha in (mu2^2 / (8 pi^2 |mu0| (mu2^2 - mu0^2)), 4/(9 |mu0|)).
    For mu0 = 0 the criterion holds with no quantitative bound.
    """
    ratio = math.sqrt((32.0 * PI**2 - 9.0) / (32.0 * PI**2))
    holds = abs(mu0) < ratio * mu2
    if not holds:
        return CriterionResult("mu_dp_ratio", "mu_dp", True, False, None)
    if mu0 == 0.0:
        return CriterionResult(
            "mu_dp_ratio", "mu_dp", True, True, None,
            {"note": "mu0 = 0: holds with no quantitative bound"},
        )
    gap = mu2**2 - mu0**2
    lo = mu2**2 / (8.0 * PI**2 * abs(mu0) * gap)
    hi = 4.0 / (9.0 * abs(mu0))
    if lo >= hi:
        return CriterionResult("mu_dp_ratio", "mu_dp", True, False, None)

    def bound_at(alpha):
        return 6.0 / (4.0 - 9.0 * alpha * abs(mu0)) + (
            2.0 * alpha * (1.0 + abs(i3))
        ) / (72.0 * PI**2 * alpha * mu0**2 * gap - 9.0 * abs(mu0) * mu2**2)

    alpha, bound = _minimize_on_open_interval(bound_at, lo, hi)
    return CriterionResult(
        "mu_dp_ratio", "mu_dp", True, True, bound, {"alpha": alpha}
    )


class BreakdownFit(NamedTuple):
    t_star: Optional[float]
    rate_sigma: Optional[float]
    n_samples: int
    note: str


def estimate_breakdown(
    record: SolutionRecord, w_gate: float = -50.0
) -> BreakdownFit:
    """Fit y(t) = -1/min_ux(t) linearly over the window min_ux <= w_gate.

    The linearization follows the rate law min_ux ~ -sigma/(T - t): the
    fitted slope s gives rate_sigma = -1/s and the t-intercept (y -> 0)
    gives the breakdown estimate t_star.  At least 10 gated samples are
    required.
    """
    if w_gate >= 0:
        raise ValueError("w_gate must be negative")
    w = record.min_ux_series()
    ts = record.times_array()
    mask = w <= w_gate
    n_gated = int(mask.sum())
    if n_gated < 10:
        return BreakdownFit(None, None, n_gated, "fewer than 10 gated samples")
    y = -1.0 / w[mask]
    t = ts[mask]
    slope, intercept = np.polyfit(t, y, 1)
    if slope >= 0:
        return BreakdownFit(None, None, n_gated, "fit slope not negative")
    return BreakdownFit(
        float(-intercept / slope), float(-1.0 / slope), n_gated, "ok"
    )


@dataclass
class BlowupReport:
    """Per-criterion predicate results, explicit time bounds, observed
    breakdown and fitted rate for one initial profile."""

    params: ModelParams
    criteria: list[CriterionResult]
    t_star: Optional[float] = None
    min_slope_final: Optional[float] = None
    rate_sigma: Optional[float] = None
    fit_note: str = "no run attached"
    consistency: Optional[bool] = None

    def entry(self, criterion: str) -> CriterionResult:
        for c in self.criteria:
            if c.criterion == criterion:
                return c
        raise KeyError(criterion)

    def applicable_bounds(self) -> list[float]:
        return [
            c.t_bound
            for c in self.criteria
            if c.applicable and c.hypothesis_holds and c.t_bound is not None
        ]

    def to_dict(self) -> dict:
        return {
            "model": {"lambda": self.params.lam},
            "params": {
                "mu0": self.params.mu0,
                "mu1": self.params.mu1,
                "mu2": self.params.mu2,
            },
            "theorems": [c.to_dict() for c in self.criteria],
            "t_star": self.t_star,
            "min_slope_final": self.min_slope_final,
            "rate_sigma": self.rate_sigma,
            "fit_note": self.fit_note,
            "consistency": self.consistency,
        }


_CONSISTENCY_MARGIN = 1e-2


def evaluate_all(
    u0: PeriodicField,
    lam: float,
    record: Optional[SolutionRecord] = None,
    w_gate: float = -50.0,
) -> BlowupReport:
    """Evaluate every criterion on u0 and merge observed data from a run.

    Criteria of the matching family (lambda = 2: muCH, lambda = 3: muDP)
    are tagged applicable; the others are still evaluated for reference.
    consistency is t_star <= (1 + margin) * min applicable bound.
    """
    params = ModelParams.from_initial(u0, lam)
    u0x = derivative(u0, 1).values
    i3 = float((u0x**3).mean())
    inf_u0x = float(u0x.min())
    h2 = conserved_mu_ch(u0)[2]

    results = [
        mu_ch_ratio_criterion(params.mu0, params.mu1, i3),
        mu_ch_slope_criterion(params.mu0, params.mu1, inf_u0x),
        mu_ch_h2_criterion(params.mu0, params.mu1, h2, i3),
        mu_dp_sign_criterion(u0),
        mu_dp_ratio_criterion(params.mu0, params.mu2, i3),
    ]
    family = {2.0: "mu_ch", 3.0: "mu_dp"}.get(float(lam))
    criteria = [
        CriterionResult(
            r.criterion,
            r.family,
            r.family == family,
            r.hypothesis_holds,
            r.t_bound,
            r.detail,
        )
        for r in results
    ]
    report = BlowupReport(params, criteria)
    if record is not None:
        fit = estimate_breakdown(record, w_gate)
        report.t_star = fit.t_star
        report.rate_sigma = fit.rate_sigma
        report.fit_note = fit.note
        report.min_slope_final = record.diagnostics[-1].min_ux
        bounds = report.applicable_bounds()
        if fit.t_star is not None and bounds:
            report.consistency = fit.t_star <= min(bounds) * (
                1.0 + _CONSISTENCY_MARGIN
            )
    return report
