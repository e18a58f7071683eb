"""Conserved quantities, a-priori bounds and inequality oracles.

The muCH hierarchy (H0, H1, H2) and the muDP hierarchy (Ht0, Ht1, Ht2)
are monitored along every run regardless of the family parameter; drift
of the relevant triple is the primary accuracy diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .field import PeriodicField, derivative, mean, require_finite, resolvedness
from .muop import ainv_dx

SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class DiagnosticsRow:
    """Per-record scalar diagnostics of an evolving field."""

    t: float
    dt: float
    min_ux: float
    max_ux: float
    sup_u: float
    h0: float
    h1: float
    h2: float
    ht0: float
    ht1: float
    ht2: float
    v: float
    resolvedness: float


def conserved_mu_ch(u: PeriodicField) -> tuple[float, float, float]:
    """muCH invariants: H0 = mean(u), H1 = mean(u)^2/2 + |u_x|^2/2,
    H2 = int(mean(u) u^2 + u u_x^2 / 2)."""
    require_finite(u)
    mu = mean(u)
    ux = derivative(u, 1).values
    h0 = mu
    h1 = 0.5 * mu**2 + 0.5 * float((ux**2).mean())
    h2 = mu * float((u.values**2).mean()) + 0.5 * float((u.values * ux**2).mean())
    return h0, h1, h2


def conserved_mu_dp(u: PeriodicField) -> tuple[float, float, float]:
    """muDP invariants: Ht0 = -(9/2) mean(u), Ht1 = |u|^2/2,
    Ht2 = int((3/2) mean(u) (A^{-1} d_x u)^2 + u^3/6)."""
    require_finite(u)
    mu = mean(u)
    ht0 = -4.5 * mu
    ht1 = 0.5 * float((u.values**2).mean())
    v = ainv_dx(u).values
    ht2 = 1.5 * mu * float((v**2).mean()) + float((u.values**3).mean()) / 6.0
    return ht0, ht1, ht2


def lyapunov_v(u: PeriodicField) -> float:
    """The Lyapunov functional int u_x^3, strictly decreasing in the
    blow-up regime."""
    require_finite(u)
    ux = derivative(u, 1).values
    return float((ux**3).mean())


def compute_row(u: PeriodicField, t: float, dt: float) -> DiagnosticsRow:
    ux = derivative(u, 1).values
    h0, h1, h2 = conserved_mu_ch(u)
    ht0, ht1, ht2 = conserved_mu_dp(u)
    return DiagnosticsRow(
        t=float(t),
        dt=float(dt),
        min_ux=float(ux.min()),
        max_ux=float(ux.max()),
        sup_u=float(np.abs(u.values).max()),
        h0=h0,
        h1=h1,
        h2=h2,
        ht0=ht0,
        ht1=ht1,
        ht2=ht2,
        v=float((ux**3).mean()),
        resolvedness=resolvedness(u),
    )


def apriori_sup_bound(u: PeriodicField, mu0: float, mu1: float) -> float:
    """muCH amplitude bound margin: |mu0| + (sqrt(3)/6) mu1 - sup|u|.

    Nonnegative along any true muCH solution whose initial data produced
    the constants mu0, mu1.
    """
    require_finite(u)
    return abs(mu0) + (SQRT3 / 6.0) * mu1 - float(np.abs(u.values).max())


def linear_growth_bound(record) -> Optional[float]:
    """muDP sup-norm growth margin, minimized over the recorded times.

    The bound is sup|u(t)| <= ((3/2) mu0^2 + 6 |mu0| mu2) t + sup|u0|.
    Returns None when the record is not a muDP (lambda = 3) run.
    """
    params = record.params
    if params.lam != 3:
        return None
    rate = 1.5 * params.mu0**2 + 6.0 * abs(params.mu0) * params.mu2
    sup_u0 = record.diagnostics[0].sup_u
    margins = [
        rate * row.t + sup_u0 - row.sup_u for row in record.diagnostics
    ]
    return float(min(margins))


_ZERO_MEAN_TOL = 1e-10


def _require_zero_mean(f: PeriodicField) -> None:
    if abs(mean(f)) > _ZERO_MEAN_TOL:
        raise ValueError(f"zero-mean field required, got mean {mean(f):.3e}")


def sobolev_oracle(f: PeriodicField) -> float:
    """Slack of max f^2 <= (1/12) int f_x^2 for zero-mean f; must be >= 0."""
    require_finite(f)
    _require_zero_mean(f)
    fx = derivative(f, 1).values
    return float((fx**2).mean() / 12.0 - (f.values**2).max())


def wirtinger_oracle(f: PeriodicField) -> float:
    """Slack of int f^2 <= (1/(2 pi))^2 int f_x^2 for zero-mean f.

    Equality holds exactly for f = A cos(2 pi x) + B sin(2 pi x).
    """
    require_finite(f)
    _require_zero_mean(f)
    fx = derivative(f, 1).values
    return float((fx**2).mean() / (4.0 * np.pi**2) - (f.values**2).mean())
