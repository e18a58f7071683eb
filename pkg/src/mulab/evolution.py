"""Time evolution of the recast mu-family equation

    u_t + u u_x + A^{-1} d_x( lambda mu0 u + ((3 - lambda)/2) u_x^2 ) = 0

for arbitrary family parameter lambda (2 = muCH, 3 = muDP), with adaptive
embedded Runge-Kutta stepping, breakdown detection, characteristics
tracking and the local conservation law m(t, q) q_x^lambda = m0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from . import diagnostics
from .field import (
    PeriodicField,
    PeriodicGrid,
    derivative,
    mean,
    trig_eval,
)
from .muop import ainv_dx, apply_A


@dataclass(frozen=True)
class ModelParams:
    """Family parameter and the conserved constants of a run.

    mu0, mu1, mu2 are computed once from the initial profile and never
    recomputed from evolved states: they are conserved quantities, and any
    drift is a diagnostic, not a redefinition.
    """

    lam: float
    mu0: float
    mu1: float
    mu2: float

    @classmethod
    def from_initial(cls, u0: PeriodicField, lam: float) -> "ModelParams":
        ux = derivative(u0, 1).values
        return cls(
            lam=float(lam),
            mu0=mean(u0),
            mu1=float(np.sqrt((ux**2).mean())),
            mu2=float(np.sqrt((u0.values**2).mean())),
        )


@dataclass(frozen=True)
class SolverConfig:
    dt0: float = 1e-3
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    slope_stop: float = -1e4
    dt_min: float = 1e-12
    t_max: float = 1.0
    record_every: int = 1
    cfl: float = 0.5

    def __post_init__(self):
        if not (self.dt_min < self.dt0):
            raise ValueError("dt_min must be smaller than dt0")
        if self.slope_stop >= 0:
            raise ValueError("slope_stop must be negative")
        if min(self.rel_tol, self.abs_tol, self.t_max, self.cfl) <= 0:
            raise ValueError("tolerances, t_max and cfl must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


class Termination(str, Enum):
    REACHED_TMAX = "reached_tmax"
    SLOPE_STOP = "slope_stop_hit"
    DT_COLLAPSE = "dt_collapse"
    CORRUPTION = "corruption"


@dataclass
class SolutionRecord:
    """Time series of fields and per-step diagnostics from evolve()."""

    params: ModelParams
    times: list[float]
    fields: list[PeriodicField]
    diagnostics: list[diagnostics.DiagnosticsRow]
    termination: Termination
    t_final: float

    def min_ux_series(self) -> np.ndarray:
        return np.array([row.min_ux for row in self.diagnostics])

    def times_array(self) -> np.ndarray:
        return np.asarray(self.times)


_DRIFT_WARN = 1e-6


def rhs(u: PeriodicField, params: ModelParams) -> PeriodicField:
    """Right-hand side -u u_x - A^{-1} d_x(lambda mu0 u + ((3-lambda)/2) u_x^2).

    The advection term is evaluated in conservative form -(u^2/2)_x so the
    discrete rhs has exactly zero mean (constants are exact steady states).
    """
    mu = mean(u)
    if abs(mu - params.mu0) > _DRIFT_WARN:
        warnings.warn(
            f"mean drifted from mu0 by {mu - params.mu0:.3e}", stacklevel=2
        )
    ux = derivative(u, 1)
    w = (params.lam * params.mu0) * u + (0.5 * (3.0 - params.lam)) * ux * ux
    adv = derivative(0.5 * u * u, 1)
    return -adv - ainv_dx(w)


# Dormand-Prince 5(4) coefficients (FSAL: last stage of an accepted step is
# the first stage of the next).
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
_SAFETY, _FAC_MIN, _FAC_MAX = 0.9, 0.2, 5.0


def _dp_step(f, t, y, dt, k1):
    """One Dormand-Prince step; returns (y_new, k_last, err_vector)."""
    k = [k1]
    for i in range(1, 7):
        yi = y + dt * sum(a * ki for a, ki in zip(_DP_A[i], k))
        k.append(f(t + _DP_C[i] * dt, yi))
    y_new = y + dt * sum(a * ki for a, ki in zip(_DP_A[6], k))
    err = dt * sum(e * ki for e, ki in zip(_DP_E, k))
    return y_new, k[6], err


def _error_norm(err, y_old, y_new, rel_tol, abs_tol):
    scale = abs_tol + rel_tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def evolve(
    u0: PeriodicField, params: ModelParams, config: SolverConfig
) -> SolutionRecord:
    """Advance u0 until t_max, slope_stop or step-size collapse.

    Fields and diagnostics are recorded every ``record_every`` accepted
    steps, plus always the final state.  The step is capped by the
    advective stability bound dt <= cfl / (n max|u|); collapse of the
    adaptive step below dt_min doubles as a blow-up sensor.  Corruption
    (NaN/Inf) terminates with a partial record, never a crash.
    """
    grid = u0.grid
    n = grid.n

    def f(t, y):
        return rhs(PeriodicField(grid, y), params).values

    times: list[float] = []
    fields: list[PeriodicField] = []
    rows: list[diagnostics.DiagnosticsRow] = []

    def record(y, t, dt):
        fld = PeriodicField(grid, y.copy())
        times.append(t)
        fields.append(fld)
        rows.append(diagnostics.compute_row(fld, t, dt))

    def finish(term, t):
        return SolutionRecord(params, times, fields, rows, term, t)

    y = u0.values.astype(float).copy()
    if not np.isfinite(y).all():
        record(np.nan_to_num(y), 0.0, 0.0)
        return finish(Termination.CORRUPTION, 0.0)

    t = 0.0
    record(y, t, 0.0)
    min_ux0 = rows[0].min_ux
    if min_ux0 <= config.slope_stop:
        return finish(Termination.SLOPE_STOP, t)

    def cfl_cap(yv):
        sup = float(np.abs(yv).max())
        return config.cfl / (n * sup) if sup > 0 else np.inf

    dt = min(config.dt0, cfl_cap(y), config.t_max)
    k1 = f(t, y)
    steps = 0
    while True:
        dt = min(dt, config.t_max - t)
        y_new, k_last, err = _dp_step(f, t, y, dt, k1)
        if not np.isfinite(y_new).all():
            if np.isfinite(y).all() and dt * _FAC_MIN >= config.dt_min:
                dt *= _FAC_MIN
                continue
            if times[-1] != t:
                record(y, t, dt)
            return finish(Termination.CORRUPTION, t)
        errn = _error_norm(err, y, y_new, config.rel_tol, config.abs_tol)
        if errn <= 1.0:
            t += dt
            y = y_new
            k1 = k_last
            steps += 1
            ux = derivative(PeriodicField(grid, y), 1).values
            min_ux = float(ux.min())
            hit_slope = min_ux <= config.slope_stop
            done = t >= config.t_max - 1e-14
            if steps % config.record_every == 0 or hit_slope or done:
                record(y, t, dt)
            if hit_slope:
                if times[-1] != t:
                    record(y, t, dt)
                return finish(Termination.SLOPE_STOP, t)
            if done:
                if times[-1] != t:
                    record(y, t, dt)
                return finish(Termination.REACHED_TMAX, t)
        factor = _SAFETY * errn ** -0.2 if errn > 0 else _FAC_MAX
        dt = dt * min(_FAC_MAX, max(_FAC_MIN, factor))
        dt = min(dt, cfl_cap(y))
        if dt < config.dt_min:
            if times[-1] != t:
                record(y, t, dt)
            return finish(Termination.DT_COLLAPSE, t)


class CharacteristicPoint(NamedTuple):
    t: float
    q: float
    q_x: float
    slope_integral: float


@dataclass
class CharacteristicPath:
    """Flow-map samples (t, q, q_x, int_0^t u_x(tau, q) dtau) at the record
    times of a run.  ``sparse`` flags a record cadence too coarse for the
    linear-in-time interpolation of u to be trustworthy."""

    x0: float
    points: list[CharacteristicPoint]
    sparse: bool

    def __iter__(self):
        return iter(self.points)


def characteristics(
    record: SolutionRecord,
    x0: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
) -> CharacteristicPath:
    """Integrate dq/dt = u(t, q) and dq_x/dt = u_x(t, q) q_x along a run.

    u is interpolated trigonometrically in space and linearly in time
    between stored records, and the system is advanced with the same
    embedded Runge-Kutta pair as evolve().  The slope integral
    int u_x(tau, q) dtau is carried as a third component, so
    q_x = exp(slope_integral) provides a dual formulation of q_x.
    """
    if not record.times:
        raise ValueError("empty solution record")
    ts = record.times_array()
    flds = record.fields

    def u_and_ux(t, q):
        i = int(np.searchsorted(ts, t, side="right") - 1)
        i = max(0, min(i, len(ts) - 2)) if len(ts) > 1 else 0
        if len(ts) == 1:
            u_lo = trig_eval(flds[0], q)[0]
            ux_lo = trig_eval(flds[0], q, deriv=1)[0]
            return u_lo, ux_lo
        t0, t1 = ts[i], ts[i + 1]
        th = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
        u_lo = trig_eval(flds[i], q)[0]
        u_hi = trig_eval(flds[i + 1], q)[0]
        ux_lo = trig_eval(flds[i], q, deriv=1)[0]
        ux_hi = trig_eval(flds[i + 1], q, deriv=1)[0]
        return (1 - th) * u_lo + th * u_hi, (1 - th) * ux_lo + th * ux_hi

    def f(t, y):
        q, qx, _ = y
        u, ux = u_and_ux(t, q)
        return np.array([u, ux * qx, ux])

    max_ux = max(abs(r.min_ux) for r in record.diagnostics) or 1.0
    gaps = np.diff(ts) if len(ts) > 1 else np.array([0.0])
    sparse = bool(gaps.size and float(gaps.max()) * max_ux > 1.0)

    y = np.array([float(x0), 1.0, 0.0])
    points = [CharacteristicPoint(float(ts[0]), y[0], y[1], y[2])]
    t = float(ts[0])
    k1 = f(t, y)
    for t_target in ts[1:]:
        dt = t_target - t
        while t < t_target - 1e-14:
            dt = min(dt, t_target - t)
            y_new, k_last, err = _dp_step(f, t, y, dt, k1)
            errn = _error_norm(err, y, y_new, rel_tol, abs_tol)
            if errn <= 1.0:
                t += dt
                y = y_new
                k1 = k_last
            factor = _SAFETY * errn ** -0.2 if errn > 0 else _FAC_MAX
            dt = dt * min(_FAC_MAX, max(_FAC_MIN, factor))
            if dt < 1e-14:
                break
        points.append(CharacteristicPoint(float(t_target), y[0], y[1], y[2]))
    return CharacteristicPath(float(x0), points, sparse)


def local_conservation_residual(
    record: SolutionRecord, x0: float
) -> list[tuple[float, float]]:
    """Relative drift of m(t, q(t, x0)) q_x^lambda along a characteristic.

    residual(t) = |m(t, q) q_x^lambda - m0(x0)| / (|m0(x0)| + 1), with m
    evaluated by applying A to the recorded field and interpolating
    trigonometrically at q.
    """
    path = characteristics(record, x0)
    lam = record.params.lam
    m0 = trig_eval(apply_A(record.fields[0]), x0)[0]
    out = []
    for fld, pt in zip(record.fields, path.points):
        m_here = trig_eval(apply_A(fld), pt.q)[0]
        res = abs(m_here * pt.q_x**lam - m0) / (abs(m0) + 1.0)
        out.append((pt.t, float(res)))
    return out
