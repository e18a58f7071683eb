"""Periodic grid representation and spectral calculus on the unit circle.

Everything here works with real 1-periodic functions sampled on a uniform
grid x_j = j/n, j = 0..n-1.  Differentiation and antidifferentiation are
Fourier-based and therefore exact (to round-off) on trigonometric
polynomials the grid can resolve; quadrature is the plain sample average,
which on a uniform periodic grid is the trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class CorruptionError(ValueError):
    """A field contains NaN or Inf samples."""


class GridMismatchError(ValueError):
    """Two fields on different grids were combined arithmetically."""


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid of n samples on the circle R/Z.

    n must be even (spectral transforms assume paired modes) and at least 8.
    The sample points are x_j = j/n; x = 1 is identified with x = 0 and is
    never a sample.
    """

    n: int

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 8, got {self.n}")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) / self.n


class PeriodicField:
    """Samples of a real 1-periodic function on a PeriodicGrid.

    Fields are treated as immutable; arithmetic returns new fields and
    requires both operands to live on the identical grid.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: PeriodicGrid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} samples, got shape {values.shape}")
        self.grid = grid
        self.values = values

    @classmethod
    def from_function(cls, grid: PeriodicGrid, fn) -> "PeriodicField":
        return cls(grid, fn(grid.x))

    @classmethod
    def constant(cls, grid: PeriodicGrid, value: float) -> "PeriodicField":
        return cls(grid, np.full(grid.n, float(value)))

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def _same_grid(self, other: "PeriodicField") -> None:
        if self.grid.n != other.grid.n:
            raise GridMismatchError(
                f"grids differ: n={self.grid.n} vs n={other.grid.n}"
            )

    def __add__(self, other):
        if isinstance(other, PeriodicField):
            self._same_grid(other)
            return PeriodicField(self.grid, self.values + other.values)
        return PeriodicField(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PeriodicField):
            self._same_grid(other)
            return PeriodicField(self.grid, self.values - other.values)
        return PeriodicField(self.grid, self.values - other)

    def __rsub__(self, other):
        return PeriodicField(self.grid, other - self.values)

    def __mul__(self, other):
        if isinstance(other, PeriodicField):
            self._same_grid(other)
            return PeriodicField(self.grid, self.values * other.values)
        return PeriodicField(self.grid, self.values * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PeriodicField):
            self._same_grid(other)
            return PeriodicField(self.grid, self.values / other.values)
        return PeriodicField(self.grid, self.values / other)

    def __pow__(self, p):
        return PeriodicField(self.grid, self.values**p)

    def __neg__(self):
        return PeriodicField(self.grid, -self.values)

    def __repr__(self):
        return f"PeriodicField(n={self.grid.n}, sup={np.abs(self.values).max():.3g})"


def require_finite(f: PeriodicField, what: str = "field") -> None:
    if not f.is_finite():
        raise CorruptionError(f"{what} contains non-finite samples")


# Relative noise floor below which Fourier coefficients are zeroed before
# a derivative multiplier is applied (Krasny filtering).  Without it,
# composed derivatives amplify transform round-off by (pi n)^order, which
# would dominate the residuals of the higher-order identity checks.
_NOISE_FLOOR = 1e-14


def _filtered(coef: np.ndarray) -> np.ndarray:
    top = np.abs(coef).max()
    if top > 0.0:
        coef[np.abs(coef) < _NOISE_FLOOR * top] = 0.0
    return coef


def derivative(f: PeriodicField, order: int = 1) -> PeriodicField:
    """Spectral derivative of the given order (1, 2 or 3).

    Exact for trigonometric polynomials resolvable by the grid.  For odd
    orders the Nyquist mode is zeroed (an odd operator has no consistent
    real action on the unpaired Nyquist cosine).
    """
    if order not in (1, 2, 3):
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")
    require_finite(f)
    n = f.grid.n
    coef = _filtered(np.fft.rfft(f.values))
    k = np.arange(coef.size)
    coef = coef * (2j * np.pi * k) ** order
    if order % 2 == 1:
        coef[-1] = 0.0
    return PeriodicField(f.grid, np.fft.irfft(coef, n))


def mean(f: PeriodicField) -> float:
    """Mean over the circle, i.e. the integral over one period.

    On a uniform periodic grid the trapezoid quadrature is the plain
    average of the samples; it is exact for resolvable trig polynomials.
    """
    require_finite(f)
    return float(f.values.mean())


def integrate(f: PeriodicField) -> float:
    """Integral over one period; identical to mean on the unit circle."""
    return mean(f)


class Antiderivative(NamedTuple):
    """Result of antiderivative(): the primitive and whether it is periodic.

    When the input has nonzero mean there is no periodic primitive; the
    returned samples are the cumulative integral F(x) = int_0^x f (linear
    part included) and ``periodic`` is False.
    """

    field: PeriodicField
    periodic: bool


_MEAN_TOL = 1e-12


def antiderivative(
    f: PeriodicField, rule: str = "zero_at_origin", constant: float = 0.0
) -> Antiderivative:
    """Primitive F with F' = f spectrally, the constant fixed by ``rule``.

    rule = "zero_at_origin": F(0) = 0.
    rule = "zero_mean":      mean(F) = 0.
    rule = "explicit":       F(0) = constant.

    If mean(f) is not ~0 the primitive is not periodic; the cumulative
    integral (zero-mean spectral primitive plus the linear term mean(f)*x)
    is returned with periodic=False.
    """
    if rule not in ("zero_at_origin", "zero_mean", "explicit"):
        raise ValueError(f"unknown constant rule {rule!r}")
    require_finite(f)
    n = f.grid.n
    m0 = float(f.values.mean())
    coef = np.fft.rfft(f.values)
    coef[0] = 0.0
    k = np.arange(1, coef.size)
    coef[1:] = coef[1:] / (2j * np.pi * k)
    coef[-1] = 0.0
    F = np.fft.irfft(coef, n)
    scale = max(1.0, float(np.abs(f.values).max()))
    periodic = abs(m0) <= _MEAN_TOL * scale
    if not periodic:
        F = F + m0 * f.grid.x
    if rule == "zero_at_origin":
        F = F - F[0]
    elif rule == "zero_mean":
        F = F - F.mean()
    else:
        F = F - F[0] + constant
    return Antiderivative(PeriodicField(f.grid, F), periodic)


def trig_eval(f: PeriodicField, x, deriv: int = 0) -> np.ndarray:
    """Evaluate the trigonometric interpolant of f (or a derivative) at x.

    x may be any real array; points are interpreted mod 1.  The Nyquist
    mode is represented by the symmetric cos(pi*n*x) choice, matching the
    grid-point values and the convention of derivative().
    """
    require_finite(f)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = f.grid.n
    coef = np.fft.rfft(f.values) / n
    k = np.arange(coef.size)
    if deriv:
        coef = _filtered(coef) * (2j * np.pi * k) ** deriv
    phase = np.exp(2j * np.pi * np.outer(x, k[:-1]))
    out = np.real(phase[:, :1] @ coef[:1].reshape(1, 1)).ravel()
    out += 2.0 * np.real(phase[:, 1:] @ coef[1:-1])
    nyq = coef[-1].real
    if deriv % 2 == 1:
        nyq = 0.0
    elif deriv:
        nyq = nyq * (-1.0) ** (deriv // 2) * (np.pi * n) ** deriv
    out += nyq * np.cos(np.pi * n * x)
    return out


def slope_range(u: PeriodicField) -> tuple[float, float]:
    """(min, max) of u_x as the extrema of its trigonometric interpolant.

    The grid samples alone underestimate a narrow slope spike whose tip
    falls between nodes, so each grid extremum is refined by sampling the
    interpolant finely on the two surrounding cells.
    """
    ux = derivative(u, 1)
    vals = ux.values
    h = u.grid.h
    offsets = np.linspace(-h, h, 65)

    def refine(j: int) -> np.ndarray:
        return trig_eval(u, u.grid.x[j] + offsets, deriv=1)

    lo = min(float(vals.min()), float(refine(int(np.argmin(vals))).min()))
    hi = max(float(vals.max()), float(refine(int(np.argmax(vals))).max()))
    return lo, hi


def resolvedness(f: PeriodicField) -> float:
    """Fraction of slope energy NOT in the top third of the spectrum.

    The slope power spectrum (2 pi k)^2 |f_k|^2 sums to the energy
    int f_x^2, the quantity whose pollution signals breakdown first.
    1.0 means f_x is fully represented by the lower two thirds of the
    available modes; values near 0 mean the discretization is no longer
    trustworthy.  Constant fields report 1.0.
    """
    require_finite(f)
    coef = np.fft.rfft(f.values)
    k = np.arange(coef.size)
    power = (2.0 * np.pi * k) ** 2 * np.abs(coef) ** 2
    power[1:-1] *= 2.0
    total = power.sum()
    if total == 0.0:
        return 1.0
    kmax = power.size - 1
    cut = (2 * kmax) // 3
    hi = power[cut + 1 :].sum()
    return float(1.0 - hi / total)
