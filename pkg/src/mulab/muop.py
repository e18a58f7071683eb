"""The nonlocal operator A = mu - d_xx on the circle, its inverse and
the composites A^{-1} d_x and A^{-1} d_xx.

Three independent realizations of the inverse are provided and
cross-validated against each other:

* ``closed_form``  - the explicit five-term formula built from cumulative
  integrals (the reference transcription),
* ``fourier``      - the Fourier multiplier (mode 0 -> mean, mode k ->
  divide by 4 pi^2 k^2): the fast production path,
* ``green_convolution`` - circular convolution with the Green's function
  g(x) = x(x-1)/2 + 13/12, by corrected trapezoid quadrature: the oracle.

g has a derivative kink at 0, so the convolution carries the first two
Euler-Maclaurin kink corrections; without them plain trapezoid is only
second-order and cannot reach the cross-validation tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import (
    PeriodicField,
    PeriodicGrid,
    antiderivative,
    derivative,
    mean,
    require_finite,
)

INVERT_METHODS = ("closed_form", "green_convolution", "fourier")
AINV_DX_METHODS = ("closed_form", "fourier")


def green(x):
    """Green's function of A: g(x) = x(x-1)/2 + 13/12, periodic, mean 1."""
    x = np.mod(np.asarray(x, dtype=float), 1.0)
    return 0.5 * x * (x - 1.0) + 13.0 / 12.0


def green_prime(x):
    """Derivative of g with the convention g'(0) = 0; g'(x) = x - 1/2 else."""
    x = np.mod(np.asarray(x, dtype=float), 1.0)
    return np.where(x == 0.0, 0.0, x - 0.5)


@dataclass(frozen=True)
class MuOperatorKernel:
    """Per-grid sample tables of g and g', shareable read-only."""

    grid: PeriodicGrid
    green_samples: np.ndarray
    green_prime_samples: np.ndarray

    @classmethod
    def for_grid(cls, grid: PeriodicGrid) -> "MuOperatorKernel":
        x = grid.x
        return cls(grid, green(x), green_prime(x))


def apply_A(u: PeriodicField) -> PeriodicField:
    """A u = mean(u) - u_xx."""
    require_finite(u)
    return mean(u) - derivative(u, 2)


def _cumulatives(w: PeriodicField):
    """Pieces of the cumulative integrals of w used by the closed formulas.

    Returns (mu_w, I1, J1, I2, J2) where I1(x) = int_0^x w, J1 = int_0^1 I1,
    I2(x) = int_0^x I1 and J2 = int_0^1 I2.  The zero-mean part of w is
    integrated spectrally; the mean contributes explicit linear/quadratic
    terms.
    """
    x = w.grid.x
    mu_w = mean(w)
    w0 = w - mu_w
    W1 = antiderivative(w0, "zero_mean").field
    W2 = antiderivative(W1, "zero_mean").field
    w1_0 = W1.values[0]
    w2_0 = W2.values[0]
    I1 = W1.values - w1_0 + mu_w * x
    J1 = -w1_0 + 0.5 * mu_w
    I2 = W2.values - w2_0 - w1_0 * x + 0.5 * mu_w * x**2
    J2 = -w2_0 - 0.5 * w1_0 + mu_w / 6.0
    return mu_w, I1, J1, I2, J2


def _invert_closed_form(w: PeriodicField) -> np.ndarray:
    x = w.grid.x
    mu_w, _, J1, I2, J2 = _cumulatives(w)
    return (0.5 * x**2 - 0.5 * x + 13.0 / 12.0) * mu_w + (x - 0.5) * J1 - I2 + J2


def _invert_fourier(w: PeriodicField) -> np.ndarray:
    n = w.grid.n
    coef = np.fft.rfft(w.values)
    k = np.arange(1, coef.size)
    coef[1:] = coef[1:] / (4.0 * np.pi**2 * k**2)
    return np.fft.irfft(coef, n)


def _invert_green_convolution(w: PeriodicField) -> np.ndarray:
    n = w.grid.n
    h = w.grid.h
    g = MuOperatorKernel.for_grid(w.grid).green_samples
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    v = (g[idx] @ w.values) * h
    # Euler-Maclaurin corrections for the g' kink sitting on the node y = x.
    wv = w.values
    wpp = (np.roll(wv, -1) - 2.0 * wv + np.roll(wv, 1)) / h**2
    return v - (h**2 / 12.0) * wv + (h**4 / 240.0) * wpp


def invert_A(w: PeriodicField, method: str = "fourier") -> PeriodicField:
    """Solve A v = w.  All three methods agree to discretization accuracy
    and preserve the mean (the k = 0 symbol of A is 1)."""
    require_finite(w)
    if method == "fourier":
        v = _invert_fourier(w)
    elif method == "closed_form":
        v = _invert_closed_form(w)
    elif method == "green_convolution":
        v = _invert_green_convolution(w)
    else:
        raise ValueError(f"unknown invert_A method {method!r}")
    return PeriodicField(w.grid, v)


def ainv_dx(w: PeriodicField, method: str = "fourier") -> PeriodicField:
    """A^{-1} d_x w.

    closed_form evaluates (x - 1/2) int_0^1 w - int_0^x w + int_0^1 int_0^x w
    term by term; fourier multiplies mode k != 0 by i/(2 pi k) and sends
    mode 0 to 0.  For any w, sup |A^{-1} d_x w| <= |mean(w)|/2 + 2 ||w||_L2.
    """
    require_finite(w)
    if method == "fourier":
        n = w.grid.n
        coef = np.fft.rfft(w.values)
        coef[0] = 0.0
        k = np.arange(1, coef.size)
        coef[1:] = coef[1:] * (1j / (2.0 * np.pi * k))
        coef[-1] = 0.0
        v = np.fft.irfft(coef, n)
    elif method == "closed_form":
        x = w.grid.x
        mu_w, I1, J1, _, _ = _cumulatives(w)
        v = (x - 0.5) * mu_w - I1 + J1
    else:
        raise ValueError(f"unknown ainv_dx method {method!r}")
    return PeriodicField(w.grid, v)


def ainv_dxx(w: PeriodicField) -> PeriodicField:
    """A^{-1} d_xx w = -w + mean(w)."""
    require_finite(w)
    return PeriodicField(w.grid, -w.values + mean(w))
