"""Differential-geometric identity checks as residual computations.

Three families of checks, all evaluated spectrally on arbitrary smooth
periodic fields:

* plane centro-equiaffine (CA^2) curvature flow: the curvature evolution
  phi_t = (D_ss + 4 phi + 2 phi_s ds^{-1}) f reduces to the muCH family
  under phi = m, f = -u_s,
* space centro-equiaffine (CA^3) curvature flow: the curvature pair
  evolution reduces to the muDP equation under beta = 0, F = u_s + 2/3,
  G = -u, H = -1, alpha = -m,
* structure equations: a muCH solution feeds one-forms satisfying the
  pseudo-spherical structure equations, and a muDP solution feeds
  Maurer-Cartan forms satisfying the unimodular-affine structure
  equations.

Wedge conventions (used consistently everywhere): dx ^ dt is positive,
d(a dx + b dt) = (d_x b - d_t a) dx ^ dt and
(a dx + b dt) ^ (a' dx + b' dt) = (a b' - b a') dx ^ dt.
Time derivatives of form coefficients are expanded by the chain rule in
terms of u_t (no finite differencing in time).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .evolution import ModelParams, rhs
from .field import PeriodicField, antiderivative, derivative, mean
from .muop import apply_A


@dataclass(frozen=True)
class OneFormCoeffs:
    """A 1-form omega = a dx + b dt, coefficients sampled on one grid."""

    a: PeriodicField
    b: PeriodicField

    def __post_init__(self):
        if self.a.grid.n != self.b.grid.n:
            raise ValueError("form coefficients must share a grid")


@dataclass(frozen=True)
class GeometryResidualReport:
    test: str
    residual_sup: float
    n: int
    params: dict = dc_field(default_factory=dict)
    checks: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.residual_sup < 0:
            raise ValueError("residual_sup must be nonnegative")


def _sup(values) -> float:
    return float(np.abs(np.asarray(values)).max())


def ca2_curvature_rhs(
    phi: PeriodicField, f: PeriodicField, inv_constant: float
) -> PeriodicField:
    """CA^2 curvature evolution (D_ss + 4 phi + 2 phi_s ds^{-1}) f.

    f must have zero mean (the non-stretching constraint on the normal
    velocity); the antiderivative constant is exposed because ds^{-1} is
    only defined up to one, and the muCH reduction needs the primitive
    equal to -u.
    """
    if abs(mean(f)) > 1e-10:
        raise ValueError("normal velocity f must have zero mean")
    F = antiderivative(f, "explicit", inv_constant).field
    return derivative(f, 2) + 4.0 * phi * f + 2.0 * derivative(phi, 1) * F


def ca2_mu_ch_residual(u: PeriodicField) -> GeometryResidualReport:
    """Residual of the CA^2 reduction to the muCH family.

    With phi = m = A u, f = -u_s and the primitive ds^{-1} f = -u, the
    curvature evolution must equal -(u_sss + 4 m u_s + 2 u m_s); the
    report carries the sup of the difference, which is spectral round-off
    for band-limited u.
    """
    m = apply_A(u)
    us = derivative(u, 1)
    f = -us
    inv_constant = -float(u.values[0])
    lhs = ca2_curvature_rhs(m, f, inv_constant)
    target = -(derivative(u, 3) + 4.0 * m * us + 2.0 * u * derivative(m, 1))
    res = _sup((lhs - target).values)
    return GeometryResidualReport(
        "ca2_mu_ch", res, u.grid.n, checks={"reduction": res}
    )


def ca2_rescale_residual(u: PeriodicField) -> GeometryResidualReport:
    """Exactness of the change of variables s -> x - t, u -> u/2.

    The shifted, doubled field v = 2u must satisfy the standard family
    form n_t = -(2 n v_x + v n_x) (n = A v) whenever u satisfies the
    reduced flow m_t = -(u_sss + 4 m u_s + 2 u m_s): the two right-hand
    sides agree after the chain-rule shift term 2 m_s is accounted for.
    """
    m = apply_A(u)
    mx = derivative(m, 1)
    reduced = -(derivative(u, 3) + 4.0 * m * derivative(u, 1) + 2.0 * u * mx)
    v = 2.0 * u
    nfld = apply_A(v)
    family = -(2.0 * nfld * derivative(v, 1) + v * derivative(nfld, 1))
    res = _sup((family - (2.0 * reduced - 2.0 * mx)).values)
    return GeometryResidualReport(
        "ca2_rescale", res, u.grid.n, checks={"rescale": res}
    )


def ca3_curvature_rhs(
    alpha: PeriodicField,
    beta: PeriodicField,
    F: PeriodicField,
    G: PeriodicField,
    H: PeriodicField,
) -> tuple[PeriodicField, PeriodicField]:
    """CA^3 curvature evolution (alpha_t, beta_t), term by term.

    alpha_t = [F_ss + alpha (G + 2 H_s) + alpha_s H]_s
              + 2 alpha G_s - beta F_s + alpha H_ss
    beta_t  = [3 F_s + G_ss + beta (G + 2 H_s) + (alpha + beta_s) H]_s
              + 2 alpha H_s + beta H_ss + beta G_s + alpha_s H
    """
    d = derivative
    Fs, Gs, Hs = d(F, 1), d(G, 1), d(H, 1)
    Hss = d(H, 2)
    alpha_s = d(alpha, 1)
    beta_s = d(beta, 1)
    alpha_t = (
        d(d(F, 2) + alpha * (G + 2.0 * Hs) + alpha_s * H, 1)
        + 2.0 * alpha * Gs
        - beta * Fs
        + alpha * Hss
    )
    beta_t = (
        d(3.0 * Fs + d(G, 2) + beta * (G + 2.0 * Hs) + (alpha + beta_s) * H, 1)
        + 2.0 * alpha * Hs
        + beta * Hss
        + beta * Gs
        + alpha_s * H
    )
    return alpha_t, beta_t


def ca3_arclength_constraint(u: PeriodicField, beta: float) -> float:
    """Sup of the non-stretching constraint F + G_s + (2/3) beta H +
    (1/3) H_ss for the velocity choice F = u_s + 2/3, G = -u, H = -1.

    Evaluates to 0 for beta = 1 (the flow reducing to the standard DP
    form) and to the constant 2/3 for the periodic beta = 0 choice, which
    satisfies the curvature evolution identities instead.
    """
    grid = u.grid
    F = derivative(u, 1) + 2.0 / 3.0
    G = -u
    H = PeriodicField.constant(grid, -1.0)
    val = F + derivative(G, 1) + (2.0 / 3.0) * beta * H + derivative(H, 2) / 3.0
    return _sup(val.values)


def ca3_mu_dp_residual(u: PeriodicField) -> GeometryResidualReport:
    """Residual of the CA^3 reduction to the muDP equation.

    Under beta = 0, F = u_s + 2/3, G = -u, H = -1 and alpha = -m the
    second curvature equation holds identically and the first reduces to
    alpha_t = 3 m u_s + u m_s (i.e. m_t = -(3 m u_s + u m_s)).
    """
    grid = u.grid
    m = apply_A(u)
    alpha = -m
    beta = PeriodicField.constant(grid, 0.0)
    F = derivative(u, 1) + 2.0 / 3.0
    G = -u
    H = PeriodicField.constant(grid, -1.0)
    alpha_t, beta_t = ca3_curvature_rhs(alpha, beta, F, G, H)
    target = 3.0 * m * derivative(u, 1) + u * derivative(m, 1)
    res_alpha = _sup((alpha_t - target).values)
    res_beta = _sup(beta_t.values)
    res = max(res_alpha, res_beta)
    return GeometryResidualReport(
        "ca3_mu_dp",
        res,
        grid.n,
        checks={
            "alpha_equation": res_alpha,
            "beta_equation": res_beta,
            "constraint_beta1": ca3_arclength_constraint(u, 1.0),
        },
    )


def _mu_ch_ut(u: PeriodicField) -> PeriodicField:
    return rhs(u, ModelParams.from_initial(u, 2.0))


def _mu_dp_ut(u: PeriodicField) -> PeriodicField:
    return rhs(u, ModelParams.from_initial(u, 3.0))


def pseudospherical_forms(
    u: PeriodicField, lam: float
) -> list[OneFormCoeffs]:
    """The three one-forms built from a muCH field u and spectral
    parameter lam; their structure equations characterize surfaces of
    Gaussian curvature -1."""
    if lam == 0.0:
        raise ValueError("spectral parameter must be nonzero")
    grid = u.grid
    m = apply_A(u)
    ux = derivative(u, 1)
    mu = mean(u)
    const = lambda v: PeriodicField.constant(grid, v)
    a1 = 0.5 * (lam * m - 0.5 * lam**2 + 2.0)
    b1 = 0.5 * (
        0.5 * lam**2 * u
        - lam * (ux + u * m + 0.5)
        + mu
        - 2.0 * u
        + 2.0 / lam
    )
    a2 = const(lam)
    b2 = 1.0 - lam * u + ux
    a3 = 0.5 * (lam * m - 0.5 * lam**2 - 2.0)
    b3 = 0.5 * (
        0.5 * lam**2 * u
        - lam * (ux + u * m + 0.5)
        + mu
        + 2.0 * u
        - 2.0 / lam
    )
    return [OneFormCoeffs(a1, b1), OneFormCoeffs(a2, b2), OneFormCoeffs(a3, b3)]


def pss_structure_residual(
    u: PeriodicField, lambda_spec: float, u_t: PeriodicField | None = None
) -> GeometryResidualReport:
    """Residuals of the pseudo-spherical structure equations

        d w1 = w3 ^ w2,  d w2 = w1 ^ w3,  d w3 = w1 ^ w2

    for the one-forms of pseudospherical_forms().  u_t defaults to the
    muCH evolution of u; passing a wrong u_t (negative control) inflates
    the residual by orders of magnitude.
    """
    if lambda_spec == 0.0:
        raise ValueError("spectral parameter must be nonzero")
    if u_t is None:
        u_t = _mu_ch_ut(u)
    lam = lambda_spec
    w1, w2, w3 = pseudospherical_forms(u, lam)
    m_t = mean(u_t) - derivative(u_t, 2)
    # d_t of the dx-coefficients: a1 and a3 depend on t only through m.
    da1 = 0.5 * lam * m_t
    da2 = PeriodicField.constant(u.grid, 0.0)
    da3 = 0.5 * lam * m_t

    def wedge(p: OneFormCoeffs, q: OneFormCoeffs) -> np.ndarray:
        return p.a.values * q.b.values - p.b.values * q.a.values

    r1 = derivative(w1.b, 1).values - da1.values - wedge(w3, w2)
    r2 = derivative(w2.b, 1).values - da2.values - wedge(w1, w3)
    r3 = derivative(w3.b, 1).values - da3.values - wedge(w1, w2)
    checks = {
        "dw1 = w3^w2": _sup(r1),
        "dw2 = w1^w3": _sup(r2),
        "dw3 = w1^w2": _sup(r3),
    }
    return GeometryResidualReport(
        "pss_structure",
        max(checks.values()),
        u.grid.n,
        params={"lambda_spec": lam},
        checks=checks,
    )


def affine_form_tables(u: PeriodicField, lam: float):
    """Coefficient tables (f_j^k, g_j^k, h_pq) of the Maurer-Cartan forms
    omega_j^k = f_j^k dx + g_j^k dt, omega^p = h_p1 dx + h_p2 dt built
    from a muDP field u and spectral parameter lam."""
    if lam == 0.0:
        raise ValueError("spectral parameter must be nonzero")
    grid = u.grid
    m = apply_A(u).values
    ux = derivative(u, 1).values
    uv = u.values
    mu = mean(u)
    zero = np.zeros(grid.n)
    one = np.ones(grid.n)
    f = {
        (1, 1): zero,
        (1, 2): lam * m,
        (1, 3): one / (2.0 * lam),
        (2, 1): zero,
        (2, 2): zero,
        (2, 3): one / lam,
        (3, 1): -lam * one,
        (3, 2): (lam / 2.0) * one,
        (3, 3): zero,
    }
    g = {
        (1, 1): 1.0 / (2.0 * lam) - ux,
        (1, 2): -(4.0 * lam**2 * uv * m - 4.0 * lam * ux + 1.0) / (4.0 * lam),
        (1, 3): -(2.0 * mu + uv) / (2.0 * lam),
        (2, 1): one / lam,
        (2, 2): ux - 1.0 / (2.0 * lam),
        (2, 3): -uv / lam,
        (3, 1): lam * uv,
        (3, 2): lam * (mu - 0.5 * uv),
        (3, 3): zero,
    }
    h = {
        (1, 1): one,
        (1, 2): -uv,
        (2, 1): -0.5 * one,
        (2, 2): 0.5 * uv - mu * one,
    }
    return f, g, h


def affine_structure_residual(
    u: PeriodicField, lambda_spec: float, u_t: PeriodicField | None = None
) -> GeometryResidualReport:
    """Residuals of the unimodular-affine structure equations for the
    Maurer-Cartan tables of affine_form_tables().

    Checked identities: the trace sum_j omega_j^j = 0 (both coefficients,
    exact coefficient algebra), d omega_j^l = sum_k omega_j^k ^ omega_k^l
    for all (j, l), omega^1 ^ omega_1^3 + omega^2 ^ omega_2^3 = 0, and
    the two surface equations d omega^p = sum_q omega^q ^ omega_q^p.
    Among the dx-coefficients only f_1^2 = lam m carries time dependence.
    u_t defaults to the muDP evolution of u.
    """
    if lambda_spec == 0.0:
        raise ValueError("spectral parameter must be nonzero")
    if u_t is None:
        u_t = _mu_dp_ut(u)
    lam = lambda_spec
    grid = u.grid
    f, g, h = affine_form_tables(u, lam)
    m_t = (mean(u_t) - derivative(u_t, 2)).values

    def dx(vals: np.ndarray) -> np.ndarray:
        return derivative(PeriodicField(grid, vals), 1).values

    checks: dict[str, float] = {}
    checks["trace dx"] = _sup(f[(1, 1)] + f[(2, 2)] + f[(3, 3)])
    checks["trace dt"] = _sup(g[(1, 1)] + g[(2, 2)] + g[(3, 3)])
    for j in (1, 2, 3):
        for l in (1, 2, 3):
            dft = lam * m_t if (j, l) == (1, 2) else 0.0
            lhs = dx(g[(j, l)]) - dft
            rhs_w = sum(
                f[(j, k)] * g[(k, l)] - g[(j, k)] * f[(k, l)] for k in (1, 2, 3)
            )
            checks[f"dw_{j}{l}"] = _sup(lhs - rhs_w)
    checks["w1^w13 + w2^w23"] = _sup(
        h[(1, 1)] * g[(1, 3)]
        - h[(1, 2)] * f[(1, 3)]
        + h[(2, 1)] * g[(2, 3)]
        - h[(2, 2)] * f[(2, 3)]
    )
    checks["dw^2"] = _sup(
        dx(h[(2, 2)])
        - (h[(1, 1)] * g[(1, 2)] - h[(1, 2)] * f[(1, 2)])
        - (h[(2, 1)] * g[(2, 2)] - h[(2, 2)] * f[(2, 2)])
    )
    checks["dw^1"] = _sup(
        dx(h[(1, 2)])
        - (h[(1, 1)] * g[(1, 1)] - h[(1, 2)] * f[(1, 1)])
        - (h[(2, 1)] * g[(2, 1)] - h[(2, 2)] * f[(2, 1)])
    )
    return GeometryResidualReport(
        "affine_structure",
        max(checks.values()),
        grid.n,
        params={"lambda_spec": lam},
        checks=checks,
    )
