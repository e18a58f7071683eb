"""mulab: a numerical laboratory for the periodic mu-family of nonlinear
nonlocal wave equations (muCH at lambda = 2, muDP at lambda = 3, and
relatives), built on Fourier pseudospectral calculus over the unit circle.
"""

from .blowup import (
    BlowupReport,
    CriterionResult,
    estimate_breakdown,
    evaluate_all,
    mu_ch_h2_criterion,
    mu_ch_ratio_criterion,
    mu_ch_slope_criterion,
    mu_dp_ratio_criterion,
    mu_dp_sign_criterion,
)
from .diagnostics import (
    DiagnosticsRow,
    apriori_sup_bound,
    conserved_mu_ch,
    conserved_mu_dp,
    linear_growth_bound,
    lyapunov_v,
    sobolev_oracle,
    wirtinger_oracle,
)
from .evolution import (
    ModelParams,
    SolutionRecord,
    SolverConfig,
    Termination,
    characteristics,
    evolve,
    local_conservation_residual,
    rhs,
)
from .field import (
    Antiderivative,
    CorruptionError,
    GridMismatchError,
    PeriodicField,
    PeriodicGrid,
    antiderivative,
    derivative,
    integrate,
    mean,
    resolvedness,
    trig_eval,
)
from .muop import (
    MuOperatorKernel,
    ainv_dx,
    ainv_dxx,
    apply_A,
    green,
    green_prime,
    invert_A,
)
from .peakon import (
    PeakonConfig,
    m_tail,
    multipeakon_field,
    one_peakon,
    shockpeakon_field,
    traveling_wave_residual,
)

__version__ = "0.1.0"
