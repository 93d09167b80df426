"""Positive stable laws through Kanter's variable a_alpha(U).

Densities by residue series and by Mellin-Barnes quadrature, exact samplers,
the positive free stable law, and executable checks of the identities that
tie them together.
"""

from .errors import (
    BoundarySingularWarning,
    BracketError,
    ConvergenceError,
    DomainError,
    KanterError,
    NearUnitIndexWarning,
    ParameterError,
    PoleError,
    SeriesDivergenceError,
    SlowConvergenceWarning,
    TruncationError,
)
from .foxh import (
    ExistenceReport,
    HParams,
    QuadPolicy,
    existence,
    exp_v_moment,
    exp_v_pdf,
    exp_v_pdf_series,
    h10_series,
    mellin_barnes_line,
    theta_decay_rate,
)
from .free import (
    ContourPoint,
    a_inverse_series,
    contour_c,
    contour_omega_boundary,
    free_image_pdf,
    free_limit_pdf,
    free_stable_cdf,
    free_stable_pdf,
    kanter_a_inverse_half,
    phase_function,
)
from .kanter import (
    SampleBatch,
    StabilityIndex,
    Transform,
    kanter_a,
    kanter_a_inverse,
    kanter_a_prime,
    kanter_mellin,
    kanter_mellin_quad,
    sample_exp_v,
    sample_kanter,
    sample_positive_stable,
    sample_stable_neg_pow,
    support_edge,
)
from .numerics import (
    DEFAULT_POLICY,
    RandomStream,
    SeriesPolicy,
    find_root_monotone,
    log_gamma_complex,
    recip_gamma,
    sum_series,
)
from .series import (
    exp_v_mellin,
    kanter_cdf,
    kanter_mass,
    kanter_pdf,
    kanter_pdf_half,
    stable_cdf,
    stable_neg_pow_pdf,
    stable_pdf,
)
from .verify import (
    BetaSpec,
    VerificationReport,
    beta_product_mellin,
    run_suite,
    verify_beta_product,
    verify_cressie,
    verify_laplace,
    verify_williams,
)

__version__ = "0.1.0"

__all__ = [
    "BoundarySingularWarning",
    "BracketError",
    "ConvergenceError",
    "DomainError",
    "KanterError",
    "NearUnitIndexWarning",
    "ParameterError",
    "PoleError",
    "SeriesDivergenceError",
    "SlowConvergenceWarning",
    "TruncationError",
    "ExistenceReport",
    "HParams",
    "QuadPolicy",
    "existence",
    "exp_v_moment",
    "exp_v_pdf",
    "exp_v_pdf_series",
    "h10_series",
    "mellin_barnes_line",
    "theta_decay_rate",
    "ContourPoint",
    "a_inverse_series",
    "contour_c",
    "contour_omega_boundary",
    "free_image_pdf",
    "free_limit_pdf",
    "free_stable_cdf",
    "free_stable_pdf",
    "kanter_a_inverse_half",
    "phase_function",
    "SampleBatch",
    "StabilityIndex",
    "Transform",
    "kanter_a",
    "kanter_a_inverse",
    "kanter_a_prime",
    "kanter_mellin",
    "kanter_mellin_quad",
    "sample_exp_v",
    "sample_kanter",
    "sample_positive_stable",
    "sample_stable_neg_pow",
    "support_edge",
    "DEFAULT_POLICY",
    "RandomStream",
    "SeriesPolicy",
    "find_root_monotone",
    "log_gamma_complex",
    "recip_gamma",
    "sum_series",
    "exp_v_mellin",
    "kanter_cdf",
    "kanter_mass",
    "kanter_pdf",
    "kanter_pdf_half",
    "stable_cdf",
    "stable_neg_pow_pdf",
    "stable_pdf",
    "BetaSpec",
    "VerificationReport",
    "beta_product_mellin",
    "run_suite",
    "verify_beta_product",
    "verify_cressie",
    "verify_laplace",
    "verify_williams",
]
