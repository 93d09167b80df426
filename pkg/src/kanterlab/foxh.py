"""Fox H-function tools: parameter blocks, the existence classifier, the
residue series for H^{1,0}_{p,q}, and Mellin-Barnes quadrature along a
vertical line.

    H^{m,n}_{p,q}[z] = (1/2 pi i) int_L Theta(s) z^{-s} ds,

    Theta(s) = prod_{i<=m} G(b_i + B_i s) prod_{i<=n} G(1 - a_i - A_i s)
               / (prod_{i>m} G(1 - b_i - B_i s) prod_{i>n} G(a_i + A_i s)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import DomainError, ParameterError, TruncationError
from .kanter import AlphaLike, as_alpha
from .numerics import (
    DEFAULT_POLICY,
    SeriesPolicy,
    log_abs_recip_gamma,
    log_gamma_complex,
    sum_series,
)

# relative slack used when testing mu == 0 and |z| == beta in floating point
_ZERO_SLACK = 1e-12

CASES = ("i", "ii", "iii", "iv", "v")


@dataclass(frozen=True)
class HParams:
    """Parameter block (m, n, (a_i, A_i)_{i<=p}, (b_i, B_i)_{i<=q})."""

    m: int
    n: int
    upper: tuple
    lower: tuple

    def __post_init__(self):
        up = tuple((float(a), float(A)) for a, A in self.upper)
        lo = tuple((float(b), float(B)) for b, B in self.lower)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)
        if not 1 <= self.m <= len(lo):
            raise ParameterError(f"need 1 <= m <= q, got m={self.m}, q={len(lo)}")
        if not 0 <= self.n <= len(up):
            raise ParameterError(f"need 0 <= n <= p, got n={self.n}, p={len(up)}")
        if any(A <= 0 for _, A in up) or any(B <= 0 for _, B in lo):
            raise ParameterError("all A_i and B_i must be positive")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def mu(self) -> float:
        return sum(B for _, B in self.lower) - sum(A for _, A in self.upper)

    @property
    def beta(self) -> float:
        log_beta = (sum(-A * math.log(A) for _, A in self.upper)
                    + sum(B * math.log(B) for _, B in self.lower))
        return math.exp(log_beta)

    @property
    def omega(self) -> float:
        return (sum(A for _, A in self.upper[:self.n]) + sum(B for _, B in self.lower[:self.m])
                - sum(A for _, A in self.upper[self.n:]) - sum(B for _, B in self.lower[self.m:]))

    @property
    def delta(self) -> float:
        return (sum(b for b, _ in self.lower) - sum(a for a, _ in self.upper)
                + (self.p - self.q) / 2.0)

    def _scale(self) -> float:
        return sum(A for _, A in self.upper) + sum(B for _, B in self.lower)

    def log_theta(self, s):
        """log Theta(s) for complex s (array friendly), modulo 2 pi i."""
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        for b, B in self.lower[:self.m]:
            out = out + log_gamma_complex(b + B * s)
        for a, A in self.upper[:self.n]:
            out = out + log_gamma_complex(1.0 - a - A * s)
        for b, B in self.lower[self.m:]:
            out = out - log_gamma_complex(1.0 - b - B * s)
        for a, A in self.upper[self.n:]:
            out = out - log_gamma_complex(a + A * s)
        return out

    def theta(self, s):
        return np.exp(self.log_theta(s))


@dataclass(frozen=True)
class ExistenceReport:
    mu: float
    beta: float
    omega: float
    delta: float
    cases: frozenset


def existence(params: HParams) -> ExistenceReport:
    """Classify which of the five existence regimes apply.

    i)   q >= 1, mu > 0: defined for all z != 0.
    ii)  p >= 1, mu = 0: defined for |z| > beta (loop around +infinity).
    iii) Omega > 0: vertical-line integral for |arg z| < pi Omega / 2.
    iv)  q >= 1, mu = 0: defined for |z| < beta (loop around -infinity).
    v)   mu = 0, delta < -1: also defined on |z| = beta.
    """
    slack = _ZERO_SLACK * params._scale()
    mu = params.mu
    if abs(mu) <= slack:
        mu = 0.0
    omega = params.omega
    if abs(omega) <= slack:
        omega = 0.0
    delta = params.delta
    cases = set()
    if params.q >= 1 and mu > 0:
        cases.add("i")
    if params.p >= 1 and mu == 0:
        cases.add("ii")
    if omega > 0:
        cases.add("iii")
    if params.q >= 1 and mu == 0:
        cases.add("iv")
    if mu == 0 and delta < -1:
        cases.add("v")
    return ExistenceReport(mu, params.beta, omega, delta, frozenset(cases))


def _h10_terms(params: HParams, logz: float) -> Iterator[float]:
    b1, B1 = params.lower[0]
    log_b1 = math.log(B1)
    k = 0
    while True:
        s = -(b1 + k) / B1
        sign = -1.0 if k % 2 else 1.0
        mag = -math.lgamma(k + 1.0) - log_b1 + (b1 + k) / B1 * logz
        for b, B in params.lower[1:]:
            sg, lg = log_abs_recip_gamma(1.0 - b - B * s)
            sign *= sg
            mag += lg
        for a, A in params.upper:
            sg, lg = log_abs_recip_gamma(a + A * s)
            sign *= sg
            mag += lg
        yield 0.0 if sign == 0.0 else sign * math.exp(mag)
        k += 1


def h10_series(params: HParams, z: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """H^{1,0}_{p,q}[z] for z > 0 as the sum of residues at s = -(b_1 + k)/B_1.

    Case i allows every z > 0; with mu = 0 the series needs z < beta
    (case iv), and for z > beta case ii gives 0 because the loop around
    +infinity encloses no pole when n = 0.
    """
    if params.m != 1 or params.n != 0:
        raise ParameterError("h10_series handles m = 1, n = 0 only")
    if not z > 0:
        raise DomainError(f"z must be positive, got {z}")
    rep = existence(params)
    if "i" not in rep.cases:
        if rep.mu != 0.0:
            raise DomainError(f"mu = {rep.mu} < 0: no convergent representation implemented")
        beta = rep.beta
        if z > beta * (1 + _ZERO_SLACK):
            return 0.0
        if z >= beta * (1 - _ZERO_SLACK) and "v" not in rep.cases:
            raise DomainError(f"z = beta = {beta} requires delta < -1 (case v)")
    return sum_series(_h10_terms(params, math.log(z)), policy).value


def _check_line(params: HParams, gamma: float) -> None:
    left = max((-b / B for b, B in params.lower[:params.m]), default=-math.inf)
    right = min(((1.0 - a) / A for a, A in params.upper[:params.n]), default=math.inf)
    if not left < gamma < right:
        raise DomainError(
            f"abscissa {gamma} does not separate the pole families ({left}, {right})")


def mellin_barnes_line(params: HParams, z: float, gamma: float, T: float, h: float,
                       symmetrize: bool = True) -> complex:
    """Trapezoid rule for (1/2 pi) int_{-T}^{T} Theta(gamma+it) z^{-(gamma+it)} dt.

    With ``symmetrize`` only t >= 0 is evaluated and twice the real part is
    returned; otherwise both half-lines are evaluated independently and the
    complex sum is returned, whose imaginary part measures asymmetry.
    """
    if not z > 0:
        raise DomainError(f"z must be positive, got {z}")
    _check_line(params, gamma)
    nodes = int(math.ceil(T / h))
    t = np.arange(nodes + 1) * h
    logz = math.log(z)
    w = np.ones_like(t)
    w[0] = 0.5
    w[-1] = 0.5

    def half(sign: float) -> complex:
        s = gamma + 1j * sign * t
        vals = np.exp(params.log_theta(s) - s * logz)
        return complex(np.sum(w * vals) * h)

    if symmetrize:
        return complex(2.0 * half(1.0).real / (2.0 * math.pi))
    return (half(1.0) + half(-1.0)) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# Parameter blocks for the laws in this package


def exp_v_params(alpha: AlphaLike, r: float) -> HParams:
    """Density of exp(V_{alpha,r}) is (1/y) H[1/y] with this block."""
    a = as_alpha(alpha)
    return HParams(1, 0, upper=((1.0, 1.0), (1.0, r)), lower=((1.0, r / a),))


def kanter_params(alpha: AlphaLike) -> HParams:
    """h_alpha(y) = (1/y) H[1/y] with this block."""
    a = as_alpha(alpha)
    b = 1.0 - a
    return HParams(1, 0, upper=((1.0, a / b), (1.0, 1.0)), lower=((1.0, 1.0 / b),))


def kanter_params_doubled(alpha: AlphaLike) -> HParams:
    """h_alpha(y) = (2(1-alpha)/y) H[y**(-2(1-alpha))] with this block."""
    a = as_alpha(alpha)
    return HParams(1, 0, upper=((1.0, 2 * a), (1.0, 2 * (1.0 - a))), lower=((1.0, 2.0),))


def bernstein_params(alpha: AlphaLike) -> HParams:
    """Block of the intermediate function whose derivative gives h_alpha."""
    a = as_alpha(alpha)
    return HParams(1, 0, upper=((1.0, 2 * a), (2.0, 2 * (1.0 - a))), lower=((1.0, 2.0),))


def neg_pow_params(alpha: AlphaLike) -> HParams:
    """Density of X**(-alpha) at x is (2/(alpha x)) H[x**2] with this block."""
    a = as_alpha(alpha)
    return HParams(1, 0, upper=((0.0, 2 * a),), lower=((0.0, 2.0),))


def kanter_pdf_h(alpha: AlphaLike, y: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """h_alpha(y) from the doubled H-function block (residue series)."""
    a = as_alpha(alpha)
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    z = y ** (-2.0 * (1.0 - a))
    return 2.0 * (1.0 - a) / y * h10_series(kanter_params_doubled(a), z, policy)


# ---------------------------------------------------------------------------
# Density of exp(V_{alpha,r}) by Mellin inversion


@dataclass(frozen=True)
class QuadPolicy:
    """Vertical-line quadrature controls.

    ``T=None`` picks the truncation height from the exponential decay rate of
    Theta; ``nodes=None`` picks the spacing from the width of the analytic
    strip around the contour.
    """

    gamma: float = 0.0
    T: Optional[float] = None
    nodes: Optional[int] = None
    target_tol: float = 1e-10

    def __post_init__(self):
        if self.nodes is not None and self.nodes < 64:
            raise ValueError(f"nodes must be >= 64, got {self.nodes}")
        if self.T is not None and not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")


def theta_decay_rate(alpha: AlphaLike, r: float) -> float:
    """Predicted rate kappa in |Theta(gamma+it)| ~ C |t|^(-1/2) exp(-kappa |t|).

    From |Gamma(a+ib)| ~ sqrt(2 pi) |b|^(a-1/2) exp(-a - pi|b|/2):
    kappa = pi (r/alpha - r - 1) / 2, which vanishes at r = alpha/(1-alpha).
    """
    a = as_alpha(alpha)
    return 0.5 * math.pi * (r / a - r - 1.0)


def measured_decay_rate(params: HParams, t1: float, t2: float, gamma: float = 0.0,
                        power: float = -0.5) -> float:
    """Fit kappa from |Theta| at two heights, removing the |t|**power factor."""
    l1 = params.log_theta(gamma + 1j * t1).real - power * math.log(t1)
    l2 = params.log_theta(gamma + 1j * t2).real - power * math.log(t2)
    return -(l2 - l1) / (t2 - t1)


def _tail_bound(params: HParams, gamma: float, T: float, kappa: float) -> float:
    return float(np.exp(params.log_theta(gamma + 1j * T).real)) / kappa


def exp_v_pdf(alpha: AlphaLike, r: float, y, policy: QuadPolicy = QuadPolicy()):
    """Density of exp(V_{alpha,r}) at y > 0 by Mellin inversion on Re(s) = gamma.

    f(y) = (1/(2 pi y)) int Theta(gamma+it) y^(gamma+it) dt, with
    Theta(s) = Gamma(r s/alpha + 1) / (Gamma(s+1) Gamma(r s + 1)), the
    integrand evaluated in log space and the rule symmetrised over t.
    """
    a = as_alpha(alpha)
    if not r > a / (1.0 - a):
        raise ParameterError(f"Mellin inversion needs r > alpha/(1-alpha)={a / (1 - a)}, got {r}")
    params = exp_v_params(a, r)
    gamma = policy.gamma
    if not gamma > -a / r:
        raise DomainError(f"abscissa must exceed -alpha/r={-a / r}, got {gamma}")
    kappa = theta_decay_rate(a, r)
    tol = policy.target_tol

    if policy.T is None:
        T = 1.0
        while _tail_bound(params, gamma, T, kappa) > tol:
            T *= 1.25
            if T > 1e7:
                raise TruncationError("no truncation height meets target_tol")
    else:
        T = policy.T
        bound = _tail_bound(params, gamma, T, kappa)
        if bound > tol:
            raise TruncationError(f"tail bound {bound:.3g} at T={T} exceeds target_tol={tol}")

    ys = np.asarray(y, dtype=float)
    if np.any(~(ys > 0)):
        raise DomainError("exp_v_pdf requires y > 0")
    logy = np.log(ys.ravel())
    if policy.nodes is None:
        d = 0.8 * (gamma + a / r)
        spread = float(np.max(np.abs(logy))) if logy.size else 0.0
        h = 2.0 * math.pi * d / (math.log(1.0 / tol) + math.log(10.0) + d * spread)
        nodes = max(64, int(math.ceil(T / h)))
    else:
        nodes = policy.nodes
    h = T / nodes
    t = np.arange(nodes + 1) * h
    w = np.ones_like(t)
    w[0] = w[-1] = 0.5
    coef = w * np.exp(params.log_theta(gamma + 1j * t))

    out = np.empty(logy.size)
    chunk = max(1, 2_000_000 // t.size)
    for i in range(0, logy.size, chunk):
        ly = logy[i:i + chunk]
        phase = np.exp(1j * np.outer(t, ly))
        integral = 2.0 * (coef @ phase).real * h
        out[i:i + chunk] = integral * np.exp((gamma - 1.0) * ly) / (2.0 * math.pi)
    out = np.where((out < 0) & (np.abs(out) <= tol), 0.0, out)
    out = out.reshape(ys.shape)
    return float(out) if out.ndim == 0 else out


def exp_v_pdf_series(alpha: AlphaLike, r: float, y: float,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Same density from the residue series (1/y) H[1/y] (case i)."""
    if not y > 0:
        raise DomainError(f"y must be positive, got {y}")
    return h10_series(exp_v_params(alpha, r), 1.0 / y, policy) / y


def exp_v_tail_mass(alpha: AlphaLike, r: float, y0: float, order: float = 0.0,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """int_{y0}^inf y**(-order) f(y) dy, integrating the residue series termwise."""
    a = as_alpha(alpha)
    params = exp_v_params(a, r)
    logy0 = math.log(y0)

    def terms():
        # f(y) = sum_k c_k y^(-1 - (1+k) a/r); integrate y^(-order) f
        for k, c in enumerate(_h10_terms(params, 0.0)):
            e = (1 + k) * a / r + order
            yield c * math.exp(-e * logy0) / e

    return sum_series(terms(), policy).value


def exp_v_moment(alpha: AlphaLike, r: float, order: float = 0.0, y_split: float = 20.0,
                 policy: QuadPolicy = QuadPolicy(gamma=1.0)) -> float:
    """int_0^inf y**(-order) f(y) dy from the quadrature density plus the series tail.

    The body is integrated in log y with Gauss-Legendre panels; the lower end is
    cut where the integrand drops below 1e-16 of its peak. A positive abscissa
    keeps the absolute error of f proportional to y**(gamma-1) there.
    """
    a = as_alpha(alpha)
    if not order < 1.0 + a / r:
        raise DomainError(f"moment of order -{order} diverges")
    xg, wg = np.polynomial.legendre.leggauss(24)
    xc, wc = np.polynomial.legendre.leggauss(12)

    def integrand(nodes):
        return np.asarray(exp_v_pdf(a, r, np.exp(nodes), policy)) * np.exp((1.0 - order) * nodes)

    def panel(lo, hi, depth=0):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        vals = integrand(mid + half * xg)
        fine = half * float(wg @ vals)
        coarse = half * float(wc @ integrand(mid + half * xc))
        # sharp peaks near the support edge of a_alpha(U)**c need refinement
        if abs(fine - coarse) > 1e-13 * max(1.0, abs(fine)) and depth < 12:
            return panel(lo, mid, depth + 1)[0] + panel(mid, hi, depth + 1)[0], vals
        return fine, vals

    u_hi = math.log(y_split)
    panels = []
    peak = 0.0
    u = u_hi
    while u > -60.0:
        contrib, vals = panel(u - 1.0, u)
        panels.append(contrib)
        vmax = float(np.max(np.abs(vals)))
        peak = max(peak, vmax)
        if vmax < 1e-16 * peak and u < u_hi - 2.0:
            break
        u -= 1.0
    body = math.fsum(panels)
    return body + exp_v_tail_mass(a, r, y_split, order)
