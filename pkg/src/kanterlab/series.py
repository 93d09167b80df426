"""Series and closed-form densities of the positive stable law, of
X_alpha**(-alpha), and of Kanter's variable a_alpha(U).

Series coefficients go through :func:`log_abs_recip_gamma`, so coefficients
sitting on a Gamma pole contribute exact zeros and no rational index needs
special handling.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable, Iterator

import numpy as np

from .errors import (
    BoundarySingularWarning,
    ConvergenceError,
    DomainError,
    SlowConvergenceWarning,
)
from .kanter import (
    AlphaLike,
    as_alpha,
    kanter_a_inverse,
    kanter_a_log_derivative,
    kanter_a_prime,
    log_kanter_a,
    support_edge,
)
from .numerics import (
    DEFAULT_POLICY,
    SeriesPolicy,
    log_abs_recip_gamma,
    quad,
    sinpi,
    sum_series,
)

EDGE_BAND = 1.02
# eps * largest term, relative to the sum, above which a cancelling series is rejected;
# each term carries about |log term| * eps of its own, hence the margin
_CANCELLATION_LIMIT = 1e-13
_EPS = np.finfo(float).eps

METHODS = ("auto", "series", "integral", "inverse")


def _vectorize(fn: Callable[[float], float], x):
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return fn(float(arr))
    return np.array([fn(float(v)) for v in arr.ravel()]).reshape(arr.shape)


def _check_method(method: str, allowed) -> None:
    if method not in allowed:
        raise ValueError(f"method must be one of {allowed}, got {method!r}")


def _clamp(value: float, policy: SeriesPolicy) -> float:
    if value < 0 and abs(value) < policy.abs_tol:
        return 0.0
    return value


# ---------------------------------------------------------------------------
# Positive stable density


def _stable_terms(a: float, logx: float) -> Iterator[float]:
    # -(-1)^k/k! sin(k pi a) Gamma(1+k a) x^(-k a), k >= 1
    k = 1
    while True:
        s = sinpi(k * a)
        if s == 0.0:
            yield 0.0
        else:
            mag = math.lgamma(1.0 + k * a) - math.lgamma(k + 1.0) - k * a * logx + math.log(abs(s))
            sign = math.copysign(1.0, s) * (1.0 if k % 2 else -1.0)
            yield sign * math.exp(mag)
        k += 1


def _stable_cdf_kernel(a: float, w: float, with_a: bool) -> float:
    """int_0^pi a(u)^[with_a] exp(-(a(u) - a(0)) w) du."""
    edge = support_edge(a)

    def integrand(u):
        la = log_kanter_a(a, u)
        expo = -(math.exp(la) - edge) * w
        return math.exp(expo + la) if with_a else math.exp(expo)

    pts = None
    if w > 1.0:
        # peak width near u = 0 is about 1/sqrt(alpha * a(0) * w)
        scale = 1.0 / math.sqrt(a * edge * w)
        pts = [p for p in (scale, 4 * scale, 16 * scale) if p < 0.9 * math.pi] or None
    return quad(integrand, 0.0, math.pi, rel_tol=1e-13, points=pts)


def _stable_pdf_integral(a: float, x: float) -> float:
    # f(x) = (rho/pi) x^(-1/(1-a)) int a(u) exp(-a(u) x^-rho) du, rho = a/(1-a)
    rho = a / (1.0 - a)
    logw = -rho * math.log(x)
    if logw > 700:
        return 0.0
    w = math.exp(logw)
    edge = support_edge(a)
    pref = math.log(rho) - math.log(math.pi) - math.log(x) / (1.0 - a) - edge * w
    if pref < -745:
        return 0.0
    return math.exp(pref) * _stable_cdf_kernel(a, w, with_a=True)


def _stable_pdf_series(a: float, x: float, policy: SeriesPolicy) -> tuple[float, float]:
    res = sum_series(_stable_terms(a, math.log(x)), policy)
    val = res.value / (math.pi * x)
    rounding = _EPS * res.max_abs_term / (math.pi * x)
    return val, rounding


def stable_pdf(alpha: AlphaLike, x, policy: SeriesPolicy = DEFAULT_POLICY, method: str = "auto"):
    """Density of the positive stable law with Laplace transform exp(-t**alpha).

    ``method="series"`` sums the classical expansion in x**(-alpha);
    ``"integral"`` uses the Kanter integral representation;
    ``"auto"`` takes the series unless it cancels catastrophically (small x).
    """
    a = as_alpha(alpha)
    _check_method(method, ("auto", "series", "integral"))

    def one(v: float) -> float:
        if not v > 0:
            raise DomainError(f"stable_pdf requires x > 0, got {v}")
        if method == "integral":
            return _stable_pdf_integral(a, v)
        if method == "series":
            return _clamp(_stable_pdf_series(a, v, policy)[0], policy)
        try:
            val, rounding = _stable_pdf_series(a, v, policy)
        except ConvergenceError:
            return _stable_pdf_integral(a, v)
        if val <= 0 or rounding > _CANCELLATION_LIMIT * abs(val):
            return _stable_pdf_integral(a, v)
        return val

    return _vectorize(one, x)


def stable_cdf(alpha: AlphaLike, x):
    """P(X_alpha <= x) = E[exp(-a_alpha(U) x**(-alpha/(1-alpha)))]."""
    a = as_alpha(alpha)
    rho = a / (1.0 - a)
    edge = support_edge(a)

    def one(v: float) -> float:
        if not v > 0:
            return 0.0
        logw = -rho * math.log(v)
        if logw > 700:
            return 0.0
        w = math.exp(logw)
        if edge * w > 745:
            return 0.0
        return math.exp(-edge * w) * _stable_cdf_kernel(a, w, with_a=False) / math.pi

    return _vectorize(one, x)


def _neg_pow_terms(a: float, logx: float) -> Iterator[float]:
    # (-1)^k/k! x^k / Gamma(-k a), k >= 1
    k = 1
    while True:
        sign, lrg = log_abs_recip_gamma(-k * a)
        if sign == 0.0:
            yield 0.0
        else:
            mag = lrg - math.lgamma(k + 1.0) + k * logx
            yield (-sign if k % 2 else sign) * math.exp(mag)
        k += 1


def stable_neg_pow_pdf(alpha: AlphaLike, x, policy: SeriesPolicy = DEFAULT_POLICY,
                       method: str = "auto"):
    """Density of X_alpha**(-alpha).

    Series: (1/(alpha x)) sum_{k>=1} (-1)^k/k! x^k / Gamma(-k alpha). The
    ``"integral"`` method maps :func:`stable_pdf` through z -> z**(-1/alpha).
    """
    a = as_alpha(alpha)
    _check_method(method, ("auto", "series", "integral"))

    def via_integral(v: float) -> float:
        xv = v ** (-1.0 / a)
        return _stable_pdf_integral(a, xv) * xv / (a * v)

    def one(v: float) -> float:
        if not v > 0:
            raise DomainError(f"stable_neg_pow_pdf requires x > 0, got {v}")
        if method == "integral":
            return via_integral(v)
        try:
            res = sum_series(_neg_pow_terms(a, math.log(v)), policy)
        except ConvergenceError:
            if method == "series":
                raise
            return via_integral(v)
        val = res.value / (a * v)
        if method == "series":
            return _clamp(val, policy)
        if val <= 0 or _EPS * res.max_abs_term / (a * v) > _CANCELLATION_LIMIT * abs(val):
            return via_integral(v)
        return val

    return _vectorize(one, x)


# ---------------------------------------------------------------------------
# Kanter density h_alpha


def _kanter_terms(a: float, logy: float) -> Iterator[float]:
    # (1-a) (-1)^k/k! y^-((k+1)(1-a)+1) / (Gamma(1-a-k a) Gamma(a-k(1-a)))
    b = 1.0 - a
    log_b = math.log(b)
    k = 0
    while True:
        s1, l1 = log_abs_recip_gamma(b - k * a)
        s2, l2 = log_abs_recip_gamma(a - k * b)
        if s1 == 0.0 or s2 == 0.0:
            yield 0.0
        else:
            mag = log_b + l1 + l2 - math.lgamma(k + 1.0) - ((k + 1) * b + 1.0) * logy
            sign = s1 * s2 * (-1.0 if k % 2 else 1.0)
            yield sign * math.exp(mag)
        k += 1


def _kanter_pdf_inverse(a: float, y: float) -> float:
    theta = kanter_a_inverse(a, y)
    # h(y) = 1 / (pi a'(theta)), a' = y * dlog a
    return 1.0 / (math.pi * y * kanter_a_log_derivative(a, theta))


def series_terms_estimate(alpha: AlphaLike, y: float, rel_tol: float) -> float:
    """Rough number of terms the h_alpha series needs at y (geometric rate)."""
    a = as_alpha(alpha)
    q = (support_edge(a) / y) ** (1.0 - a)
    if q >= 1.0:
        return math.inf
    return math.log(rel_tol) / math.log(q)


def kanter_pdf(alpha: AlphaLike, y, policy: SeriesPolicy = DEFAULT_POLICY, method: str = "auto"):
    """Density h_alpha of Kanter's variable a_alpha(U).

    Zero for y <= a_alpha(0). ``"series"`` sums the residue series in
    y**-(1-alpha); ``"inverse"`` uses h(y) = 1/(pi a'(a^{-1}(y))).
    ``"auto"`` uses the series except within 2% of the edge or where its
    geometric rate would need more than half of ``policy.max_terms``.
    """
    a = as_alpha(alpha)
    _check_method(method, ("auto", "series", "inverse"))
    edge = support_edge(a)

    def one(v: float) -> float:
        if not v > 0:
            raise DomainError(f"kanter_pdf requires y > 0, got {v}")
        if v <= edge:
            return 0.0
        near = v < EDGE_BAND * edge
        if method == "inverse":
            return _kanter_pdf_inverse(a, v)
        if method == "auto" and (near or series_terms_estimate(a, v, policy.rel_tol)
                                 > 0.5 * policy.max_terms):
            return _kanter_pdf_inverse(a, v)
        if near:
            warnings.warn(f"h_alpha series evaluated within 2% of the support edge (y={v})",
                          SlowConvergenceWarning, stacklevel=3)
        res = sum_series(_kanter_terms(a, math.log(v)), policy)
        return _clamp(res.value, policy)

    return _vectorize(one, y)


def kanter_pdf_half(y):
    """Closed form h_{1/2}(y) = 1 / (2 pi y sqrt(y - 1/4)) for y > 1/4, else 0.

    At y = 1/4 the density is infinite; +inf is returned with a
    :class:`BoundarySingularWarning`.
    """

    def one(v: float) -> float:
        if v < 0.25:
            return 0.0
        if v == 0.25:
            warnings.warn("h_{1/2} is singular at y = 1/4", BoundarySingularWarning, stacklevel=3)
            return math.inf
        return 1.0 / (2.0 * math.pi * v * math.sqrt(v - 0.25))

    return _vectorize(one, y)


def kanter_cdf(alpha: AlphaLike, y):
    """P(a_alpha(U) <= y) = a_alpha^{-1}(y) / pi."""
    a = as_alpha(alpha)
    edge = support_edge(a)

    def one(v: float) -> float:
        if v <= edge:
            return 0.0
        return kanter_a_inverse(a, v) / math.pi

    return _vectorize(one, y)


def exp_v_mellin(alpha: AlphaLike, r: float, s: float) -> float:
    """E[exp(-s V_{alpha,r})] = Gamma(r s/alpha + 1) / (Gamma(s+1) Gamma(s r + 1)).

    Defined for s > -alpha/r and r >= alpha/(1-alpha).
    """
    a = as_alpha(alpha)
    if r < a / (1.0 - a) * (1.0 - 1e-14):
        raise DomainError(f"r must be >= alpha/(1-alpha)={a / (1 - a)}, got {r}")
    if not s > -a / r:
        raise DomainError(f"Mellin transform requires s > -alpha/r = {-a / r}, got {s}")
    return math.exp(math.lgamma(r * s / a + 1.0) - math.lgamma(s + 1.0) - math.lgamma(s * r + 1.0))


def kanter_pdf_theta(alpha: AlphaLike, theta):
    """h_alpha(a_alpha(theta)) * a'_alpha(theta) evaluated through :func:`kanter_pdf`.

    The product is the density of U in theta, so it should equal 1/pi.
    """
    a = as_alpha(alpha)
    th = np.asarray(theta, dtype=float)
    y = np.exp(np.asarray(log_kanter_a(a, th)))
    return np.asarray(kanter_pdf(a, y)) * np.asarray(kanter_a_prime(a, th))


def kanter_mass(alpha: AlphaLike, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """int h_alpha(y) dy over the support, integrated in the y variable.

    The 1/sqrt(y - a(0)) edge singularity is removed by y = a(0) + t**2; the
    tail beyond 8 a(0) is the termwise integral of the residue series.
    """
    a = as_alpha(alpha)
    b = 1.0 - a
    edge = support_edge(a)
    split = 8.0 * edge
    body = quad(lambda t: 2.0 * t * float(kanter_pdf(a, edge + t * t, policy)),
                0.0, math.sqrt(split - edge), rel_tol=1e-12)
    log_split = math.log(split)

    def tail_terms():
        # int_Y^inf y^-((k+1)b+1) dy = Y^-((k+1)b) / ((k+1)b)
        for k, c in enumerate(_kanter_terms(a, 0.0)):
            e = (k + 1) * b
            yield c * math.exp(-e * log_split) / e

    return body + sum_series(tail_terms(), policy).value
