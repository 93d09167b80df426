"""Positive free stable law of index alpha in (0, 1).

Its density is expressed through the inverse of Kanter's function of the
dual index 1 - alpha. The module also provides the two contours on which the
phase u + r**alpha e^{i alpha theta} is real.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DomainError, SlowConvergenceWarning
from .kanter import (
    AlphaLike,
    as_alpha,
    kanter_a,
    kanter_a_inverse,
    kanter_a_prime,
    support_edge,
)
from .numerics import DEFAULT_POLICY, SeriesPolicy, log_abs_recip_gamma, quad, sum_series
from .series import EDGE_BAND, _vectorize


def free_support_edge(alpha: AlphaLike) -> float:
    """a_{1-alpha}(0) = alpha (1-alpha)**((1-alpha)/alpha)."""
    return support_edge(1.0 - as_alpha(alpha))


def _free_density_at_angle(a: float, x: float, theta: float) -> float:
    if theta == 0.0:
        return 0.0
    return math.sin(theta) * math.sin(a * theta) / (math.pi * x * math.sin((1.0 - a) * theta))


def free_stable_pdf(alpha: AlphaLike, x):
    """Density of the positive free stable law.

    With theta = a_{1-alpha}^{-1}(x) the density is
    sin(theta) sin(alpha theta) / (pi x sin((1-alpha) theta)) above the edge
    a_{1-alpha}(0), and 0 at or below it.
    """
    a = as_alpha(alpha)
    edge = free_support_edge(a)

    def one(v: float) -> float:
        if not v > 0:
            raise DomainError(f"free_stable_pdf requires x > 0, got {v}")
        if v <= edge:
            return 0.0
        return _free_density_at_angle(a, v, float(kanter_a_inverse(1.0 - a, v)))

    return _vectorize(one, x)


def free_stable_pdf_half(x):
    """Closed form at alpha = 1/2: sqrt(4x - 1) / (2 pi x**2) for x > 1/4."""

    def one(v: float) -> float:
        if v <= 0.25:
            return 0.0
        return math.sqrt(4.0 * v - 1.0) / (2.0 * math.pi * v * v)

    return _vectorize(one, x)


def free_stable_mass(alpha: AlphaLike) -> float:
    """Total mass of :func:`free_stable_pdf`, integrated in the angle variable.

    x = a_{1-alpha}(theta) maps (0, pi) onto the support, so the mass is
    int_0^pi f(a(theta)) a'(theta) dtheta.
    """
    a = as_alpha(alpha)
    b = 1.0 - a

    def integrand(t: float) -> float:
        x = float(kanter_a(b, t))
        if not math.isfinite(x):
            return 0.0
        return _free_density_at_angle(a, x, t) * float(kanter_a_prime(b, t))

    return quad(integrand, 0.0, math.pi, rel_tol=1e-12)


def free_stable_cdf(alpha: AlphaLike, x):
    """P(Y <= x) for the positive free stable law, integrated in the angle variable."""
    a = as_alpha(alpha)
    b = 1.0 - a
    edge = free_support_edge(a)

    def integrand(t: float) -> float:
        y = float(kanter_a(b, t))
        return _free_density_at_angle(a, y, t) * float(kanter_a_prime(b, t))

    def one(v: float) -> float:
        if not v > 0:
            raise DomainError(f"free_stable_cdf requires x > 0, got {v}")
        if v <= edge:
            return 0.0
        theta = float(kanter_a_inverse(b, v))
        return min(1.0, quad(integrand, 0.0, theta, rel_tol=1e-12))

    return _vectorize(one, x)


def _inverse_terms(a: float, logx: float) -> Iterator[float]:
    # (-1)^k / (k! Gamma(1 - k a) Gamma(1 - k (1-a))) x^(-k a)
    k = 0
    while True:
        s1, l1 = log_abs_recip_gamma(1.0 - k * a)
        s2, l2 = log_abs_recip_gamma(1.0 - k * (1.0 - a))
        if s1 == 0.0 or s2 == 0.0:
            yield 0.0
        else:
            sign = s1 * s2 * (-1.0 if k % 2 else 1.0)
            yield sign * math.exp(l1 + l2 - math.lgamma(k + 1.0) - k * a * logx)
        k += 1


def a_inverse_series(alpha: AlphaLike, x, policy: SeriesPolicy = DEFAULT_POLICY):
    """a_{1-alpha}^{-1}(x) from its power series in x**(-alpha).

    The series converges geometrically with ratio (a_{1-alpha}(0)/x)**alpha,
    so it slows down at the edge; a :class:`SlowConvergenceWarning` is issued
    within 2% of it and :class:`ConvergenceError` if the term cap is reached.
    """
    a = as_alpha(alpha)
    edge = free_support_edge(a)

    def one(v: float) -> float:
        if not v > edge:
            raise DomainError(f"a_inverse_series requires x > a_(1-alpha)(0)={edge}, got {v}")
        if v < EDGE_BAND * edge:
            warnings.warn(f"inverse series evaluated within 2% of the support edge (x={v})",
                          SlowConvergenceWarning, stacklevel=3)
        return math.pi * sum_series(_inverse_terms(a, math.log(v)), policy).value

    return _vectorize(one, x)


def kanter_a_inverse_half(x):
    """a_{1/2}^{-1}(x) = 2 arctan(2 sqrt(x - 1/4)) for x >= 1/4."""

    def one(v: float) -> float:
        if v < 0.25:
            raise DomainError(f"x must be >= 1/4, got {v}")
        return 2.0 * math.atan(2.0 * math.sqrt(v - 0.25))

    return _vectorize(one, x)


def free_limit_pdf(x):
    """Small-index limit density 1/x on (1, inf).

    Not normalizable: the measure dx/x on (1, inf) has infinite mass.
    """

    def one(v: float) -> float:
        if not v > 0:
            raise DomainError(f"free_limit_pdf requires x > 0, got {v}")
        return 1.0 / v if v > 1.0 else 0.0

    return _vectorize(one, x)


FREE_LIMIT_METADATA = {"normalizable": False, "support": "(1, inf)", "mass": math.inf}


def free_image_pdf(alpha: AlphaLike, x):
    """Density of Y**alpha where Y follows the positive free stable law.

    Equals (theta/(pi x)) (sin(alpha theta)/(alpha theta)) sin(theta)/sin((1-alpha) theta)
    with theta = a_{1-alpha}^{-1}(x**(1/alpha)).
    """
    a = as_alpha(alpha)

    def one(v: float) -> float:
        if not v > 0:
            raise DomainError(f"free_image_pdf requires x > 0, got {v}")
        y = v ** (1.0 / a)
        return float(free_stable_pdf(a, y)) * y / (a * v)

    return _vectorize(one, x)


# ---------------------------------------------------------------------------
# Contours


@dataclass(frozen=True)
class ContourPoint:
    """Point u = -r e^{i theta} of a contour, tagged with its angle."""

    theta: float
    u: complex

    @property
    def r(self) -> float:
        return abs(self.u)


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta < math.pi:
        raise DomainError(f"theta must lie in [0, pi), got {theta}")
    return theta


def _sin_ratio(p: float, q: float, theta: float) -> float:
    # sin(p theta) / sin(q theta), limit p/q at theta = 0
    if theta == 0.0:
        return p / q
    return math.sin(p * theta) / math.sin(q * theta)


def contour_c(alpha: AlphaLike, theta: float) -> ContourPoint:
    """Point of C_alpha: u = -r e^{i theta}, r = (sin(alpha theta)/sin theta)**(1/(1-alpha)).

    theta = 0 is accepted and uses the limit r = alpha**(1/(1-alpha)).
    """
    a = as_alpha(alpha)
    t = _check_theta(theta)
    r = _sin_ratio(a, 1.0, t) ** (1.0 / (1.0 - a))
    return ContourPoint(t, -r * complex(math.cos(t), math.sin(t)))


def contour_omega_boundary(alpha: AlphaLike, theta: float) -> ContourPoint:
    """Point of the boundary of Omega_alpha: r = (sin theta / sin((1-alpha) theta))**(1/alpha).

    This is the image of C_{1-alpha} under z -> 1/conj(z).
    """
    a = as_alpha(alpha)
    t = _check_theta(theta)
    r = _sin_ratio(1.0, 1.0 - a, t) ** (1.0 / a)
    return ContourPoint(t, -r * complex(math.cos(t), math.sin(t)))


def phase_function(alpha: AlphaLike, point: ContourPoint) -> complex:
    """-r e^{i theta} + r**alpha e^{i alpha theta}, in the contour parametrisation.

    Evaluated from (r, theta) directly, so no complex power and no branch
    choice is involved. On C_alpha the value is real and equals a_alpha(theta).
    """
    a = as_alpha(alpha)
    r, t = point.r, point.theta
    return point.u + r ** a * complex(math.cos(a * t), math.sin(a * t))


def contour_points(alpha: AlphaLike, n: int, curve: str = "C") -> list[ContourPoint]:
    """n points at theta_k = k pi / n, k = 0..n-1, on C_alpha or the Omega boundary."""
    if curve not in ("C", "omega"):
        raise ValueError(f"curve must be 'C' or 'omega', got {curve!r}")
    if n < 1:
        raise ValueError(f"need at least one point, got {n}")
    fn = contour_c if curve == "C" else contour_omega_boundary
    return [fn(alpha, k * math.pi / n) for k in range(n)]


def contour_array(points: list[ContourPoint]) -> np.ndarray:
    """(n, 3) array of theta, Re u, Im u."""
    return np.array([(p.theta, p.u.real, p.u.imag) for p in points], dtype=float)
