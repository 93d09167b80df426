"""Kanter's function a_alpha, its inverse, and exact samplers for the
positive stable law.

With U uniform on (0, pi) and L standard exponential, independent,

    X_alpha ** (alpha / (1 - alpha))  ~  a_alpha(U) / L,

where a_alpha(u) = c_alpha(u)**(alpha/(1-alpha)) * c_{1-alpha}(u) and
c_alpha(u) = sin(alpha u) / sin(u).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import DomainError, NearUnitIndexWarning, ParameterError
from .numerics import RandomStream, find_root_monotone, quad

_TAYLOR_U = 1e-4
_SERIES_DLOG_U = 0.05
_SERIES_LOG_U = 0.1
# log(sin x / x) = sum_n l_n x^(2n)
_LOG_SINC_COEFFS = (-1.0 / 6.0, -1.0 / 180.0, -1.0 / 2835.0, -1.0 / 37800.0, -1.0 / 467775.0)
# coefficients of cot(x) = 1/x - sum_n e_n x^(2n-1)
_COT_COEFFS = (1.0 / 3.0, 1.0 / 45.0, 2.0 / 945.0, 1.0 / 4725.0)


@dataclass(frozen=True)
class StabilityIndex:
    """Stability index strictly inside (0, 1)."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not 0.0 < a < 1.0:
            raise DomainError(f"stability index must lie in (0, 1), got {self.alpha}")
        object.__setattr__(self, "alpha", a)
        if a > 0.999:
            warnings.warn(f"alpha={a} is very close to 1; results are not validated there",
                          NearUnitIndexWarning, stacklevel=3)

    def __float__(self) -> float:
        return self.alpha

    @property
    def dual(self) -> "StabilityIndex":
        return StabilityIndex(1.0 - self.alpha)


AlphaLike = Union[float, StabilityIndex]


def as_alpha(alpha: AlphaLike) -> float:
    """Validate an index given as a float or :class:`StabilityIndex`."""
    if isinstance(alpha, StabilityIndex):
        return alpha.alpha
    return StabilityIndex(alpha).alpha


def support_edge(alpha: AlphaLike) -> float:
    """a_alpha(0) = (1 - alpha) * alpha**(alpha / (1 - alpha))."""
    a = as_alpha(alpha)
    return (1.0 - a) * a ** (a / (1.0 - a))


def _ret(x: np.ndarray):
    return float(x) if x.ndim == 0 else x


def _c(alpha: float, u: np.ndarray) -> np.ndarray:
    # sin(alpha u)/sin(u), Taylor branch near 0 (includes u == 0)
    small = u < _TAYLOR_U
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.sin(alpha * u) / np.sin(u)
    taylor = alpha * (1.0 + u * u * (1.0 - alpha * alpha) / 6.0)
    return np.where(small, taylor, direct)


def c_fn(alpha: AlphaLike, u):
    """c_alpha(u) = sin(alpha u) / sin(u) for u in (0, pi)."""
    a = as_alpha(alpha)
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= math.pi)):
        raise DomainError("c_fn requires 0 < u < pi")
    return _ret(_c(a, u))


def _check_angle(u: np.ndarray) -> None:
    if np.any((u < 0) | (u >= math.pi)) or np.any(np.isnan(u)):
        raise DomainError("angle must lie in [0, pi)")


def _log_sinc(x: np.ndarray) -> np.ndarray:
    # log(sin x / x) for |x| <= _SERIES_LOG_U
    x2 = x * x
    acc = np.zeros_like(x)
    for c in reversed(_LOG_SINC_COEFFS):
        acc = (acc + c) * x2
    return acc


def log_kanter_a(alpha: AlphaLike, u):
    """log a_alpha(u), computed without forming a_alpha itself.

    Near u = 0 the deviation from log a_alpha(0) is carried by log(sin x/x)
    series, so it keeps full relative accuracy where a_alpha is flat.
    """
    a = as_alpha(alpha)
    u = np.asarray(u, dtype=float)
    _check_angle(u)
    b = 1.0 - a
    rho = a / b
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = rho * np.log(_c(a, u)) + np.log(_c(b, u))
    us = np.minimum(u, _SERIES_LOG_U)
    ls = _log_sinc(us)
    series = (rho * (math.log(a) + _log_sinc(a * us) - ls)
              + math.log(b) + _log_sinc(b * us) - ls)
    return _ret(np.where(u < _SERIES_LOG_U, series, direct))


def kanter_a(alpha: AlphaLike, u):
    """Kanter's function a_alpha(u) on [0, pi); a_alpha(0) is the analytic limit."""
    with np.errstate(over="ignore"):
        return _ret(np.exp(np.asarray(log_kanter_a(alpha, u))))


def kanter_a_log_derivative(alpha: AlphaLike, u):
    """a'_alpha(u) / a_alpha(u).

    Equals [alpha^2 cot(alpha u) + (1-alpha)^2 cot((1-alpha) u) - cot u] / (1-alpha);
    a cot series is used for small u where the three terms cancel.
    """
    a = as_alpha(alpha)
    u = np.asarray(u, dtype=float)
    _check_angle(u)
    b = 1.0 - a
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (a * a / np.tan(a * u) + b * b / np.tan(b * u) - 1.0 / np.tan(u)) / b
    series = np.zeros_like(u)
    u2 = u * u
    upow = u.copy()
    for n, e in enumerate(_COT_COEFFS, start=1):
        series += e * (1.0 - a ** (2 * n + 1) - b ** (2 * n + 1)) * upow
        upow = upow * u2
    series /= b
    return _ret(np.where(u < _SERIES_DLOG_U, series, direct))


def kanter_a_prime(alpha: AlphaLike, u):
    """Derivative of a_alpha in u (analytic, via logarithmic differentiation)."""
    return _ret(np.asarray(kanter_a(alpha, u)) * np.asarray(kanter_a_log_derivative(alpha, u)))


def _inverse_scalar(a: float, x: float, tol: float) -> float:
    edge = support_edge(a)
    if x < edge:
        raise DomainError(f"x={x} lies below the support edge a_alpha(0)={edge}")
    if x == edge:
        return 0.0
    logx = math.log(x)

    def g(t):
        return log_kanter_a(a, t) - logx

    def dg(t):
        return kanter_a_log_derivative(a, t)

    # upper bracket: move towards pi until a_alpha exceeds x
    delta = 0.5
    hi = math.pi - delta
    while g(hi) <= 0.0:
        delta *= 0.5
        if delta < 4e-16:
            return math.nextafter(math.pi, 0.0)
        hi = math.pi - delta
    x0 = math.sqrt(2.0 * (logx - math.log(edge)) / a)
    return find_root_monotone(g, 0.0, hi, tol=tol, fprime=dg, x0=x0)


def kanter_a_inverse(alpha: AlphaLike, x, tol: float = 1e-13):
    """Angle theta in [0, pi) with a_alpha(theta) = x, for x >= a_alpha(0)."""
    a = as_alpha(alpha)
    xs = np.asarray(x, dtype=float)
    out = np.array([_inverse_scalar(a, float(v), tol) for v in xs.ravel()])
    return _ret(out.reshape(xs.shape))


def kanter_mellin_quad(alpha: AlphaLike, s: float) -> float:
    """E[a_alpha(U)**(-s)] = (1/pi) * int_0^pi a_alpha(theta)**(-s) dtheta, by quadrature."""
    a = as_alpha(alpha)
    if s <= -(1.0 - a):
        raise DomainError(f"moment of order -s={-s} does not exist for alpha={a}")
    val = quad(lambda t: math.exp(-s * log_kanter_a(a, t)), 0.0, math.pi, rel_tol=1e-13)
    return val / math.pi


def kanter_mellin(alpha: AlphaLike, s: float) -> float:
    """Closed form Gamma(s/(1-a)+1) / (Gamma(s+1) Gamma(s a/(1-a)+1))."""
    a = as_alpha(alpha)
    if s <= -(1.0 - a):
        raise DomainError(f"moment of order -s={-s} does not exist for alpha={a}")
    b = 1.0 - a
    return math.exp(math.lgamma(s / b + 1.0) - math.lgamma(s + 1.0) - math.lgamma(s * a / b + 1.0))


# ---------------------------------------------------------------------------
# Samplers


class Transform(str, enum.Enum):
    KANTER_A = "KANTER_A"
    STABLE_X = "STABLE_X"
    STABLE_X_NEG_POW = "STABLE_X_NEG_POW"
    EXP_V = "EXP_V"


@dataclass(frozen=True)
class SampleBatch:
    """Immutable batch of draws together with their provenance."""

    values: np.ndarray
    alpha: StabilityIndex
    transform: Transform
    seed: int
    stream_id: int
    r: Optional[float] = None
    diagnostics: tuple = field(default=())

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(~(v > 0)):
            raise ValueError("sample values must be strictly positive")
        if self.transform is Transform.KANTER_A:
            edge = support_edge(self.alpha)
            if v.size and v.min() < edge * (1 - 1e-12):
                raise ValueError("Kanter draws below the support edge")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


def _index(alpha: AlphaLike) -> StabilityIndex:
    return alpha if isinstance(alpha, StabilityIndex) else StabilityIndex(alpha)


def _diag(idx: StabilityIndex) -> tuple:
    return ("alpha > 0.999: accuracy not validated",) if idx.alpha > 0.999 else ()


def _check_n(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ParameterError(f"sample size must be >= 1, got {n}")
    return n


def sample_kanter(alpha: AlphaLike, n: int, stream: RandomStream) -> SampleBatch:
    """Draws of a_alpha(U), U = pi * V with V uniform on (0, 1)."""
    idx = _index(alpha)
    n = _check_n(n)
    u = math.pi * stream.open_uniform(n)
    vals = np.maximum(kanter_a(idx, u), support_edge(idx))
    return SampleBatch(vals, idx, Transform.KANTER_A, stream.seed, stream.stream_id,
                       diagnostics=_diag(idx))


def _stable_draws(idx: StabilityIndex, n: int, stream: RandomStream) -> np.ndarray:
    a = idx.alpha
    u = math.pi * stream.open_uniform(n)
    el = stream.exponential(n)
    # X = (a(U)/L)**((1-a)/a), assembled in log space
    return (1.0 - a) / a * (np.asarray(log_kanter_a(a, u)) - np.log(el))


def sample_positive_stable(alpha: AlphaLike, n: int, stream: RandomStream) -> SampleBatch:
    """Exact draws of X_alpha (Laplace transform exp(-t**alpha))."""
    idx = _index(alpha)
    n = _check_n(n)
    with np.errstate(over="ignore", under="ignore"):
        vals = np.exp(_stable_draws(idx, n, stream))
    # underflow/overflow at extreme draws is clipped into the positive floats
    vals = np.clip(vals, np.finfo(float).tiny, np.finfo(float).max)
    return SampleBatch(vals, idx, Transform.STABLE_X, stream.seed, stream.stream_id,
                       diagnostics=_diag(idx))


def sample_stable_neg_pow(alpha: AlphaLike, n: int, stream: RandomStream) -> SampleBatch:
    """Draws of X_alpha**(-alpha)."""
    idx = _index(alpha)
    n = _check_n(n)
    with np.errstate(over="ignore", under="ignore"):
        vals = np.exp(-idx.alpha * _stable_draws(idx, n, stream))
    vals = np.clip(vals, np.finfo(float).tiny, np.finfo(float).max)
    return SampleBatch(vals, idx, Transform.STABLE_X_NEG_POW, stream.seed, stream.stream_id,
                       diagnostics=_diag(idx))


def critical_exponent(alpha: AlphaLike) -> float:
    """alpha / (1 - alpha): the exponent at which exp(V) reduces to a_alpha(U)."""
    a = as_alpha(alpha)
    return a / (1.0 - a)


def sample_exp_v(alpha: AlphaLike, r: float, n: int, stream: RandomStream) -> SampleBatch:
    """Exact draws of exp(V_{alpha,r}) for r > alpha/(1-alpha).

    With c = r(1-alpha)/alpha > 1 the Mellin transform factorises as
    E[a_alpha(U)**(-c s)] * Gamma(1+c s)/Gamma(1+s), and the second factor is
    E[X_{1/c}**(-s)]. Hence exp(V) ~ a_alpha(U)**c * X_{1/c}, independent
    factors, and X_alpha**r ~ exp(V)/L for a further independent L.
    """
    idx = _index(alpha)
    n = _check_n(n)
    if not r > critical_exponent(idx):
        raise ParameterError(f"r must exceed alpha/(1-alpha)={critical_exponent(idx)}, got {r}")
    c = r / critical_exponent(idx)
    u = math.pi * stream.open_uniform(n)
    log_a = np.asarray(log_kanter_a(idx, u))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearUnitIndexWarning)
        inner = StabilityIndex(1.0 / c)
    log_x = _stable_draws(inner, n, stream)
    with np.errstate(over="ignore", under="ignore"):
        vals = np.exp(c * log_a + log_x)
    vals = np.clip(vals, np.finfo(float).tiny, np.finfo(float).max)
    return SampleBatch(vals, idx, Transform.EXP_V, stream.seed, stream.stream_id, r=float(r),
                       diagnostics=_diag(idx))
