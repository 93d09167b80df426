"""Foundation numerics: Gamma-family functions, root finding, series and
quadrature helpers, and reproducible random streams.

Everything here is pure except :class:`RandomStream`, whose draws advance
a generator owned by that stream only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Optional

import numpy as np
from scipy import integrate

from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    PoleError,
    SeriesDivergenceError,
)

LOG_PI = math.log(math.pi)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_C = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation controls shared by every series evaluation."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms: int = 10000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.abs_tol < 0:
            raise ValueError(f"abs_tol must be nonnegative, got {self.abs_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_POLICY = SeriesPolicy()


# ---------------------------------------------------------------------------
# Gamma family


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def sinpi(x: float) -> float:
    """sin(pi*x) with exact zeros at the integers."""
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r == 0.0 or abs(r) == 1.0:
        return 0.0
    if abs(r) > 0.5:
        r = math.copysign(1.0, r) - r
    return math.sin(math.pi * r)


def _lanczos_log(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2; principal branch
    zz = z - 1.0
    acc = np.full(zz.shape, _LANCZOS_C[0], dtype=complex)
    for k in range(1, len(_LANCZOS_C)):
        acc = acc + _LANCZOS_C[k] / (zz + k)
    t = zz + _LANCZOS_G + 0.5
    return LOG_SQRT_2PI + (zz + 0.5) * np.log(t) - t + np.log(acc)


def _flip(sign: np.ndarray, w: np.ndarray) -> np.ndarray:
    # componentwise sign change; complex multiplication would turn -0.0 into +0.0
    out = np.empty_like(w)
    out.real = sign * w.real
    out.imag = sign * w.imag
    return out


def _log_sinpi_upper(z: np.ndarray) -> np.ndarray:
    # principal Log(sin(pi z)) for Im z >= 0, overflow-free for large Im z
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        w = -1j * math.pi * z + np.log(0.5j) + np.log1p(-np.exp(2j * math.pi * z))
        far = w.real + 1j * np.angle(np.exp(1j * w.imag))
        # near the real axis: reduce by the nearest integer so sin keeps full relative accuracy
        n = np.round(z.real)
        d = z - n
        # on the real axis take the limit from Im z > 0; sin and the parity flip carry the zero's sign
        d.imag[d.imag == 0] = 0.0
        parity = 1.0 - 2.0 * np.mod(n, 2.0)
        pd = _flip(parity, d)
        near = np.log(_flip(parity, np.sin(math.pi * d)))
        # log(pi d) - (pi d)^2/6 avoids subnormal sin values
        tiny = LOG_PI + np.log(pd) - (math.pi * d) ** 2 / 6.0
    near = np.where(np.abs(d) < 1e-8, tiny, near)
    return np.where(np.abs(z.imag) < 10.0, near, far)


def log_gamma_complex(z):
    """Principal branch of log Gamma(z) for complex ``z`` (scalar or array).

    Raises :class:`PoleError` at the nonpositive integers.
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    pole = (arr.imag == 0) & (arr.real <= 0) & (arr.real == np.floor(arr.real))
    if np.any(pole):
        raise PoleError(f"log_gamma_complex has a pole at {arr[pole][0].real}")

    flip = arr.imag < 0
    w = np.where(flip, np.conj(arr), arr)
    out = np.empty_like(w)
    right = w.real >= 0.5
    if np.any(right):
        out[right] = _lanczos_log(w[right])
    left = ~right
    if np.any(left):
        zl = w[left]
        corr = 2.0 * math.pi * np.floor(0.5 * zl.real + 0.25)
        out[left] = (LOG_PI + 1j * corr - _log_sinpi_upper(zl)
                     - _lanczos_log(1.0 - zl))
    out = np.where(flip, np.conj(out), out)
    return complex(out[0]) if scalar else out


def recip_gamma(x: float) -> float:
    """1/Gamma(x) for real ``x``; exactly 0 at x = 0, -1, -2, ..."""
    x = float(x)
    if _is_nonpositive_integer(x):
        return 0.0
    if x > 0:
        if x < 171.0:
            return 1.0 / math.gamma(x)
        return math.exp(-math.lgamma(x))
    s = sinpi(x)
    y = 1.0 - x
    if y < 171.0:
        return s * math.gamma(y) / math.pi
    try:
        return math.copysign(math.exp(math.log(abs(s)) + math.lgamma(y) - LOG_PI), s)
    except OverflowError:
        return math.copysign(math.inf, s)


def log_abs_recip_gamma(x: float) -> tuple[float, float]:
    """Return ``(sign, log|1/Gamma(x)|)``; sign is 0.0 at the poles of Gamma."""
    x = float(x)
    if _is_nonpositive_integer(x):
        return 0.0, -math.inf
    if x > 0:
        return 1.0, -math.lgamma(x)
    s = sinpi(x)
    if s == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, s), math.log(abs(s)) + math.lgamma(1.0 - x) - LOG_PI


def gamma_sign_log(x: float) -> tuple[float, float]:
    """Return ``(sign, log|Gamma(x)|)``; raises at the poles."""
    sign, logr = log_abs_recip_gamma(x)
    if sign == 0.0:
        raise PoleError(f"Gamma has a pole at {x}")
    return sign, -logr


def gamma_multiplication(j: int, s: float) -> float:
    """Gamma(j*s + 1) through the Gauss multiplication theorem.

    (2 pi)^{-(j-1)/2} j^{j s + 1/2} prod_{k=1..j} Gamma(s + k/j)
    """
    if j < 2 or int(j) != j:
        raise DomainError(f"j must be an integer >= 2, got {j}")
    j = int(j)
    if _is_nonpositive_integer(j * s + 1.0):
        raise PoleError(f"Gamma(j*s+1) has a pole at j*s+1 = {j * s + 1.0}")
    sign = 1.0
    log_val = -(j - 1) * LOG_SQRT_2PI + (j * s + 0.5) * math.log(j)
    for k in range(1, j + 1):
        sg, lg = gamma_sign_log(s + k / j)
        sign *= sg
        log_val += lg
    return sign * math.exp(log_val)


# ---------------------------------------------------------------------------
# Root finding


def find_root_monotone(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-13,
    fprime: Optional[Callable[[float], float]] = None,
    x0: Optional[float] = None,
    maxiter: int = 200,
) -> float:
    """Root of a strictly monotone ``f`` on ``[lo, hi]``.

    Newton steps (when ``fprime`` is given) are accepted only while they stay
    strictly inside the current bracket; otherwise the bracket is bisected.
    Returns the midpoint of a final bracket of width at most ``tol``.
    """
    if not lo < hi:
        raise BracketError(f"need lo < hi, got [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    increasing = fhi > 0

    def shrink(x: float, fx: float) -> None:
        nonlocal lo, hi
        if (fx > 0) == increasing:
            hi = x
        else:
            lo = x

    x = 0.5 * (lo + hi) if x0 is None or not lo < x0 < hi else float(x0)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0.0:
            return x
        shrink(x, fx)
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        step_ok = False
        if fprime is not None:
            d = fprime(x)
            if d != 0.0 and math.isfinite(d):
                xn = x - fx / d
                if lo < xn < hi:
                    if abs(xn - x) <= 0.25 * tol:
                        # pin the bracket around the Newton limit
                        for probe in (xn - 0.5 * tol, xn + 0.5 * tol):
                            if lo < probe < hi:
                                fp = f(probe)
                                if fp == 0.0:
                                    return probe
                                shrink(probe, fp)
                        if hi - lo <= tol:
                            return 0.5 * (lo + hi)
                        xn = 0.5 * (lo + hi)
                    x = xn
                    step_ok = True
        if not step_ok:
            x = 0.5 * (lo + hi)
    raise ConvergenceError(
        f"root not localised to {tol} after {maxiter} iterations; bracket [{lo}, {hi}]")


# ---------------------------------------------------------------------------
# Series and quadrature


class SeriesSum(NamedTuple):
    value: float
    terms: int
    max_abs_term: float


_CONSECUTIVE_SMALL = 3
_GROWTH_GUARD = 50


def sum_series(terms: Iterable[float], policy: SeriesPolicy = DEFAULT_POLICY) -> SeriesSum:
    """Compensated (Neumaier) summation with the shared stopping rule.

    Stops after three consecutive nonzero terms with
    ``|term| <= rel_tol*|partial| + abs_tol``. Exactly-zero terms (coefficients
    at Gamma poles) neither count toward nor reset that streak. Raises
    :class:`SeriesDivergenceError` after 50 consecutive growing terms and
    :class:`ConvergenceError` when ``max_terms`` is exhausted.
    """
    total = 0.0
    comp = 0.0
    small = 0
    growing = 0
    prev = None
    biggest = 0.0
    n = 0
    for term in terms:
        n += 1
        if not math.isfinite(term):
            raise SeriesDivergenceError(f"non-finite term at index {n - 1}")
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        a = abs(term)
        if a > biggest:
            biggest = a
        if a != 0.0:
            if prev is not None and a > prev:
                growing += 1
                if growing >= _GROWTH_GUARD:
                    raise SeriesDivergenceError(
                        f"terms grew for {_GROWTH_GUARD} consecutive steps (index {n - 1})")
            else:
                growing = 0
            prev = a
            if a <= policy.rel_tol * abs(total + comp) + policy.abs_tol:
                small += 1
                if small >= _CONSECUTIVE_SMALL:
                    return SeriesSum(total + comp, n, biggest)
            else:
                small = 0
        if n >= policy.max_terms:
            break
    raise ConvergenceError(f"series not converged after {n} terms")


def quad(f: Callable[[float], float], a: float, b: float, rel_tol: float = 1e-12,
         abs_tol: float = 0.0, points=None, limit: int = 500) -> float:
    """Adaptive Gauss-Kronrod quadrature of a scalar function."""
    kw = {} if points is None else {"points": points}
    val, _err, *_ = integrate.quad(f, a, b, epsabs=abs_tol, epsrel=rel_tol,
                                   limit=limit, full_output=1, **kw)
    return float(val)


# ---------------------------------------------------------------------------
# Random streams


@dataclass
class RandomStream:
    """Counter-based (Philox) random stream keyed by ``(seed, stream_id)``.

    Equal keys give identical draw sequences. Substreams add a spawn key, so
    per-chunk streams never overlap with their parent or each other.
    """

    seed: int
    stream_id: int = 0
    spawn_key: tuple = ()
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not 0 <= int(v) < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v}")
        ss = np.random.SeedSequence(entropy=int(self.seed),
                                    spawn_key=(int(self.stream_id),) + tuple(self.spawn_key))
        self._gen = np.random.Generator(np.random.Philox(ss))

    def substream(self, index: int) -> "RandomStream":
        return RandomStream(self.seed, self.stream_id, self.spawn_key + (int(index),))

    def open_uniform(self, n: int) -> np.ndarray:
        """Uniform draws strictly inside (0, 1), on a 2**-53 lattice."""
        k = self._gen.integers(0, 2**53, size=n, dtype=np.int64)
        return (k.astype(np.float64) + 0.5) * 2.0**-53

    def exponential(self, n: int) -> np.ndarray:
        return -np.log(self.open_uniform(n))

    def gamma(self, shape: float, n: int) -> np.ndarray:
        return self._gen.standard_gamma(shape, size=n)

    def beta(self, a: float, b: float, n: int) -> np.ndarray:
        return self._gen.beta(a, b, size=n)
