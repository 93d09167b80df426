"""Executable checks of the distributional identities around Kanter's variable.

Every check yields a :class:`VerificationReport`. Monte Carlo checks use a 4
standard error gate and split the sample across chunk substreams, so a
statistic depends only on (seed, stream id, n, chunk size).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy import stats

from .errors import DomainError, ParameterError
from .foxh import bernstein_params, existence, exp_v_moment
from .free import (
    a_inverse_series,
    contour_c,
    contour_omega_boundary,
    free_image_pdf,
    free_stable_mass,
    free_stable_pdf,
    free_stable_pdf_half,
    kanter_a_inverse_half,
    phase_function,
)
from .kanter import (
    AlphaLike,
    as_alpha,
    kanter_a,
    kanter_mellin,
    kanter_mellin_quad,
    log_kanter_a,
    sample_exp_v,
    support_edge,
)
from .numerics import RandomStream
from .series import exp_v_mellin, kanter_mass, kanter_pdf, kanter_pdf_half

SIGMA_GATE = 4.0
CHUNK = 250_000


@dataclass(frozen=True)
class VerificationReport:
    check_name: str
    statistic: float
    reference: float
    tolerance: float
    n_samples: int
    passed: bool
    diagnostics: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def make_report(name: str, statistic: float, reference: float, tolerance: float,
                n_samples: int = 0, diagnostics: str = "") -> VerificationReport:
    """Build a report whose ``passed`` flag is |statistic - reference| <= tolerance."""
    statistic, reference, tolerance = float(statistic), float(reference), float(tolerance)
    ok = bool(abs(statistic - reference) <= tolerance)
    return VerificationReport(name, statistic, reference, tolerance, int(n_samples), ok, diagnostics)


def _gate(se: float, reference: float) -> float:
    # a constant statistic has zero standard error; leave room for rounding in the reference
    return max(SIGMA_GATE * float(se), 1e-12 * abs(float(reference)))


def _chunked_mean(n: int, stream: RandomStream,
                  draw: Callable[[int, RandomStream], np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Mean and standard error of the columns produced by ``draw``, over n rows.

    Chunk i uses ``stream.substream(i)``; sums are merged in chunk order.
    """
    total = None
    total_sq = None
    for i, start in enumerate(range(0, n, CHUNK)):
        m = min(CHUNK, n - start)
        vals = np.atleast_2d(draw(m, stream.substream(i)))
        s, sq = vals.sum(axis=1), (vals * vals).sum(axis=1)
        total = s if total is None else total + s
        total_sq = sq if total_sq is None else total_sq + sq
    mean = total / n
    var = np.maximum(total_sq / n - mean * mean, 0.0) * n / max(n - 1, 1)
    return mean, np.sqrt(var / n)


# ---------------------------------------------------------------------------
# Beta products


@dataclass(frozen=True)
class BetaSpec:
    """beta_k ~ Beta(k/j + 1, k/(j(j-1))), k = 1..j-1."""

    j: int
    k: int

    def __post_init__(self):
        if self.j < 2 or not 1 <= self.k <= self.j - 1:
            raise ParameterError(f"need j >= 2 and 1 <= k <= j-1, got j={self.j}, k={self.k}")

    @property
    def shape_a(self) -> float:
        return self.k / self.j + 1.0

    @property
    def shape_b(self) -> float:
        return self.k / (self.j * (self.j - 1))


def _check_j(j: int) -> int:
    if int(j) != j or j < 2:
        raise ParameterError(f"j must be an integer >= 2, got {j}")
    return int(j)


def beta_product_mellin(j: int, s: float) -> float:
    """E[(beta_1 ... beta_{j-1})**(s-1)] in closed form."""
    j = _check_j(j)
    if not s > -1.0 / j:
        raise DomainError(f"moment exists for s > -1/j = {-1.0 / j}, got {s}")
    log = (-0.5 * math.log(2 * math.pi) - 0.5 * math.log(j * (j - 1))
           + j * math.log(j) - (j - 1) * math.log(j - 1))
    for k in range(1, j):
        log += math.lgamma(s + k / j) - math.lgamma(s + k / (j - 1))
    return math.exp(log)


def _beta_constant(j: int) -> float:
    return j ** j / (j - 1) ** (j - 1)


def verify_beta_product(j: int, s_grid: Sequence[float], n: int,
                        stream: Optional[RandomStream] = None) -> list[VerificationReport]:
    """E[a_{1-1/j}(U)**(-s)] = j C**(s-1) E[(beta_1...beta_{j-1})**(s-1)], C = j**j/(j-1)**(j-1).

    The left side is always the deterministic quadrature. With n = 0 only the
    closed-form right side is compared; with n > 0 a Monte Carlo right side
    over sampled Beta products is added.
    """
    j = _check_j(j)
    alpha = 1.0 - 1.0 / j
    c = _beta_constant(j)
    specs = [BetaSpec(j, k) for k in range(1, j)]
    out = []
    for s in s_grid:
        lhs = kanter_mellin_quad(alpha, s)
        rhs = j * c ** (s - 1.0) * beta_product_mellin(j, s)
        out.append(make_report(f"beta-product j={j} s={s:g} deterministic", rhs, lhs, 1e-10,
                               diagnostics="quadrature vs closed-form Beta moments"))
    if n > 0:
        if stream is None:
            raise ParameterError("a RandomStream is required when n > 0")
        grid = np.asarray(list(s_grid), dtype=float)

        def draw(m, sub):
            logp = np.zeros(m)
            for sp in specs:
                logp += np.log(sub.beta(sp.shape_a, sp.shape_b, m))
            return np.exp(np.outer(grid - 1.0, logp))

        mean, se = _chunked_mean(n, stream, draw)
        for s, mu, e in zip(grid, mean, se):
            scale = j * c ** (s - 1.0)
            ref = kanter_mellin_quad(alpha, s)
            out.append(make_report(f"beta-product j={j} s={s:g} monte-carlo", scale * mu,
                                   ref, _gate(scale * e, ref), n,
                                   diagnostics=f"standard error {scale * e:.3g}"))
    return out


# ---------------------------------------------------------------------------
# Williams' Gamma-product representation


def williams_reference(j: int, s: float) -> float:
    """E[(1/X_{1/j})**s] = Gamma(1 + j s) / Gamma(1 + s)."""
    return math.exp(math.lgamma(1.0 + j * s) - math.lgamma(1.0 + s))


def verify_williams(j: int, s_grid: Sequence[float], n: int,
                    stream: Optional[RandomStream] = None) -> list[VerificationReport]:
    """j**j gamma_1...gamma_{j-1} ~ 1/X_{1/j} ~ L**(j-1) / a_{1-1/j}(U), at the level of s-moments.

    gamma_k has shape k/j. Deterministic forms: the Gamma product
    j**(j s) prod Gamma(s + k/j)/Gamma(k/j), the Kanter quadrature times
    Gamma(1 + (j-1) s), and the exp(V) Mellin transform with r = 1/(j-1).
    """
    j = _check_j(j)
    alpha = 1.0 - 1.0 / j
    out = []
    for s in s_grid:
        ref = williams_reference(j, s)
        prod = math.exp(j * s * math.log(j) + sum(math.lgamma(s + k / j) - math.lgamma(k / j)
                                                  for k in range(1, j)))
        kanter = math.gamma(1.0 + (j - 1) * s) * kanter_mellin_quad(alpha, s)
        # X**r = exp(V)/L with r = 1/(j-1), so E[X**(-s)] = Theta((j-1)s) Gamma(1+(j-1)s)
        expv = exp_v_mellin(1.0 / j, 1.0 / (j - 1), (j - 1) * s) * math.gamma(1.0 + (j - 1) * s)
        for label, val in (("gamma-product", prod), ("kanter-quadrature", kanter),
                           ("exp-v-mellin", expv)):
            out.append(make_report(f"williams j={j} s={s:g} {label}", val, ref, 1e-8 * max(1.0, ref)))
    if n > 0:
        if stream is None:
            raise ParameterError("a RandomStream is required when n > 0")
        grid = np.asarray(list(s_grid), dtype=float)

        def draw(m, sub):
            # 1/X_{1/j}: X = (a_{1/j}(U)/L)**(j-1)
            inv = 1.0 / j
            u = math.pi * sub.open_uniform(m)
            el = sub.exponential(m)
            log_inv_x = -(1.0 - inv) / inv * (np.asarray(log_kanter_a(inv, u)) - np.log(el))
            # L**(j-1) / a_{1-1/j}(U)
            u2 = math.pi * sub.open_uniform(m)
            el2 = sub.exponential(m)
            log_kl = (j - 1) * np.log(el2) - np.asarray(log_kanter_a(alpha, u2))
            # j**j gamma_1 ... gamma_{j-1}
            log_g = np.full(m, j * math.log(j))
            for k in range(1, j):
                log_g += np.log(sub.gamma(k / j, m))
            cols = [np.exp(np.outer(grid, lv)) for lv in (log_inv_x, log_kl, log_g)]
            return np.vstack(cols + [cols[0] - cols[1], cols[0] - cols[2], cols[1] - cols[2]])

        mean, se = _chunked_mean(n, stream, draw)
        g = grid.size
        names = ("1/X", "L^(j-1)/a(U)", "gamma-product")
        for i, s in enumerate(grid):
            ref = williams_reference(j, s)
            for r, name in enumerate(names):
                mu, e = mean[r * g + i], se[r * g + i]
                out.append(make_report(f"williams j={j} s={s:g} monte-carlo {name}", mu, ref,
                                       _gate(e, ref), n, f"standard error {e:.3g}"))
            for r, pair in enumerate(("1/X vs L^(j-1)/a(U)", "1/X vs gamma-product",
                                      "L^(j-1)/a(U) vs gamma-product")):
                mu, e = mean[(3 + r) * g + i], se[(3 + r) * g + i]
                out.append(make_report(f"williams j={j} s={s:g} pairwise {pair}", mu, 0.0,
                                       SIGMA_GATE * e, n, f"standard error {e:.3g}"))
    return out


# ---------------------------------------------------------------------------
# Laplace transform and Cressie's limit


def verify_laplace(alpha: AlphaLike, t_grid: Sequence[float], n: int,
                   stream: RandomStream) -> list[VerificationReport]:
    """mean(exp(-t X_alpha)) against exp(-t**alpha), 4 standard errors."""
    a = as_alpha(alpha)
    if n < 10_000:
        raise ParameterError(f"the Laplace gate needs n >= 1e4, got {n}")
    grid = np.asarray(list(t_grid), dtype=float)
    if np.any(~(grid > 0)):
        raise DomainError("t values must be positive")

    def draw(m, sub):
        u = math.pi * sub.open_uniform(m)
        el = sub.exponential(m)
        with np.errstate(over="ignore"):
            x = np.exp((1.0 - a) / a * (np.asarray(log_kanter_a(a, u)) - np.log(el)))
        return np.exp(-np.outer(grid, x))

    mean, se = _chunked_mean(n, stream, draw)
    return [make_report(f"laplace alpha={a:g} t={t:g}", mu, math.exp(-t ** a), _gate(e, 1.0), n,
                        f"standard error {e:.3g}") for t, mu, e in zip(grid, mean, se)]


def ks_to_inverse_exponential(sample: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance to the law of 1/L, with CDF exp(-1/x)."""
    return float(stats.kstest(sample, lambda x: np.exp(-1.0 / x)).statistic)


def cressie_statistics(alpha: AlphaLike, n: int, stream: RandomStream) -> dict:
    """KS distance of X_alpha**alpha to 1/L, and the spread of a_alpha(U)."""
    a = as_alpha(alpha)
    u = math.pi * stream.open_uniform(n)
    el = stream.exponential(n)
    log_a = np.asarray(log_kanter_a(a, u))
    # X**alpha = (a(U)/L)**(1-alpha), kept in log space for tiny alpha
    xa = np.exp((1.0 - a) * (log_a - np.log(el)))
    kan = np.exp(log_a)
    return {"ks": ks_to_inverse_exponential(xa), "std": float(np.std(kan)),
            "median": float(np.median(kan)), "min": float(kan.min())}


def _decreasing(name: str, values: Sequence[float], labels: Sequence[str],
                n: int) -> list[VerificationReport]:
    # statistic = next value, tolerance = previous value: passes iff 0 <= next <= previous
    out = []
    for (v0, l0), (v1, l1) in zip(zip(values, labels), zip(values[1:], labels[1:])):
        out.append(make_report(f"{name} {l1} <= {l0}", v1, 0.0, v0, n,
                               f"{l0}: {v0:.6g}, {l1}: {v1:.6g}"))
    return out


def verify_cressie(alpha_list: Sequence[AlphaLike], n: int,
                   stream: RandomStream) -> list[VerificationReport]:
    """Degeneration as alpha decreases: X**alpha approaches 1/L and a_alpha(U) approaches 1.

    Reports monotone decrease along ``alpha_list`` of the KS distance, of
    std(a_alpha(U)), of |median(a_alpha(U)) - 1|, and of h_alpha(2).
    """
    alphas = [as_alpha(a) for a in alpha_list]
    if any(x <= y for x, y in zip(alphas, alphas[1:])):
        raise ParameterError("alpha_list must be strictly decreasing")
    if n < 1:
        raise ParameterError("verify_cressie needs n >= 1")
    labels = [f"alpha={a:g}" for a in alphas]
    st = [cressie_statistics(a, n, stream.substream(i)) for i, a in enumerate(alphas)]
    out = _decreasing("cressie KS(X^alpha, 1/L)", [d["ks"] for d in st], labels, n)
    out += _decreasing("cressie std a(U)", [d["std"] for d in st], labels, n)
    out += _decreasing("cressie |median a(U) - 1|", [abs(d["median"] - 1.0) for d in st], labels, n)
    for a, d, lab in zip(alphas, st, labels):
        edge = support_edge(a)
        out.append(make_report(f"cressie draws above edge {lab}", max(edge - d["min"], 0.0), 0.0,
                               1e-12 * edge, n, f"edge {edge:.6g}, min draw {d['min']:.6g}"))
    out += _decreasing("h_alpha(2)", [float(kanter_pdf(a, 2.0)) for a in alphas], labels, 0)
    return out


# ---------------------------------------------------------------------------
# Deterministic suites


def mellin_reports(n: int = 0, stream: Optional[RandomStream] = None) -> list[VerificationReport]:
    out = []
    for a in (0.3, 0.5, 0.7):
        for s in (0.5, 1.0, 2.0):
            out.append(make_report(f"mellin kanter alpha={a:g} s={s:g}", kanter_mellin_quad(a, s),
                                   kanter_mellin(a, s), 1e-8))
    out.append(make_report("mellin kanter alpha=1/2 s=1 exact", kanter_mellin_quad(0.5, 1.0), 2.0, 1e-8))
    out.append(make_report("mellin kanter alpha=2/3 s=1 exact", kanter_mellin_quad(2 / 3, 1.0), 3.0, 1e-8))
    for s in (0.5, 1.0):
        out.append(make_report(f"mellin exp(V) alpha=1/2 r=1.5 s={s:g} quadrature",
                               exp_v_moment(0.5, 1.5, s), exp_v_mellin(0.5, 1.5, s), 1e-6))
    if n > 0 and stream is not None:
        grid = np.array([0.5, 1.0])
        mean, se = _chunked_mean(n, stream, lambda m, sub: np.power.outer(
            sample_exp_v(0.5, 1.5, m, sub).values, -grid).T)
        for s, mu, e in zip(grid, mean, se):
            out.append(make_report(f"mellin exp(V) alpha=1/2 r=1.5 s={s:g} monte-carlo", mu,
                                   exp_v_mellin(0.5, 1.5, s), _gate(e, mu), n,
                                   f"standard error {e:.3g}"))
    return out


def closed_form_half_reports() -> list[VerificationReport]:
    y = np.logspace(math.log10(0.26), math.log10(50.0), 100)
    rel = np.max(np.abs(np.asarray(kanter_pdf(0.5, y)) / np.asarray(kanter_pdf_half(y)) - 1.0))
    x = np.linspace(0.26, 20.0, 200)
    free = np.max(np.abs(np.asarray(free_stable_pdf(0.5, x)) - np.asarray(free_stable_pdf_half(x))))
    xs = x[x >= 0.3]
    inv = np.max(np.abs(np.asarray(a_inverse_series(0.5, xs)) - np.asarray(kanter_a_inverse_half(xs))))
    return [
        make_report("closed-form h_1/2 max relative error", rel, 0.0, 1e-9),
        make_report("closed-form free density alpha=1/2 max error", free, 0.0, 1e-9),
        make_report("closed-form a_1/2 inverse series max error", inv, 0.0, 1e-8),
    ]


def contour_reports() -> list[VerificationReport]:
    out = []
    thetas = np.arange(2, 31) / 10.0
    for a in np.round(np.arange(0.2, 0.81, 0.1), 10):
        im = re = inv = 0.0
        for t in thetas:
            ph = phase_function(a, contour_c(a, t))
            im = max(im, abs(ph.imag))
            re = max(re, abs(ph.real / float(kanter_a(a, t)) - 1.0))
            w = contour_omega_boundary(a, t).u - 1.0 / np.conj(contour_c(1.0 - a, t).u)
            inv = max(inv, abs(w))
        out.append(make_report(f"contour alpha={a:g} Im phase", im, 0.0, 1e-12))
        out.append(make_report(f"contour alpha={a:g} Re phase vs a_alpha", re, 0.0, 1e-10))
        out.append(make_report(f"contour alpha={a:g} inversion relation", inv, 0.0, 1e-12))
    return out


def normalization_reports() -> list[VerificationReport]:
    out = []
    for a in (0.2, 0.5, 0.8):
        out.append(make_report(f"normalization h_alpha alpha={a:g}", kanter_mass(a), 1.0, 1e-6))
        out.append(make_report(f"normalization free density alpha={a:g}", free_stable_mass(a), 1.0, 1e-6))
    out.append(make_report("normalization exp(V) alpha=1/2 r=1.5", exp_v_moment(0.5, 1.5, 0.0), 1.0, 1e-4))
    out.append(make_report("first inverse moment exp(V) alpha=1/2 r=1.5", exp_v_moment(0.5, 1.5, 1.0),
                           6.0 / math.gamma(2.5), 1e-4))
    return out


def existence_reports() -> list[VerificationReport]:
    out = []
    for a in (0.2, 0.5, 0.8):
        rep = existence(bernstein_params(a))
        out.append(make_report(f"existence mu alpha={a:g}", rep.mu, 0.0, 0.0))
        out.append(make_report(f"existence delta alpha={a:g}", rep.delta, -1.5, 1e-15))
        edge = rep.beta ** (-1.0 / (2.0 * (1.0 - a)))
        out.append(make_report(f"existence edge beta^(-1/(2(1-alpha))) alpha={a:g}", edge,
                               support_edge(a), 1e-12))
    return out


def free_limit_reports() -> list[VerificationReport]:
    alphas = (0.3, 0.1, 0.03)
    gaps = [abs(float(free_image_pdf(a, 2.0)) - 0.5) for a in alphas]
    return _decreasing("free limit |image density(2) - 1/2|", gaps, [f"alpha={a:g}" for a in alphas], 0)


SUITES = ("laplace", "mellin", "beta-product", "williams", "cressie", "closed-form-half",
          "contour", "normalization", "existence")


def run_suite(name: str, n: int = 1_000_000, seed: int = 0) -> list[VerificationReport]:
    """Run a named suite, or every suite for ``"all"``.

    Monte Carlo parts are skipped when n = 0. The laplace suite is Monte
    Carlo only and then produces no reports; cressie keeps its deterministic
    free-limit checks.
    """
    names: Iterable[str] = SUITES if name == "all" else (name,)
    out: list[VerificationReport] = []
    for i, suite in enumerate(names):
        if suite not in SUITES:
            raise ParameterError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
        stream = RandomStream(seed, stream_id=SUITES.index(suite))
        if suite == "laplace":
            if n > 0:
                for k, a in enumerate((0.3, 0.5, 0.7)):
                    out += verify_laplace(a, (0.5, 1.0, 2.0), max(n, 10_000), stream.substream(k))
        elif suite == "mellin":
            out += mellin_reports(n, stream)
        elif suite == "beta-product":
            for k, j in enumerate((2, 3, 4)):
                out += verify_beta_product(j, (0.5, 1.0, 1.5, 2.0), n, stream.substream(k))
        elif suite == "williams":
            for k, j in enumerate((2, 3)):
                out += verify_williams(j, (0.5, 1.0), n, stream.substream(k))
        elif suite == "cressie":
            if n > 0:
                out += verify_cressie((0.3, 0.1, 0.03), n, stream)
            out += free_limit_reports()
        elif suite == "closed-form-half":
            out += closed_form_half_reports()
        elif suite == "contour":
            out += contour_reports()
        elif suite == "normalization":
            out += normalization_reports()
        elif suite == "existence":
            out += existence_reports()
    return out
