import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kanterlab.errors import DomainError, NearUnitIndexWarning, ParameterError
from kanterlab.kanter import (
    SampleBatch,
    StabilityIndex,
    Transform,
    as_alpha,
    c_fn,
    critical_exponent,
    kanter_a,
    kanter_a_inverse,
    kanter_a_log_derivative,
    kanter_a_prime,
    kanter_mellin,
    kanter_mellin_quad,
    log_kanter_a,
    sample_exp_v,
    sample_kanter,
    sample_positive_stable,
    sample_stable_neg_pow,
    support_edge,
)
from kanterlab.numerics import RandomStream
from kanterlab.series import exp_v_mellin

alphas = st.floats(0.02, 0.98)
angles = st.floats(1e-6, math.pi - 1e-3)


def mp_kanter_a(a, u):
    a, u = mpmath.mpf(a), mpmath.mpf(u)
    c = lambda p: mpmath.sin(p * u) / mpmath.sin(u)
    return c(a) ** (a / (1 - a)) * c(1 - a)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.3, 1.5, float("nan")])
def test_stability_index_rejects(bad):
    with pytest.raises(DomainError):
        StabilityIndex(bad)


def test_stability_index_warns_near_one():
    with pytest.warns(NearUnitIndexWarning):
        StabilityIndex(0.9995)


def test_stability_index_dual_and_float():
    idx = StabilityIndex(0.3)
    assert float(idx) == 0.3
    assert idx.dual.alpha == pytest.approx(0.7)
    assert as_alpha(idx) == 0.3


@pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
def test_support_edge_is_limit_at_zero(a):
    assert kanter_a(a, 0.0) == pytest.approx(support_edge(a), rel=1e-15)
    assert kanter_a(a, 1e-6) == pytest.approx(support_edge(a), rel=1e-10)


def test_kanter_a_half_closed_form():
    u = np.linspace(0.01, 3.1, 50)
    assert np.allclose(kanter_a(0.5, u), 1.0 / (4.0 * np.cos(u / 2) ** 2), rtol=1e-14, atol=0)
    assert kanter_a(0.5, math.pi / 2) == pytest.approx(0.5, rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(alphas, angles)
def test_kanter_a_matches_mpmath(a, u):
    assert kanter_a(a, u) == pytest.approx(float(mp_kanter_a(a, u)), rel=1e-12)


@settings(max_examples=150, deadline=None)
@given(alphas, angles)
def test_log_derivative_matches_mpmath(a, u):
    mp = mpmath.mp
    with mp.workprec(100):
        ref = mpmath.diff(lambda t: mpmath.log(mp_kanter_a(a, t)), u)
    assert kanter_a_log_derivative(a, u) == pytest.approx(float(ref), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("u", [0.0, 0.01, 0.049, 0.051, 0.5])
def test_log_derivative_continuous_at_series_switch(u):
    with mpmath.workprec(100):
        ref = mpmath.diff(lambda t: mpmath.log(mp_kanter_a(0.3, t)), u) if u else 0.0
    assert kanter_a_log_derivative(0.3, u) == pytest.approx(float(ref), rel=1e-12, abs=1e-15)


def test_kanter_a_prime_positive():
    u = np.linspace(0.001, 3.1, 200)
    for a in (0.1, 0.5, 0.9):
        assert np.all(kanter_a_prime(a, u) > 0)


@pytest.mark.parametrize("u", [-0.1, math.pi, 4.0])
def test_kanter_a_domain(u):
    with pytest.raises(DomainError):
        kanter_a(0.5, u)


def test_c_fn_domain_and_value():
    assert c_fn(0.5, math.pi / 2) == pytest.approx(math.sin(math.pi / 4))
    with pytest.raises(DomainError):
        c_fn(0.5, 0.0)


def test_log_kanter_a_finite_near_pi():
    v = log_kanter_a(0.5, math.pi - 1e-12)
    assert math.isfinite(v) and v > 50


@settings(max_examples=200, deadline=None)
@given(alphas, st.floats(1e-4, 3.1))
def test_inverse_round_trip(a, u):
    x = kanter_a(a, u)
    theta = kanter_a_inverse(a, x)
    dlog = kanter_a_log_derivative(a, u)
    # the angle is located to 1e-13, which moves log a by dlog * 1e-13
    assert kanter_a(a, theta) == pytest.approx(x, rel=1e-14 + 2e-13 * dlog)
    # forward error is limited by d(log a)/du, which vanishes at the edge
    assert theta == pytest.approx(u, abs=1e-12 + 4e-16 / dlog)


def test_inverse_edge_and_below():
    assert kanter_a_inverse(0.4, support_edge(0.4)) == 0.0
    with pytest.raises(DomainError):
        kanter_a_inverse(0.4, 0.5 * support_edge(0.4))


def test_inverse_half_closed_form():
    x = np.linspace(0.3, 40, 30)
    assert np.allclose(kanter_a_inverse(0.5, x), 2 * np.arctan(2 * np.sqrt(x - 0.25)), atol=1e-12)


def test_inverse_huge_argument():
    assert kanter_a_inverse(0.5, 1e30) == pytest.approx(math.pi, abs=1e-12)


@pytest.mark.parametrize("a", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("s", [-0.2, 0.5, 1.0, 2.0, 5.0])
def test_mellin_quadrature_vs_closed_form(a, s):
    assert kanter_mellin_quad(a, s) == pytest.approx(kanter_mellin(a, s), rel=1e-10)


def test_mellin_exact_checkpoints():
    assert kanter_mellin(0.5, 1.0) == pytest.approx(2.0, rel=1e-15)
    assert kanter_mellin(2 / 3, 1.0) == pytest.approx(3.0, rel=1e-14)


def test_mellin_domain():
    with pytest.raises(DomainError):
        kanter_mellin(0.5, -0.6)
    with pytest.raises(DomainError):
        kanter_mellin_quad(0.5, -0.5)


# -- samplers


def test_sample_batch_is_read_only_and_tagged():
    b = sample_kanter(0.5, 100, RandomStream(1, 2))
    assert len(b) == 100 and b.transform is Transform.KANTER_A
    assert (b.seed, b.stream_id) == (1, 2)
    with pytest.raises(ValueError):
        b.values[0] = 1.0


def test_sample_batch_validation():
    with pytest.raises(ValueError):
        SampleBatch(np.array([1.0, -1.0]), StabilityIndex(0.5), Transform.STABLE_X, 0, 0)
    with pytest.raises(ValueError):
        SampleBatch(np.array([0.1]), StabilityIndex(0.5), Transform.KANTER_A, 0, 0)


@pytest.mark.parametrize("sampler", [sample_kanter, sample_positive_stable, sample_stable_neg_pow])
def test_samplers_reproducible(sampler):
    a = sampler(0.4, 1000, RandomStream(9)).values
    b = sampler(0.4, 1000, RandomStream(9)).values
    assert np.array_equal(a, b)


def test_sample_size_validation():
    with pytest.raises(ParameterError):
        sample_kanter(0.5, 0, RandomStream(0))


@pytest.mark.parametrize("a", [0.05, 0.5, 0.95])
def test_kanter_draws_above_edge(a):
    v = sample_kanter(a, 10 ** 5, RandomStream(3)).values
    assert v.min() >= support_edge(a)


@pytest.mark.parametrize("a", [0.3, 0.7])
def test_kanter_draws_mellin(a):
    v = sample_kanter(a, 10 ** 6, RandomStream(4)).values
    m = 1.0 / v
    assert abs(m.mean() - kanter_mellin(a, 1.0)) <= 4 * m.std() / 1e3


def test_half_stable_is_levy():
    # X_{1/2} = 1/(4 G) with G ~ Gamma(1/2): E[X^-1] = 4 E[G] = 2
    v = sample_positive_stable(0.5, 10 ** 6, RandomStream(5)).values
    m = 1.0 / v
    assert abs(m.mean() - 2.0) <= 4 * m.std() / 1e3


def test_neg_pow_moment():
    # E[X^(-alpha)] = Gamma(2)/Gamma(1 + alpha)
    a = 0.6
    v = sample_stable_neg_pow(a, 10 ** 6, RandomStream(6)).values
    assert abs(v.mean() - 1.0 / math.gamma(1 + a)) <= 4 * v.std() / 1e3


@pytest.mark.parametrize("a,r,s", [(0.5, 1.5, 1.0), (0.3, 1.0, 0.5), (0.7, 4.0, 2.0)])
def test_exp_v_draws_mellin(a, r, s):
    v = sample_exp_v(a, r, 10 ** 6, RandomStream(7)).values ** (-s)
    assert abs(v.mean() - exp_v_mellin(a, r, s)) <= 4 * v.std() / 1e3


def test_exp_v_over_exponential_is_stable_power():
    # X^r ~ exp(V)/L: Laplace transform of (exp(V)/L)^(1/r) is exp(-t^alpha)
    a, r = 0.5, 2.0
    s = RandomStream(8)
    w = sample_exp_v(a, r, 10 ** 6, s).values / s.exponential(10 ** 6)
    x = np.exp(-0.7 * w ** (1 / r))
    assert abs(x.mean() - math.exp(-0.7 ** a)) <= 4 * x.std() / 1e3


def test_exp_v_requires_r_above_critical():
    with pytest.raises(ParameterError):
        sample_exp_v(0.5, 1.0, 10, RandomStream(0))
    assert critical_exponent(0.5) == 1.0


def test_near_unit_index_diagnostics():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearUnitIndexWarning)
        b = sample_positive_stable(StabilityIndex(0.9995), 10, RandomStream(0))
    assert b.diagnostics
