import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wienerphase.errors import InfeasiblePowerError, InvalidArgumentError
from wienerphase.estimators import McConfig, mc_fading_moments
from wienerphase.fading import (
    closed_form_mean_f,
    closed_form_mean_f_rot,
    closed_form_moments,
    fading_moments,
    interval_sample,
    mean_g,
    sample_intervals,
    sample_wiener_path,
    trapezoid_fading,
    var_g,
)
from wienerphase.params import ChannelParams
from wienerphase.rng import stream_rng


def quad_mean_f(s2):
    # E[F] = int_0^1 exp(-s2 t / 2) dt
    return float(mpmath.quad(lambda t: mpmath.exp(-s2 * t / 2), [0, 1]))


def quad_m2(s2):
    # E|F|^2 = int int exp(-s2 |t - s| / 2) = 2 int_0^1 (1 - u) exp(-s2 u / 2) du
    return float(2 * mpmath.quad(lambda u: (1 - u) * mpmath.exp(-s2 * u / 2), [0, 1]))


class TestParams:
    def test_derived_quantities(self):
        p = ChannelParams(gamma=2.0, delta=0.25, L=4, snr=100.0, t=1.0)
        assert p.sigma2 == pytest.approx(1.0)
        assert p.sigma == pytest.approx(1.0)
        assert p.symbol_time == pytest.approx(1.0)
        assert p.support_edge == pytest.approx(4.0)
        assert p.lam == pytest.approx(21.0)

    @pytest.mark.parametrize(
        "kw",
        [dict(gamma=-1, delta=0.1), dict(gamma=1, delta=0), dict(gamma=1, delta=0.1, L=0), dict(gamma=1, delta=0.1, snr=-1)],
    )
    def test_invalid(self, kw):
        with pytest.raises(InvalidArgumentError):
            ChannelParams(**kw)

    def test_infeasible_power(self):
        p = ChannelParams(gamma=1.0, delta=0.1, L=10, snr=100.0, t=1.0)
        with pytest.raises(InfeasiblePowerError):
            p.require_feasible()

    def test_asymptotic_schedule(self):
        p = ChannelParams.asymptotic(1e4, 0.5)
        assert p.L == 100 and p.delta == pytest.approx(0.01)
        assert p.t == pytest.approx(0.5)


class TestPaths:
    def test_path_shape_and_start(self):
        path = sample_wiener_path(64, stream_rng(1, 0))
        assert path.values.shape == (65,)
        assert path.values[0] == 0.0
        assert path.times[-1] == 1.0

    def test_increment_variance(self):
        rng = stream_rng(3, 0)
        ends = np.array([sample_wiener_path(16, rng).values[-1] for _ in range(4000)])
        assert abs(np.var(ends) - 1) < 4 * math.sqrt(2 / 4000)

    def test_trapezoid_matches_exact_integral(self):
        # linear path sigma*B(t) = t: int_0^1 exp(jt) dt = (e^j - 1)/j
        values = np.linspace(0, 1, 2049)
        F = trapezoid_fading(1.0, values)
        assert F == pytest.approx((np.exp(1j) - 1) / 1j, abs=1e-7)

    def test_modulus_at_most_one(self):
        F, N = sample_intervals(2.0, 2000, 64, stream_rng(4, 0))
        assert np.all(np.abs(F) <= 1 + 1e-12)
        assert F.shape == N.shape == (2000,)

    def test_zero_sigma(self):
        F, N = sample_intervals(0.0, 100, 8, stream_rng(4, 1))
        assert np.all(F == 1) and np.all(N == 0)

    def test_interval_sample_variants(self):
        p = ChannelParams(gamma=1.0, delta=0.1)
        s = interval_sample(p, 32, stream_rng(1, 0))
        assert abs(s.F) <= 1
        s2 = interval_sample(p, 32, stream_rng(1, 0), n_variant="time_average")
        assert s2.F == s.F

    def test_bad_steps(self):
        with pytest.raises(InvalidArgumentError):
            sample_wiener_path(0, stream_rng(1, 0))


class TestClosedForms:
    @pytest.mark.parametrize("s2", [1e-10, 1e-6, 1e-3, 0.01, 0.5, 2.0, 10.0])
    def test_mean_f_vs_quadrature(self, s2):
        assert closed_form_mean_f(s2) == pytest.approx(quad_mean_f(s2), rel=1e-13)

    @pytest.mark.parametrize("s2", [1e-12, 1e-9, 1e-7, 1e-4, 0.01, 1.0, 5.0])
    def test_mean_f_rot_vs_quadrature(self, s2):
        with mpmath.workdps(30):
            ref = mpmath.quad(lambda t: mpmath.exp(-s2 * (t * t - t + 1) / 2), [0, 0.5, 1])
        assert closed_form_mean_f_rot(s2) == pytest.approx(float(ref), rel=1e-13)

    @pytest.mark.parametrize("s2", [1e-4, 0.01, 0.2, 1.0, 4.0])
    def test_m2_vs_quadrature(self, s2):
        assert closed_form_moments(s2 / 2).m2 == pytest.approx(quad_m2(s2), rel=1e-12)

    def test_moments_at_zero_phase_noise(self):
        m = fading_moments(ChannelParams(gamma=0.0, delta=0.1))
        assert (m.m2, m.m4, m.mean_f, m.var_g) == (1.0, 1.0, 1.0, 0.0)

    def test_small_alpha_stability(self):
        # cancellation-prone region: m2 must stay just below 1 and keep its slope -alpha/3
        for alpha in (1e-4, 1e-6, 1e-8):
            m = closed_form_moments(alpha)
            assert (1 - m.m2) / alpha == pytest.approx(1 / 3, rel=1e-3)

    def test_m4_matches_mc(self):
        p = ChannelParams(gamma=1.0, delta=0.5)
        mc = mc_fading_moments(p, McConfig(n_samples=40_000, inner_steps=128))
        cf = fading_moments(p)
        assert mc.m2.agrees(cf.m2, 4) and mc.m4.agrees(cf.m4, 4)
        assert mc.mean_f.agrees(cf.mean_f, 4)

    def test_sixth_moment_formula_is_off(self):
        # The sixth-moment expression tends to 6, not 1, as alpha -> 0 (recorded finding).
        assert closed_form_moments(0.005).m6 > 5
        assert closed_form_moments(0.005).violations()

    def test_var_g_small_interval_limit(self):
        for d in (1e-2, 1e-3):
            p = ChannelParams(gamma=1.0, delta=d, L=round(1 / d))
            assert var_g(p) / d**3 == pytest.approx(1 / 45, rel=0.05)

    def test_mean_g_is_m2(self):
        p = ChannelParams(gamma=1.0, delta=0.1)
        assert mean_g(p) == pytest.approx(closed_form_moments(0.05).m2)

    def test_negative_sigma2(self):
        with pytest.raises(InvalidArgumentError):
            closed_form_mean_f(-1.0)


@settings(max_examples=40, deadline=None)
@given(s2=st.floats(min_value=1e-9, max_value=20.0))
def test_mean_chain_property(s2):
    # Jensen: |E F| <= sqrt(E|F|^2) <= 1, and both decrease toward 0
    mf = closed_form_mean_f(s2)
    m2 = closed_form_moments(s2 / 2).m2
    assert 0 < mf <= math.sqrt(m2) + 1e-15 <= 1 + 1e-15
    assert 0 < closed_form_mean_f_rot(s2) <= mf + 1e-15


@settings(max_examples=25, deadline=None)
@given(sigma=st.floats(0.0, 5.0), seed=st.integers(0, 2**32))
def test_sampled_modulus_property(sigma, seed):
    F, N = sample_intervals(sigma, 64, 32, stream_rng(seed, 0))
    assert np.all(np.abs(F) <= 1 + 1e-12)
    assert np.all(np.isfinite(N))


@settings(max_examples=60, deadline=None)
@given(s2=st.floats(min_value=0.0, max_value=1.0))
def test_rotated_mean_below_gaussian_envelope(s2):
    assert closed_form_mean_f_rot(s2) <= math.exp(-3 * s2 / 8) + 1e-16
