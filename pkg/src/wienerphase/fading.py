"""Wiener paths, per-interval fading samples and their closed-form statistics.

Within one integrate-and-dump interval the received symbol is rotated by
``F = int_0^1 exp(j*sigma*B(t)) dt`` with ``sigma = gamma*sqrt(delta)`` and the
carrier phase advances by ``N = sigma*B(1)``. Both come from the same path, so
they are sampled together.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import erf

from .errors import InvalidArgumentError
from .params import ChannelParams
from .rng import as_generator

DEFAULT_STEPS = 512
MODULUS_TOL = 1e-12
# Largest number of path grid points materialized at once.
_BATCH_ELEMENTS = 1 << 21
_TAYLOR_BELOW = 1e-8


@dataclass(frozen=True)
class WienerPath:
    """Standard Brownian motion on [0, 1] sampled at ``k/steps``."""

    values: np.ndarray

    @property
    def steps(self) -> int:
        return len(self.values) - 1

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.steps + 1)


@dataclass(frozen=True)
class IntervalSample:
    F: complex
    N: float


@dataclass(frozen=True)
class FadingMoments:
    """Moments of ``Z = |F|`` and related means.

    Fields that a producer does not compute are left as NaN.
    """

    m2: float
    m4: float
    m6: float
    mean_f: float = math.nan
    mean_f_rot: float = math.nan
    mean_g: float = math.nan
    var_g: float = math.nan
    source: str = field(default="closed-form", compare=False)

    def violations(self):
        """Names of the ordering invariants ``1 >= m2 >= m4 >= m6 >= 0`` etc. that fail."""
        bad = []
        if not 1 + MODULUS_TOL >= self.m2:
            bad.append("m2 <= 1")
        if not self.m2 >= self.m4:
            bad.append("m4 <= m2")
        if not self.m4 >= self.m6:
            bad.append("m6 <= m4")
        if not self.m6 >= 0:
            bad.append("m6 >= 0")
        if not math.isnan(self.mean_f) and not 0 < self.mean_f <= 1 + MODULUS_TOL:
            bad.append("0 < mean_f <= 1")
        if not math.isnan(self.var_g) and self.var_g < 0:
            bad.append("var_g >= 0")
        return bad


def sample_wiener_path(steps, rng) -> WienerPath:
    if steps < 1:
        raise InvalidArgumentError(f"steps must be >= 1, got {steps}")
    rng = as_generator(rng)
    inc = rng.standard_normal(steps) * math.sqrt(1.0 / steps)
    return WienerPath(np.concatenate(([0.0], np.cumsum(inc))))


def trapezoid_fading(sigma, values):
    """Trapezoidal quadrature of ``exp(j*sigma*B)`` over uniform grids on [0, 1].

    ``values`` holds one path per row (or a single 1-D path) including the
    initial zero.
    """
    values = np.asarray(values, dtype=float)
    steps = values.shape[-1] - 1
    ph = sigma * values
    c = np.cos(ph)
    s = np.sin(ph)
    re = c[..., 1:-1].sum(axis=-1) + 0.5 * (c[..., 0] + c[..., -1])
    im = s[..., 1:-1].sum(axis=-1) + 0.5 * (s[..., 0] + s[..., -1])
    return (re + 1j * im) / steps


def sample_intervals(sigma, count, steps=DEFAULT_STEPS, rng=None, *, time_average=False):
    """Draw ``count`` independent ``(F, N)`` pairs.

    Returns ``(F, N)`` or, with ``time_average=True``, ``(F, N, N_avg)`` where
    ``N_avg = sigma * int_0^1 B`` comes from the same path as ``F``.
    """
    if steps < 2:
        raise InvalidArgumentError(f"steps must be >= 2, got {steps}")
    rng = as_generator(rng)
    F = np.empty(count, dtype=complex)
    N = np.empty(count)
    N_avg = np.empty(count) if time_average else None
    if sigma == 0.0:
        # Draw anyway so the stream position does not depend on sigma.
        rows = max(1, _BATCH_ELEMENTS // steps)
        for lo in range(0, count, rows):
            rng.standard_normal((min(rows, count - lo), steps))
        F[:] = 1.0
        N[:] = 0.0
        if time_average:
            N_avg[:] = 0.0
        return (F, N, N_avg) if time_average else (F, N)

    rows = max(1, _BATCH_ELEMENTS // steps)
    scale = math.sqrt(1.0 / steps)
    for lo in range(0, count, rows):
        hi = min(count, lo + rows)
        inc = rng.standard_normal((hi - lo, steps))
        inc *= scale
        B = np.empty((hi - lo, steps + 1))
        B[:, 0] = 0.0
        np.cumsum(inc, axis=1, out=B[:, 1:])
        F[lo:hi] = trapezoid_fading(sigma, B)
        N[lo:hi] = sigma * B[:, -1]
        if time_average:
            N_avg[lo:hi] = sigma * (B[:, 1:-1].sum(axis=1) + 0.5 * B[:, -1]) / steps
    return (F, N, N_avg) if time_average else (F, N)


def interval_sample(params: ChannelParams, steps=DEFAULT_STEPS, rng=None, *, n_variant="endpoint"):
    """One ``(F, N)`` pair.

    ``n_variant="time_average"`` returns ``N = sigma * int_0^1 B`` instead of
    the endpoint increment; it exists only to reconcile with the rotated-mean
    closed form.
    """
    if n_variant not in ("endpoint", "time_average"):
        raise InvalidArgumentError(f"unknown n_variant {n_variant!r}")
    F, N, N_avg = sample_intervals(params.sigma, 1, steps, rng, time_average=True)
    n = N_avg[0] if n_variant == "time_average" else N[0]
    return IntervalSample(complex(F[0]), float(n))


def _check_sigma2(sigma2):
    if not sigma2 >= 0:
        raise InvalidArgumentError(f"sigma2 must be >= 0, got {sigma2}")


def closed_form_mean_f(sigma2):
    """``E[F] = (2/sigma2) * (1 - exp(-sigma2/2))``, equal to 1 at ``sigma2 = 0``."""
    _check_sigma2(sigma2)
    x = 0.5 * sigma2
    if x < _TAYLOR_BELOW:
        return 1 - x / 2 + x**2 / 6 - x**3 / 24 + x**4 / 120
    return -math.expm1(-x) / x


def rotated_variance(t, sigma2):
    """Variance of ``sigma*B(t) - sigma*int_0^1 B``: ``sigma2*(t**2 - t + 1)``."""
    return sigma2 * (t * t - t + 1)


# int_0^1 (t^2 - t + 1)^k dt for k = 1..4
_Q_MOMENTS = (5 / 6, 7 / 10, 83 / 140, 319 / 630)


def closed_form_mean_f_rot(sigma2):
    """``sqrt(2*pi/sigma2) * exp(-3*sigma2/8) * erf(sqrt(sigma2/8))``.

    This equals ``int_0^1 exp(-rotated_variance(t)/2) dt``; below ``1e-8`` the
    integral's Taylor series is used instead.
    """
    _check_sigma2(sigma2)
    if sigma2 < _TAYLOR_BELOW:
        s = -0.5 * sigma2
        out, term = 1.0, 1.0
        for k, q in enumerate(_Q_MOMENTS, start=1):
            term *= s / k
            out += term * q
        return out
    return math.sqrt(2 * math.pi / sigma2) * math.exp(-3 * sigma2 / 8) * float(erf(math.sqrt(sigma2 / 8)))


@lru_cache(maxsize=256)
def _moments_mp(alpha):
    # The bracketed sums cancel to O(alpha**k); carry enough digits to absorb it.
    digits = 30 + int(6 * max(0.0, -math.log10(alpha)))
    with mpmath.workdps(digits):
        a = mpmath.mpf(alpha)
        e1, e4, e9 = mpmath.exp(-a), mpmath.exp(-4 * a), mpmath.exp(-9 * a)
        m2 = 2 / a**2 * (-1 + e1 + a)
        m4 = (
            mpmath.mpf(87) / 2
            - mpmath.mpf(392) / 9 * e1
            + e4 / 18
            - 30 * a
            + 8 * a**2
            - mpmath.mpf(40) / 3 * a * e1
        ) / a**4
        m6 = (
            -100 * a**3 * e1
            + 144 * a**3
            - mpmath.mpf(3) / 25 * a * e4
            - mpmath.mpf(11991) / 8 * a * e1
            + 1499 * a
            - a * e9 / 200
            - mpmath.mpf(2123) / 3 * a**2 * e1
            + mpmath.mpf(4) / 15 * a**2 * e4
            - 792 * a**2
        ) / a**6
        return float(m2), float(m4), float(m6), float(m4 - m2**2)


def closed_form_moments(alpha) -> FadingMoments:
    """Closed-form ``E[Z^2]``, ``E[Z^4]``, ``E[Z^6]`` with ``alpha = sigma2/2``.

    The expressions are evaluated verbatim in extended precision. The sixth
    moment expression does not respect ``E[Z^6] <= 1`` (it tends to 6 as
    ``alpha -> 0``); compare with :func:`estimators.mc_fading_moments` before
    relying on it. ``var_g`` is left NaN since it depends on ``L``.
    """
    if not alpha > 0:
        raise InvalidArgumentError(f"alpha must be > 0, got {alpha}")
    m2, m4, m6, _ = _moments_mp(float(alpha))
    sigma2 = 2.0 * alpha
    return FadingMoments(
        m2=m2,
        m4=m4,
        m6=m6,
        mean_f=closed_form_mean_f(sigma2),
        mean_f_rot=closed_form_mean_f_rot(sigma2),
        mean_g=m2,
    )


def mean_g(params: ChannelParams, moments: FadingMoments | None = None):
    if params.sigma2 == 0:
        return 1.0
    if moments is None:
        moments = closed_form_moments(params.sigma2 / 2)
    return moments.m2


def var_g(params: ChannelParams, moments: FadingMoments | None = None):
    """Variance of ``G = ||F_1..F_L||^2 / L``, i.e. ``Var(Z^2)/L``.

    Uses the closed-form moments unless ``moments`` (for instance a Monte Carlo
    estimate) is passed.
    """
    if params.sigma2 == 0:
        return 0.0
    if moments is None:
        var_z2 = _moments_mp(float(params.sigma2 / 2))[3]
    else:
        var_z2 = moments.m4 - moments.m2**2
    return var_z2 / params.L


def fading_moments(params: ChannelParams) -> FadingMoments:
    """All closed-form fading statistics for ``params``, ``var_g`` included."""
    if params.sigma2 == 0:
        return FadingMoments(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0)
    m = closed_form_moments(params.sigma2 / 2)
    return FadingMoments(m.m2, m.m4, m.m6, m.mean_f, m.mean_f_rot, m.m2, var_g(params))
