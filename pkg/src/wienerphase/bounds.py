"""Analytic lower bounds on the information rate and their building blocks.

All information quantities are in nats per symbol.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import mpmath
import numpy as np
from scipy.optimize import brentq
from scipy.special import erfc, i0e

from .errors import InfeasiblePowerError, InvalidArgumentError, NoValidBoundError
from .fading import FadingMoments, closed_form_mean_f, closed_form_mean_f_rot, closed_form_moments, mean_g, var_g
from .params import ChannelParams

# g(Z) parameter of the negative-moment construction and the interval
# resolution sigma = gamma*sqrt(delta) at which the reference K is evaluated.
REFERENCE_A = 1.3
REFERENCE_SIGMA = 0.1


# ---------------------------------------------------------------------------
# amplitude modulation


@dataclass(frozen=True)
class AmplitudeBoundInputs:
    params: ChannelParams
    nu: float
    mu: float
    lam: float

    def __post_init__(self):
        if not self.nu > 0:
            raise InvalidArgumentError(f"nu must be > 0, got {self.nu}")
        if not self.lam > 0:
            raise InfeasiblePowerError(f"lam must be > 0, got {self.lam}")
        if not 0 < self.mu <= 1:
            raise InvalidArgumentError(f"mu must lie in (0, 1], got {self.mu}")

    @classmethod
    def from_params(cls, params: ChannelParams, nu):
        lam = params.require_feasible()
        return cls(params, nu, mean_g(params), lam)


def mean_inverse_amplitude_sq(params: ChannelParams) -> float:
    """Exact ``E[1/|X|^2]`` for the shifted-exponential input.

    ``E[1/(c + Y)]`` with ``Y ~ Exp(lam)`` is ``exp(z) E1(z) / lam``, ``z = c/lam``.
    Always below the support bound ``delta**t = 1/c``.
    """
    lam = params.require_feasible()
    c = params.support_edge
    z = c / lam
    with mpmath.workdps(30):
        return float(mpmath.exp(z) * mpmath.e1(z) / lam)


def amplitude_bound(inputs: AmplitudeBoundInputs, variant="loose") -> float:
    """Lower bound on ``I(|X|^2; ||Y||^2)`` for the Gaussian-shaped auxiliary channel.

    ``variant="loose"`` replaces ``2 E[G]`` by 2 and ``E[|X|^-2]`` by
    ``delta**t``; ``variant="exact"`` keeps both moments. The value is not
    clamped at zero, see :func:`clamp`.
    """
    p = inputs.params
    lam, nu, mu, L = inputs.lam, inputs.nu, inputs.mu, p.L
    c = p.support_edge
    vg = var_g(p)
    if variant == "loose":
        tail = 2.0 + p.delta**p.t
    elif variant == "exact":
        tail = 2.0 * mean_g(p) + mean_inverse_amplitude_sq(p)
    else:
        raise InvalidArgumentError(f"unknown variant {variant!r}")
    return (
        -1.5 * c / lam
        + 0.5 * math.log(L * L * mu * mu * lam * lam + lam * nu)
        - 0.5 * math.log(math.pi * nu * lam)
        - (L / nu) * (p.snr * vg + tail)
    )


def clamp(value):
    """A rate lower bound below zero carries no information; report zero instead."""
    return max(value, 0.0)


def default_support_exponent(alpha):
    """Support exponent ``t`` for the high-SNR schedule.

    ``alpha < 1/(t+1)`` is required. The midpoint ``t = (1/alpha - 1)/2`` makes
    the two finite-SNR penalties, of order ``snr**(alpha*(t+1) - 1)`` and
    ``snr**(-alpha*t)``, vanish at the same rate; it is capped at 1.
    """
    if not 0 < alpha < 1:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    return min(1.0, 0.5 * (1.0 / alpha - 1.0))


def amplitude_nu_schedule(alpha, snr, gamma):
    """Auxiliary width ``nu`` and support exponent ``t`` for ``1/delta = ceil(snr**alpha)``.

    ``nu = 4/delta`` for ``alpha >= 1/3``; otherwise
    ``nu = (2*gamma**2/45) * delta**-(1/alpha - 2)``.
    """
    if not 0 < alpha < 1:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    delta = 1.0 / math.ceil(snr**alpha)
    if alpha >= 1 / 3:
        nu = 4.0 / delta
    else:
        if gamma <= 0:
            raise InvalidArgumentError("gamma must be > 0 when alpha < 1/3")
        nu = (2 * gamma**2 / 45) * delta ** (-(1 / alpha - 2))
    return nu, default_support_exponent(alpha)


# ---------------------------------------------------------------------------
# negative moment of |F|


class KBound(NamedTuple):
    K: float
    eps: float
    eps1: float
    eps_cap: float
    rho1: float
    rho2: float


def g_poly(z, a, rho1, rho2):
    z2 = np.asarray(z) ** 2
    return a * (1 - z2) * (1 - rho1 * z2) * (1 - rho2 * z2)


def expected_g(a, rho1, rho2, m: FadingMoments):
    return a * (
        1
        - m.m2 * (1 + rho1 + rho2)
        + m.m4 * (rho1 + rho2 + rho1 * rho2)
        - m.m6 * rho1 * rho2
    )


def rho1_limits(m: FadingMoments):
    """``(lower, upper)`` limits on ``rho1`` that make ``rho2`` land in (0, 1].

    ``upper`` is the smaller of the two ratios below which both numerator and
    denominator of ``rho2`` are negative; a non-positive moment in a ratio's
    denominator leaves that ratio unconstrained (``inf``).
    """
    e1 = 1 - m.m2
    e2 = m.m2 - m.m4
    e3 = m.m4 - m.m6
    upper = min(e1 / e2 if e2 > 0 else math.inf, e2 / e3 if e3 > 0 else math.inf)
    lower = (1 - 2 * m.m2 + m.m4) / (m.m2 - 2 * m.m4 + m.m6)
    return lower, upper


def k_bound(a, gamma, delta, moments: FadingMoments | None = None) -> KBound:
    """Finite bound ``K >= E[|F|^-2]`` from a cubic-in-``Z^2`` majorant.

    ``g(Z) = a(1-Z^2)(1-rho1 Z^2)(1-rho2 Z^2)`` is tuned so that ``E[g(Z)] = 0``
    and ``g >= 1`` on ``[0, eps]``; then ``E[Z^-2] <= 1/eps^2``. ``rho1`` is
    taken at its lower feasible limit, which puts ``rho2`` at 1.
    """
    if not a > 1:
        raise InvalidArgumentError(f"a must be > 1, got {a}")
    sigma2 = gamma**2 * delta
    if not sigma2 > 0:
        raise InvalidArgumentError("k_bound needs gamma**2 * delta > 0")
    m = moments if moments is not None else closed_form_moments(sigma2 / 2)

    denom = m.m2 - 2 * m.m4 + m.m6
    if not denom > 0:
        raise NoValidBoundError(f"E[Z^2 (1-Z^2)^2] = {denom:.3g} is not positive")
    rho1 = (1 - 2 * m.m2 + m.m4) / denom
    num2 = -1 + m.m2 * (1 + rho1) - m.m4 * rho1
    den2 = -m.m2 + m.m4 * (1 + rho1) - m.m6 * rho1
    if not (num2 < 0 and den2 < 0):
        raise NoValidBoundError(
            f"rho1 = {rho1:.6g} leaves rho2 = {num2:.3g}/{den2:.3g} outside the "
            "negative/negative branch; the feasible rho1 interval is empty"
        )
    rho2 = num2 / den2
    if not 0 < rho2 <= 1 + 1e-12:
        raise NoValidBoundError(f"rho2 = {rho2:.6g} is outside (0, 1]")
    if not rho1 > 0:
        raise NoValidBoundError(f"rho1 = {rho1:.6g} is not positive")

    A = (rho1 + rho2 + rho1 * rho2) / (5 * rho1 * rho2)
    B = (1 + rho1 + rho2) / (15 * rho1 * rho2)
    disc = A * A - B
    if disc < 0:
        raise NoValidBoundError("g(Z) has no inflection point in Z^2 > 0")
    # A - sqrt(A^2 - B) without cancellation
    eps_cap = math.sqrt(B / (A + math.sqrt(disc)))

    def h(z):
        return float(g_poly(z, a, rho1, rho2)) - 1.0

    if h(eps_cap) < 0:
        eps1 = brentq(h, 0.0, eps_cap, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    else:
        grid = np.linspace(eps_cap, 1.0, 2001)
        vals = g_poly(grid, a, rho1, rho2) - 1.0
        idx = int(np.argmax(vals < 0))
        eps1 = brentq(h, grid[idx - 1], grid[idx], xtol=1e-14, rtol=4 * np.finfo(float).eps)
    eps = min(eps1, eps_cap)

    if abs(expected_g(a, rho1, rho2, m)) > 1e-10:
        raise NoValidBoundError("E[g(Z)] = 0 is violated")
    dense = np.linspace(0.0, eps, 1000)
    if np.min(g_poly(dense, a, rho1, rho2)) < 1 - 1e-12:
        raise NoValidBoundError("g(Z) < 1 somewhere on [0, eps]")
    return KBound(1.0 / eps**2, eps, eps1, eps_cap, rho1, rho2)


@lru_cache(maxsize=None)
def reference_k():
    """``K`` at the reference resolution ``gamma*sqrt(delta) = 0.1`` with ``a = 1.3``."""
    return k_bound(REFERENCE_A, REFERENCE_SIGMA, 1.0).K


# ---------------------------------------------------------------------------
# phase modulation


@dataclass(frozen=True)
class PhaseBoundInputs:
    params: ChannelParams
    K: float
    rho: float

    def __post_init__(self):
        if not self.K > 1:
            raise InvalidArgumentError(f"K must be > 1, got {self.K}")
        if not self.rho > 0:
            raise InvalidArgumentError(f"rho must be > 0, got {self.rho}")

    @property
    def zeta(self):
        return 1.0 / (2.0 * self.rho)

    @classmethod
    def from_params(cls, params: ChannelParams, K=None, mean_x_inv_sq=None):
        K = reference_k() if K is None else K
        return cls(params, K, phase_rho(params, K, mean_x_inv_sq))


def cosine_lower_bound(params: ChannelParams, K, mean_x_inv_sq) -> float:
    """Lower bound on ``E[cos(Phi - angle X_1)]``."""
    if not K > 1:
        raise InvalidArgumentError(f"K must be > 1, got {K}")
    if mean_x_inv_sq < 0:
        raise InvalidArgumentError("mean_x_inv_sq must be >= 0")
    s2 = params.sigma2
    return closed_form_mean_f_rot(s2) * closed_form_mean_f(s2) - 2 * math.exp(-3 * s2 / 8) * mean_x_inv_sq * K


def phase_rho(params: ChannelParams, K, mean_x_inv_sq=None) -> float:
    """``1 - cosine_lower_bound``; ``mean_x_inv_sq`` defaults to ``delta**t``."""
    if mean_x_inv_sq is None:
        mean_x_inv_sq = params.delta**params.t
    return 1.0 - cosine_lower_bound(params, K, mean_x_inv_sq)


def phase_bound(inputs: PhaseBoundInputs) -> float:
    """``ln(2*pi) - ln(2*pi^3*e*rho)/2``, the von Mises kernel bound at ``zeta = 1/(2 rho)``."""
    rho = inputs.rho
    if not rho > 0:
        raise InvalidArgumentError(f"rho must be > 0, got {rho}")
    return 0.5 * math.log(2.0 / (math.pi * math.e * rho))


def log_i0(x):
    """``ln I0(x)`` without overflow."""
    x = np.asarray(x, dtype=float)
    return np.log(i0e(x)) + np.abs(x)


def log_bessel_i0_upper(zeta):
    """Log of ``sqrt(pi)/2 * exp(zeta)/sqrt(zeta)``, an upper bound on ``ln I0(zeta)``."""
    zeta = np.asarray(zeta, dtype=float)
    return 0.5 * math.log(math.pi) - math.log(2) + zeta - 0.5 * np.log(zeta)


def cos_of_gaussian_phase_pdf(psi, rho_amp):
    """Density of ``angle(rho + W)`` with ``W`` unit-variance circular Gaussian."""
    if not rho_amp > 0:
        raise InvalidArgumentError(f"rho_amp must be > 0, got {rho_amp}")
    psi = np.asarray(psi, dtype=float)
    c = rho_amp * np.cos(psi)
    s2 = np.sin(psi) ** 2
    return np.exp(-rho_amp**2) / (2 * np.pi) + c / math.sqrt(4 * np.pi) * np.exp(-(rho_amp**2) * s2) * erfc(-c)


# ---------------------------------------------------------------------------
# high-SNR behaviour


class Asymptotes(NamedTuple):
    amp_offset: float
    phase_offset: float
    prelog: float
    prelog_amplitude: float
    prelog_phase: float


def prelog_components(alpha):
    if not 0 < alpha < 1:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    amp = 1.5 * alpha if alpha <= 1 / 3 else 0.5
    phase = 0.5 * alpha if alpha <= 0.5 else 0.25
    return amp, phase


def prelog(alpha):
    if not 0 < alpha < 1:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    if alpha <= 1 / 3:
        return 2 * alpha
    if alpha <= 0.5:
        return (1 + alpha) / 2
    return 0.75


def asymptotes_and_prelog(alpha, gamma, K) -> Asymptotes:
    """Constant offsets of the two bounds and the pre-log at growth rate ``alpha``.

    ``phase_offset`` is the constant in ``I_phase - (alpha/2) ln snr`` and only
    applies for ``alpha <= 1/2``; beyond that the phase term saturates.
    """
    if not K > 1:
        raise InvalidArgumentError(f"K must be > 1, got {K}")
    amp, phase = prelog_components(alpha)
    if alpha >= 1 / 3:
        amp_off = -0.5 * math.log(4 * math.pi * math.e)
    else:
        amp_off = -0.5 * math.log(2 * math.pi * gamma**2 * math.e / 45)
    phase_off = 0.5 * math.log(3 / (math.pi * math.e * (gamma**2 + 3 * K)))
    return Asymptotes(amp_off, phase_off, prelog(alpha), amp, phase)


# ---------------------------------------------------------------------------
# combined report


@dataclass(frozen=True)
class BoundReport:
    i_amp: float
    i_phase: float
    lam: float
    mu: float
    nu: float
    var_g: float
    rho: float
    zeta: float
    K: float
    asymptote_amp: float
    asymptote_phase: float
    prelog: float

    @property
    def i_total(self):
        return self.i_amp + self.i_phase


def bound_report(params: ChannelParams, nu, alpha=None, K=None, variant="loose") -> BoundReport:
    """Evaluate both bounds at ``params``.

    ``alpha`` only feeds the asymptotic columns; they are NaN without it.
    """
    K = reference_k() if K is None else K
    amp_in = AmplitudeBoundInputs.from_params(params, nu)
    mx = params.delta**params.t if variant == "loose" else mean_inverse_amplitude_sq(params)
    ph_in = PhaseBoundInputs.from_params(params, K, mx)
    if alpha is None:
        asym = Asymptotes(math.nan, math.nan, math.nan, math.nan, math.nan)
    else:
        asym = asymptotes_and_prelog(alpha, params.gamma, K)
    return BoundReport(
        i_amp=amplitude_bound(amp_in, variant),
        i_phase=phase_bound(ph_in),
        lam=amp_in.lam,
        mu=amp_in.mu,
        nu=nu,
        var_g=var_g(params),
        rho=ph_in.rho,
        zeta=ph_in.zeta,
        K=K,
        asymptote_amp=asym.amp_offset,
        asymptote_phase=asym.phase_offset,
        prelog=asym.prelog,
    )
