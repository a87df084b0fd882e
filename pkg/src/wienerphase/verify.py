"""Self-check suite: closed forms against Monte Carlo, bound orderings, golden values."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds, estimators
from .bounds import (
    AmplitudeBoundInputs,
    PhaseBoundInputs,
    amplitude_bound,
    amplitude_nu_schedule,
    log_bessel_i0_upper,
    cosine_lower_bound,
    k_bound,
    mean_inverse_amplitude_sq,
    phase_bound,
    prelog,
)
from .channel import sample_inputs, transmit
from .estimators import McConfig
from .errors import NoValidBoundError
from .fading import closed_form_mean_f, closed_form_mean_f_rot, closed_form_moments, sample_intervals, var_g
from .params import ChannelParams
from .rng import stream_rng

PASS, FAIL, FINDING = "pass", "fail", "finding"
REPORT_COLUMNS = ("check", "status", "measured", "expected", "tolerance", "detail")


@dataclass(frozen=True)
class Check:
    check: str
    status: str
    measured: float
    expected: float
    tolerance: float
    detail: str = ""

    def as_row(self):
        return {c: getattr(self, c) for c in REPORT_COLUMNS}

    def line(self):
        return (
            f"[{self.status.upper():7s}] {self.check}: expected {self.expected:.6g}, "
            f"got {self.measured:.6g}, tol {self.tolerance:g}" + (f" ({self.detail})" if self.detail else "")
        )


@dataclass
class VerifyConfig:
    samples: int = 200_000
    chain_samples: int = 20_000
    inner_steps: int = 256
    seed: int = 1
    workers: int = 1


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)

    @property
    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self):
        return not self.failures

    @property
    def exit_code(self):
        return 0 if self.ok else 1


def _tol_check(name, measured, expected, tol, detail=""):
    ok = abs(measured - expected) <= tol
    return Check(name, PASS if ok else FAIL, measured, expected, tol, detail)


def _se_check(name, est, expected, k=3.0, finding_only=False):
    z = est.z_score(expected)
    ok = abs(z) <= k
    status = PASS if ok else (FINDING if finding_only else FAIL)
    return Check(name, status, est.value, expected, k * est.std_error, f"z={z:.2f}, n={est.n_samples}")


def _golden_k(moments_fn):
    try:
        kb = k_bound(1.3, 0.1, 1.0, moments=moments_fn(0.005))
    except NoValidBoundError as exc:
        return [Check("k_bound.K", FAIL, math.nan, 8.1353, 0.01, str(exc))]
    return [
        _tol_check("k_bound.K", kb.K, 8.1353, 0.01),
        _tol_check("k_bound.eps1", kb.eps1, 0.3506, 1e-3),
        _tol_check("k_bound.eps_cap", kb.eps_cap, 0.5774, 1e-3),
    ]


def _prelog_checks():
    out = []
    for a, want in ((0.25, 0.5), (1 / 3, 2 / 3), (0.4, 0.7), (0.5, 0.75), (0.75, 0.75)):
        out.append(_tol_check(f"prelog(alpha={a:.4g})", prelog(a), want, 1e-15))
    out.append(_tol_check("prelog continuity at 1/3", 2 * (1 / 3), (1 + 1 / 3) / 2, 1e-15))
    out.append(_tol_check("prelog continuity at 1/2", (1 + 0.5) / 2, 0.75, 1e-15))
    return out


def _moment_checks(cfg: VerifyConfig, moments_fn):
    out = []
    sigma = 0.1
    params = ChannelParams(gamma=sigma, delta=1.0)
    mc = estimators.mc_fading_moments(
        params, McConfig(cfg.samples, cfg.inner_steps, master_seed=cfg.seed, workers=cfg.workers)
    )
    cf = moments_fn(sigma**2 / 2)
    s2 = sigma**2
    out.append(_se_check("E[Z^2] closed form vs MC", mc.m2, cf.m2))
    out.append(_se_check("E[Z^4] closed form vs MC", mc.m4, cf.m4))
    # The sixth-moment expression is known not to match; keep it as a finding.
    out.append(_se_check("E[Z^6] closed form vs MC", mc.m6, cf.m6, k=5.0, finding_only=True))
    out.append(_se_check("E[F] closed form vs MC", mc.mean_f, closed_form_mean_f(s2)))
    out.append(_se_check("Var N vs gamma^2 delta", mc.var_n, s2))
    rot = closed_form_mean_f_rot(s2)
    out.append(_se_check("E[F exp(-jN)] endpoint N vs closed form", mc.mean_f_rot, rot, k=5.0, finding_only=True))
    out.append(
        _se_check(
            "E[F exp(-jN)] time-average N vs closed form", mc.mean_f_rot_time_average, rot, k=5.0, finding_only=True
        )
    )
    out.append(
        Check(
            "rotated-mean discrepancy (endpoint MC - closed form)",
            FINDING,
            mc.mean_f_rot.value - rot,
            s2 / 8,
            math.nan,
            "recorded only",
        )
    )
    vg = ChannelParams(gamma=1.0, delta=1e-2, L=100)
    cf_var = var_g(vg, moments_fn(vg.sigma2 / 2))
    out.append(_tol_check("Var(G)/delta^3 at delta=1e-2", cf_var / vg.delta**3, 1 / 45, 0.05 / 45))
    mc_vg = estimators.mc_fading_moments(
        vg, McConfig(cfg.samples, cfg.inner_steps, master_seed=cfg.seed + 1, workers=cfg.workers)
    ).var_g
    out.append(_se_check("Var(G) closed form vs MC at delta=1e-2", mc_vg, cf_var))
    return out


def _asymptote_checks():
    target = -0.5 * math.log(4 * math.pi * math.e)
    gaps = []
    for snr in (1e4, 1e6, 1e8):
        nu, t = amplitude_nu_schedule(0.5, snr, 1.0)
        p = ChannelParams.asymptotic(snr, 0.5, 1.0, t=t)
        gaps.append(amplitude_bound(AmplitudeBoundInputs.from_params(p, nu)) - 0.5 * math.log(snr))
    out = [_tol_check("amplitude offset at snr=1e8, alpha=1/2", gaps[-1], target, 0.15)]
    dist = [abs(g - target) for g in gaps]
    trend = dist[0] > dist[1] > dist[2]
    out.append(Check("amplitude offset converges monotonically", PASS if trend else FAIL, dist[-1], 0.0, dist[0],
                     "distances " + ", ".join(f"{d:.4f}" for d in dist)))
    return out


def _chain_checks(cfg: VerifyConfig):
    out = []
    mc_cfg = McConfig(cfg.chain_samples, cfg.inner_steps, master_seed=cfg.seed, workers=cfg.workers)
    p = ChannelParams(gamma=math.sqrt(0.1), delta=0.1, L=10, snr=1e3, t=1.0)
    nu = 4 / p.delta
    amp_b = amplitude_bound(AmplitudeBoundInputs.from_params(p, nu))
    amp_mc = estimators.mc_amplitude_mi(p, nu, mc_cfg)
    out.append(_order_check("amplitude MC >= bound", amp_mc, amp_b))
    ph_in = PhaseBoundInputs.from_params(p)
    ph_mc = estimators.mc_phase_mi(p, ph_in.zeta, mc_cfg)
    out.append(_order_check("phase MC >= bound", ph_mc, phase_bound(ph_in)))
    p4 = p.with_(snr=1e4)
    K = bounds.reference_k()
    fac = estimators.mc_cos_phi_factorized(p4, mc_cfg)
    out.append(_order_check("cos MC >= bound (E|X|^-2 <= delta^t)", fac.direct, cosine_lower_bound(p4, K, p4.delta)))
    out.append(
        _order_check("cos MC >= bound (exact E|X|^-2)", fac.direct, cosine_lower_bound(p4, K, mean_inverse_amplitude_sq(p4)))
    )
    diff = fac.direct.value - fac.product.value
    se = math.hypot(fac.direct.std_error, fac.product.std_error)
    out.append(Check("cos factorization", PASS if abs(diff) <= 3 * se else FAIL, fac.product.value,
                     fac.direct.value, 3 * se))
    return out


def _order_check(name, est, bound):
    ok = est.value >= bound - 3 * est.std_error
    return Check(name, PASS if ok else FAIL, est.value, bound, 3 * est.std_error, "MC must not fall below")


def _cos_gaussian_checks(cfg: VerifyConfig):
    rep = estimators.check_cos_gaussian_bound([1.5, 2.0, 5.0, 10.0, 50.0], n_mc=100_000, master_seed=cfg.seed)
    out = []
    for r in rep.rows:
        out.append(Check(f"E[cos angle(rho+W)] >= 1-1/rho^2 at rho={r.rho:g}", PASS if r.holds else FAIL,
                         r.quad_mean, r.lower_bound, 0.0))
        out.append(Check(f"pdf normalization at rho={r.rho:g}", PASS if r.norm_error < 1e-10 else FAIL,
                         r.norm_error, 0.0, 1e-10))
    r2 = next(r for r in rep.rows if r.rho == 2.0)
    out.append(_se_check("E[cos angle(2+W)] quadrature vs MC", r2.mc, r2.quad_mean))
    zeta = np.logspace(-2, 3, 200)
    ok = bool(np.all(bounds.log_i0(zeta) <= log_bessel_i0_upper(zeta)))
    out.append(Check("I0(z) <= sqrt(pi)/2 e^z/sqrt(z) on [1e-2, 1e3]", PASS if ok else FAIL, float(ok), 1.0, 0.0))
    return out


def _awgn_checks(cfg: VerifyConfig):
    p = ChannelParams(gamma=0.0, delta=0.1, L=4, M=2048, snr=1e3, t=1.0)
    rng = stream_rng(cfg.seed, 0, tag=99)
    F, N = sample_intervals(0.0, 4096, cfg.inner_steps, rng)
    out = [
        _tol_check("gamma=0: max |F - 1|", float(np.max(np.abs(F - 1))), 0.0, 1e-12),
        _tol_check("gamma=0: max |N|", float(np.max(np.abs(N))), 0.0, 0.0),
        _tol_check("gamma=0: Var(G)", var_g(p), 0.0, 0.0),
    ]
    zero = sample_inputs(p, p.M, rng)
    frame = transmit(p, type(zero)(np.zeros(p.M), zero.phase), rng, cfg.inner_steps)
    for part, x in (("re", frame.outputs.real), ("im", frame.outputs.imag)):
        n = x.size
        var = float(np.var(x, ddof=1))
        se = math.sqrt(max(np.mean((x - x.mean()) ** 4) - var**2, 0.0) / n)
        out.append(Check(f"noise-only 2*Var({part} Y)", PASS if abs(2 * var - 1) <= 3 * 2 * se else FAIL,
                         2 * var, 1.0, 6 * se))
    return out


def run_verify(cfg: VerifyConfig | None = None, moments_fn=closed_form_moments) -> VerifyReport:
    """Run every check. ``moments_fn`` replaces the closed-form moment source (tests inject faults)."""
    cfg = cfg or VerifyConfig()
    report = VerifyReport()
    for part in (
        lambda: _golden_k(moments_fn),
        _prelog_checks,
        lambda: _moment_checks(cfg, moments_fn),
        _asymptote_checks,
        lambda: _chain_checks(cfg),
        lambda: _cos_gaussian_checks(cfg),
        lambda: _awgn_checks(cfg),
    ):
        report.checks.extend(part())
    return report
