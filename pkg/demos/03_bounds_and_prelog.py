# Lower bounds on the information rate
#
# Growing the sampling rate with SNR, 1/delta = ceil(snr^alpha), trades phase
# noise per interval against noise per sample. The amplitude part and the
# phase part of the bound each grow like a multiple of ln(snr); the sum of the
# two multiples is the pre-log.

import math

from wienerphase import ChannelParams, amplitude_nu_schedule, bound_report, k_bound, prelog, prelog_components

for alpha in (0.2, 1 / 3, 0.4, 0.5, 0.7):
    amp, ph = prelog_components(alpha)
    print(f"alpha={alpha:.3f}  prelog={prelog(alpha):.4f}  (amplitude {amp:.4f}, phase {ph:.4f})")

# The phase bound needs a bound K on E[1/|F|^2]. A cubic majorant in |F|^2
# gives K at the reference resolution sigma = 0.1.

kb = k_bound(1.3, 0.1, 1.0)
print(f"K = {kb.K:.4f}  (eps1 = {kb.eps1:.4f}, inflection at {kb.eps_cap:.4f})")

# Amplitude bound minus (1/2) ln snr at alpha = 1/2 settles towards
# -(1/2) ln(4 pi e) as snr grows.

for snr in (1e4, 1e6, 1e8, 1e10):
    nu, t = amplitude_nu_schedule(0.5, snr, 1.0)
    p = ChannelParams.asymptotic(snr, 0.5, 1.0, t=t)
    rep = bound_report(p, nu, alpha=0.5, K=kb.K)
    print(f"snr={snr:.0e}  I_amp - ln(snr)/2 = {rep.i_amp - 0.5 * math.log(snr):+.4f}"
          f"   target {rep.asymptote_amp:+.4f}")
