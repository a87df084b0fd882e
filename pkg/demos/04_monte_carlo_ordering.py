# Bounds below simulated rates
#
# Each bound comes from a mismatched (auxiliary) channel law. Simulating the
# true channel and scoring it with that law gives a Monte Carlo estimate that
# the analytic bound must not exceed.

import math

from wienerphase import ChannelParams, McConfig, mc_amplitude_mi, mc_phase_mi
from wienerphase.bounds import AmplitudeBoundInputs, PhaseBoundInputs, amplitude_bound, phase_bound

params = ChannelParams(gamma=math.sqrt(0.1), delta=0.1, L=10, snr=1e3, t=1.0)
cfg = McConfig(n_samples=8192, inner_steps=128, chunk_size=1024, master_seed=3)

nu = 4 / params.delta
amp = mc_amplitude_mi(params, nu, cfg)
print(f"amplitude: MC {amp.value:.4f} +- {amp.std_error:.4f}   bound "
      f"{amplitude_bound(AmplitudeBoundInputs.from_params(params, nu)):.4f}")

ph_in = PhaseBoundInputs.from_params(params)
ph = mc_phase_mi(params, ph_in.zeta, cfg)
print(f"phase    : MC {ph.value:.4f} +- {ph.std_error:.4f}   bound {phase_bound(ph_in):.4f}")

# At this modest SNR the phase bound is negative, so as a rate it says
# nothing. It becomes useful once K * E[1/|X|^2] is small.
