# Sending a frame through the oversampled channel
#
# Each symbol is held for L sample intervals. The phase keeps drifting from one
# interval to the next, and every sample also picks up unit-variance complex
# Gaussian noise. A pilot block in front gives the first symbol a phase
# reference.

import numpy as np

from wienerphase import ChannelParams, sample_inputs, stream_rng, transmit
from wienerphase.channel import amplitude_stats, phase_stats, wrap_phase

params = ChannelParams(gamma=np.sqrt(0.1), delta=0.1, L=10, M=6, snr=1e3, t=1.0)
rng = stream_rng(7, 0)

# Inputs: |X|^2 is a shifted exponential that starts at delta^-t, so
# 1/|X|^2 never exceeds delta^t, and the average power is exactly snr*delta.

x = sample_inputs(params, params.M, rng)
print("lambda =", params.lam, " |X|^2 =", np.round(x.amplitude_sq, 1))

frame = transmit(params, x, rng, steps=256)

# Two per-symbol statistics are kept: the block energy V and the differential
# phase across the block boundary, with the previous symbol's phase removed.

V = amplitude_stats(frame)
phi = phase_stats(frame)
print("V / (L |X|^2):", np.round(V / (params.L * x.amplitude_sq), 3))
print("phase error  :", np.round(wrap_phase(phi - x.phase), 3))
