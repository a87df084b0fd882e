"""Discrete oversampled channel, constrained input and receiver statistics.

Sample ``n`` (1-based) of a frame is

    Y_n = X_k * exp(j*Theta_n) * F_n + W_n,    k = ceil(n / L),

with ``Theta_{n+1} = Theta_n + N_n`` and unit-variance circular noise ``W_n``.
A pilot block with a known symbol precedes every frame so that the
differential phase statistic is defined for the first symbol too.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, UndefinedPhaseError
from .fading import DEFAULT_STEPS, IntervalSample, sample_intervals
from .params import ChannelParams
from .rng import as_generator

FRAME_CSV_COLUMNS = ("n", "re_y", "im_y", "theta", "re_f", "im_f", "N", "symbol_index")


def wrap_phase(x):
    """Map angles to [-pi, pi)."""
    return np.mod(np.asarray(x) + np.pi, 2 * np.pi) - np.pi


@dataclass(frozen=True)
class InputSymbol:
    """Squared amplitude and phase; fields may be scalars or equal-length arrays."""

    amplitude_sq: float | np.ndarray
    phase: float | np.ndarray

    def __len__(self):
        return np.size(self.amplitude_sq)

    @property
    def value(self):
        return np.sqrt(self.amplitude_sq) * np.exp(1j * np.asarray(self.phase))


@dataclass(frozen=True)
class ReceiverStats:
    v: float
    phi: float


@dataclass(frozen=True)
class Frame:
    """One transmitted frame. Arrays are indexed from 0; ``symbol_index`` is 1-based."""

    params: ChannelParams
    amplitude_sq: np.ndarray
    phase: np.ndarray
    F: np.ndarray
    N: np.ndarray
    theta: np.ndarray
    outputs: np.ndarray
    pilot: InputSymbol
    pilot_outputs: np.ndarray
    pilot_theta: np.ndarray

    @property
    def M(self):
        return len(self.amplitude_sq)

    @property
    def L(self):
        return self.params.L

    @property
    def symbol_index(self):
        return np.repeat(np.arange(1, self.M + 1), self.L)

    @property
    def channel_state(self):
        return [IntervalSample(complex(f), float(n)) for f, n in zip(self.F, self.N)]

    def symbol(self, k) -> InputSymbol:
        _check_index(k, self.M)
        return InputSymbol(float(self.amplitude_sq[k - 1]), float(self.phase[k - 1]))

    def block(self, k):
        _check_index(k, self.M)
        return self.outputs[(k - 1) * self.L : k * self.L]


def _check_index(k, M):
    if not 1 <= k <= M:
        raise InvalidArgumentError(f"symbol index {k} outside 1..{M}")


def sample_inputs(params: ChannelParams, count, rng) -> InputSymbol:
    """``count`` iid symbols: ``|X|^2 = delta**-t + Exp(lam)``, phase uniform on [-pi, pi)."""
    lam = params.require_feasible()
    rng = as_generator(rng)
    amp = params.support_edge + rng.exponential(lam, size=count)
    phase = rng.uniform(-np.pi, np.pi, size=count)
    return InputSymbol(amp, phase)


def sample_input(params: ChannelParams, rng) -> InputSymbol:
    sym = sample_inputs(params, 1, rng)
    return InputSymbol(float(sym.amplitude_sq[0]), float(sym.phase[0]))


def _as_symbol_arrays(symbols):
    if isinstance(symbols, InputSymbol):
        amp = np.atleast_1d(np.asarray(symbols.amplitude_sq, dtype=float))
        ph = np.atleast_1d(np.asarray(symbols.phase, dtype=float))
    else:
        amp = np.array([s.amplitude_sq for s in symbols], dtype=float)
        ph = np.array([s.phase for s in symbols], dtype=float)
    if amp.shape != ph.shape:
        raise InvalidArgumentError("amplitude and phase arrays differ in length")
    return amp, ph


def transmit(
    params: ChannelParams,
    symbols: InputSymbol | Sequence[InputSymbol],
    rng,
    steps=DEFAULT_STEPS,
    *,
    pilot: InputSymbol | None = None,
    noise=True,
) -> Frame:
    """Send ``params.M`` symbols through the channel.

    The pilot (default: ``|X|^2 = snr*delta``, phase 0) occupies the ``L``
    intervals before the frame. ``noise=False`` sets ``W = 0``.
    """
    amp, ph = _as_symbol_arrays(symbols)
    if len(amp) != params.M:
        raise InvalidArgumentError(f"expected {params.M} symbols, got {len(amp)}")
    if pilot is None:
        pilot = InputSymbol(params.snr * params.delta, 0.0)
    rng = as_generator(rng)
    L = params.L
    total = (params.M + 1) * L

    theta0 = rng.uniform(-np.pi, np.pi)
    F, N = sample_intervals(params.sigma, total, steps, rng)
    theta = np.empty(total)
    theta[0] = theta0
    np.cumsum(N[:-1], out=theta[1:])
    theta[1:] += theta0

    x = np.concatenate(([complex(pilot.value)], np.sqrt(amp) * np.exp(1j * ph)))
    y = np.repeat(x, L) * np.exp(1j * theta) * F
    if noise:
        w = (rng.standard_normal(total) + 1j * rng.standard_normal(total)) * math.sqrt(0.5)
        y = y + w
    return Frame(
        params=params,
        amplitude_sq=amp,
        phase=ph,
        F=F[L:],
        N=N[L:],
        theta=theta[L:],
        outputs=y[L:],
        pilot=pilot,
        pilot_outputs=y[:L],
        pilot_theta=theta[:L],
    )


def amplitude_stat(frame: Frame, k) -> float:
    """``V = ||Y_k||^2``, the energy of block ``k``."""
    block = frame.block(k)
    return float(np.sum(block.real**2 + block.imag**2))


def amplitude_stats(frame: Frame) -> np.ndarray:
    y = frame.outputs.reshape(frame.M, frame.L)
    return np.sum(y.real**2 + y.imag**2, axis=1)


def _boundary_samples(frame: Frame):
    """First sample of every block and the sample preceding it (pilot for block 1)."""
    L = frame.L
    y = frame.outputs.reshape(frame.M, L)
    first = y[:, 0]
    prev = np.concatenate(([frame.pilot_outputs[-1]], y[:-1, -1]))
    return first, prev


def phase_stat(frame: Frame, k, known_prev_phase) -> float:
    """Differential phase ``angle(Y_first(k) * conj(Y_last(k-1) * exp(-j*prev)))``.

    For ``k = 1`` the last pilot sample plays the role of the previous block.
    """
    _check_index(k, frame.M)
    L = frame.L
    y1 = frame.outputs[(k - 1) * L]
    y0 = frame.outputs[(k - 1) * L - 1] if k > 1 else frame.pilot_outputs[-1]
    if y1 == 0 or y0 == 0:
        raise UndefinedPhaseError(f"zero sample at the boundary of block {k}")
    return float(wrap_phase(np.angle(y1 * np.conj(y0 * np.exp(-1j * known_prev_phase)))))


def phase_stats(frame: Frame) -> np.ndarray:
    """Phase statistic of every block using the true previous symbol phases."""
    first, prev = _boundary_samples(frame)
    prev_phase = np.concatenate(([frame.pilot.phase], frame.phase[:-1]))
    return wrap_phase(np.angle(first * np.conj(prev * np.exp(-1j * prev_phase))))


def receiver_stats(frame: Frame, k, known_prev_phase) -> ReceiverStats:
    return ReceiverStats(amplitude_stat(frame, k), phase_stat(frame, k, known_prev_phase))


def write_frame_csv(frame: Frame, path_or_file):
    """Dump one row per sample with columns :data:`FRAME_CSV_COLUMNS`."""
    rows = zip(
        range(1, len(frame.outputs) + 1),
        frame.outputs.real,
        frame.outputs.imag,
        frame.theta,
        frame.F.real,
        frame.F.imag,
        frame.N,
        frame.symbol_index,
    )
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FRAME_CSV_COLUMNS)
        for n, yr, yi, th, fr, fi, nn, k in rows:
            w.writerow([n, f"{yr:.17g}", f"{yi:.17g}", f"{th:.17g}", f"{fr:.17g}", f"{fi:.17g}", f"{nn:.17g}", k])
    finally:
        if own:
            fh.close()
