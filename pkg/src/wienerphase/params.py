"""Scalar channel parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InfeasiblePowerError, InvalidArgumentError


@dataclass(frozen=True)
class ChannelParams:
    """Parameters of the oversampled Wiener phase noise channel.

    Attributes
    ----------
    gamma : float
        Phase noise rate in rad/sqrt(s); the phase diffuses with variance
        ``gamma**2`` per second.
    delta : float
        Integrate-and-dump interval in seconds.
    L : int
        Samples per symbol.
    M : int
        Symbols per frame.
    snr : float
        Linear SNR. The noise density is fixed to one, so this is also the
        average input power.
    t : float
        Exponent of the input support edge ``delta**-t``.
    """

    gamma: float
    delta: float
    L: int = 1
    M: int = 1
    snr: float = 1.0
    t: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidArgumentError(f"delta must be > 0, got {self.delta}")
        if self.gamma < 0:
            raise InvalidArgumentError(f"gamma must be >= 0, got {self.gamma}")
        if int(self.L) != self.L or self.L < 1:
            raise InvalidArgumentError(f"L must be a positive integer, got {self.L}")
        if int(self.M) != self.M or self.M < 1:
            raise InvalidArgumentError(f"M must be a positive integer, got {self.M}")
        if not self.snr > 0:
            raise InvalidArgumentError(f"snr must be > 0, got {self.snr}")
        if not self.t > 0:
            raise InvalidArgumentError(f"t must be > 0, got {self.t}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "M", int(self.M))

    @classmethod
    def asymptotic(cls, snr, alpha, gamma=1.0, t=None, M=1):
        """Parameters of the high-SNR regime with unit symbol time.

        The sample rate grows as ``1/delta = L = ceil(snr**alpha)``. When ``t``
        is omitted the schedule default from :func:`bounds.default_support_exponent`
        is used.
        """
        if not 0 < alpha < 1:
            raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}")
        L = math.ceil(snr**alpha)
        if t is None:
            from .bounds import default_support_exponent

            t = default_support_exponent(alpha)
        return cls(gamma=gamma, delta=1.0 / L, L=L, M=M, snr=snr, t=t)

    def with_(self, **changes) -> "ChannelParams":
        return replace(self, **changes)

    @property
    def sigma2(self) -> float:
        """Phase increment variance over one interval, ``gamma**2 * delta``."""
        return self.gamma**2 * self.delta

    @property
    def sigma(self) -> float:
        return self.gamma * math.sqrt(self.delta)

    @property
    def symbol_time(self) -> float:
        return self.L * self.delta

    @property
    def support_edge(self) -> float:
        """Smallest admissible squared amplitude, ``delta**-t``."""
        return self.delta ** (-self.t)

    @property
    def lam(self) -> float:
        """Scale of the shifted-exponential input; may be non-positive."""
        return self.snr * self.delta - self.support_edge

    def require_feasible(self) -> float:
        lam = self.lam
        if not lam > 0:
            raise InfeasiblePowerError(
                f"snr*delta - delta**-t = {lam:.6g} <= 0 "
                f"(snr={self.snr}, delta={self.delta}, t={self.t})"
            )
        return lam
