"""Capacity bounds and Monte Carlo tools for oversampled channels with Wiener phase noise."""
from .bounds import (
    AmplitudeBoundInputs,
    BoundReport,
    KBound,
    PhaseBoundInputs,
    amplitude_bound,
    amplitude_nu_schedule,
    asymptotes_and_prelog,
    bound_report,
    cosine_lower_bound,
    k_bound,
    phase_bound,
    prelog,
    prelog_components,
)
from .channel import Frame, InputSymbol, receiver_stats, sample_inputs, transmit
from .errors import (
    InfeasiblePowerError,
    InvalidArgumentError,
    NoValidBoundError,
    NumericFailureError,
    UndefinedPhaseError,
)
from .estimators import McConfig, McEstimate, mc_amplitude_mi, mc_cos_phi, mc_fading_moments, mc_phase_mi
from .fading import FadingMoments, closed_form_moments, fading_moments, sample_intervals
from .params import ChannelParams
from .rng import stream_rng

__version__ = "0.1.0"
