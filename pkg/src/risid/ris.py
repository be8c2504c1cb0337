"""Phase-dependent reflection amplitude model and per-symbol RIS coefficients.

Each element applies one of two phase states per symbol interval; the state is
chosen by the RIS's amplitude reflection pattern, and the element's reflection
magnitude follows the circuit-level amplitude/phase coupling
a(phi) = (1 - a_min) * ((sin(phi - delta) + 1) / 2) ** gamma + a_min.
"""

import math
from dataclasses import dataclass

import numpy as np

from .codebook import ArpCode

DEFAULT_A_MIN = 0.2
DEFAULT_DELTA = 0.43 * math.pi
DEFAULT_GAMMA = 1.6


@dataclass(frozen=True)
class AmplitudeModelParams:
    """Circuit constants of the amplitude/phase coupling; defaults are the
    canonical values of the varactor model and may differ between surfaces."""

    a_min: float = DEFAULT_A_MIN
    delta: float = DEFAULT_DELTA
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        if not 0.0 <= self.a_min <= 1.0:
            raise ValueError(f"a_min must lie in [0, 1], got {self.a_min}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


def amplitude_of_phase(phi, params: AmplitudeModelParams = AmplitudeModelParams()):
    """Reflection magnitude for a phase state, in [a_min, 1].

    Accepts a scalar or ndarray phase in radians; total on the real line and
    2*pi periodic, peaking at delta + pi/2 and bottoming at delta - pi/2.
    """
    base = (np.sin(np.asarray(phi, dtype=np.float64) - params.delta) + 1.0) / 2.0
    val = (1.0 - params.a_min) * base ** params.gamma + params.a_min
    if np.isscalar(phi):
        return float(val)
    return val


@dataclass(frozen=True)
class PhaseStatePair:
    """The two phase states an element can apply (radians)."""

    phi_1: float
    phi_2: float


def default_phase_pair(params: AmplitudeModelParams = AmplitudeModelParams()) -> PhaseStatePair:
    """Phase pair maximizing the amplitude separation: a(phi_1)=1, a(phi_2)=a_min."""
    return PhaseStatePair(phi_1=params.delta + math.pi / 2, phi_2=params.delta - math.pi / 2)


@dataclass(frozen=True, eq=False)
class RisProfile:
    """One candidate surface: geometry, reachability, states, code, and offset."""

    ris_id: int
    n_elements: int
    reachable: bool
    amp_params: AmplitudeModelParams
    phases: PhaseStatePair
    code: ArpCode
    offset_c: int = 0

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError(f"n_elements must be >= 1, got {self.n_elements}")
        m = self.code.length
        if not 0 <= self.offset_c < m:
            raise ValueError(f"offset_c must lie in [0, {m - 1}], got {self.offset_c}")
        a1, a2 = self.amplitudes()
        if not abs(a1 - a2) > 0.0:
            raise ValueError(
                "phase states map to equal amplitudes; the on/off constellation collapses"
            )

    def amplitudes(self):
        """(a_hat_1, a_hat_2): magnitudes of the two states."""
        return (
            amplitude_of_phase(self.phases.phi_1, self.amp_params),
            amplitude_of_phase(self.phases.phi_2, self.amp_params),
        )


def reflection_sequence(profile: RisProfile, frame_length: int) -> np.ndarray:
    """Per-symbol complex reflection coefficients over one frame.

    Symbol m takes state 1 where the code reads +1 and state 2 where it reads
    -1, with the pattern started at the profile's cyclic offset.
    """
    m = profile.code.length
    if frame_length != m:
        raise ValueError(f"frame length {frame_length} does not match code length {m}")
    idx = (profile.offset_c + np.arange(m)) % m
    q = profile.code.symbols[idx]
    a1, a2 = profile.amplitudes()
    s1 = a1 * np.exp(1j * profile.phases.phi_1)
    s2 = a2 * np.exp(1j * profile.phases.phi_2)
    return np.where(q > 0, s1, s2)
