"""Cascaded two-way channel draws and received-frame synthesis.

The end-to-end gain of the terminal -> surface -> terminal path is a quadratic
form of the element-wise channel vector; with every element in the same state
it collapses to a scalar per surface.  One realization is held for a whole
frame (block fading under the coherence-time assumption).
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ris import RisProfile, reflection_sequence

CHANNEL_MODES = ("reciprocal", "independent")


@dataclass(frozen=True)
class ChannelRealization:
    h_tilde: complex
    mode: str

    def __post_init__(self):
        if self.mode not in CHANNEL_MODES:
            raise ValueError(f"channel mode must be one of {CHANNEL_MODES}, got {self.mode!r}")
        if not (np.isfinite(self.h_tilde.real) and np.isfinite(self.h_tilde.imag)):
            raise ValueError("cascaded gain must be finite")


@dataclass(frozen=True)
class FrameSynthesisConfig:
    """Carrier, noise, and direct-coupling terms for one synthesized frame."""

    frame_length: int
    noise_power: float
    carrier_amplitude: float = 1.0
    leakage: complex = 0j

    def __post_init__(self):
        if self.frame_length < 2:
            raise ValueError(f"frame_length must be >= 2, got {self.frame_length}")
        if self.noise_power < 0.0:
            raise ValueError(f"noise_power must be >= 0, got {self.noise_power}")


def _complex_gaussian(rng, n):
    # Unit-variance circularly symmetric draws; real block first, then imaginary.
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)


def draw_cascade(n_elements: int, mode: str, rng) -> ChannelRealization:
    """Draw the scalar cascaded gain for one surface.

    reciprocal:  sum of squared element gains (same vector both ways), so the
                 mean of |h|^2 over draws is 2 * n_elements.
    independent: sum of products of two independent element vectors, with mean
                 |h|^2 equal to n_elements.
    """
    if n_elements < 1:
        raise ValueError(f"n_elements must be >= 1, got {n_elements}")
    if mode == "reciprocal":
        h = _complex_gaussian(rng, n_elements)
        val = complex(np.sum(h * h))
    elif mode == "independent":
        g = _complex_gaussian(rng, n_elements)
        h = _complex_gaussian(rng, n_elements)
        val = complex(np.sum(g * h))
    else:
        raise ValueError(f"channel mode must be one of {CHANNEL_MODES}, got {mode!r}")
    return ChannelRealization(h_tilde=val, mode=mode)


def mean_cascade_power(n_elements: int, mode: str) -> float:
    """Ensemble mean of |h_tilde|^2 for the given mode."""
    if mode == "reciprocal":
        return 2.0 * n_elements
    if mode == "independent":
        return float(n_elements)
    raise ValueError(f"channel mode must be one of {CHANNEL_MODES}, got {mode!r}")


def synthesize_frame(
    profiles: Sequence[RisProfile],
    channels: Sequence[ChannelRealization],
    config: FrameSynthesisConfig,
    rng,
) -> np.ndarray:
    """Received symbol frame: superposition of reachable reflections plus
    leakage and complex AWGN of the configured power.

    Unreachable surfaces contribute nothing; their channel entries are ignored,
    so callers may pass placeholders for them.  The rng is consumed only for
    the noise vector.
    """
    if len(profiles) != len(channels):
        raise ValueError(
            f"got {len(profiles)} profiles but {len(channels)} channel realizations"
        )
    m = config.frame_length
    y = np.zeros(m, dtype=np.complex128)
    for profile, ch in zip(profiles, channels):
        if profile.code.length != m:
            raise ValueError(
                f"profile {profile.ris_id} has code length {profile.code.length}, "
                f"frame expects {m}"
            )
        if not profile.reachable:
            continue
        y += config.carrier_amplitude * reflection_sequence(profile, m) * ch.h_tilde
    y += config.leakage
    if config.noise_power > 0.0:
        y += np.sqrt(config.noise_power) * _complex_gaussian(rng, m)
    return y
