"""Reachability detection: amplitude extraction, zero-centering, and maximum
cyclic correlation against candidate patterns.

All reductions in this module use exactly rounded summation (math.fsum), so the
correlation statistic is independent of accumulation order.  That makes the
maximum detection value bit-for-bit invariant under cyclic rotation of the
input frame, which downstream code and tests rely on.
"""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .codebook import ArpCode
from .errors import InsufficientDataError


@dataclass(frozen=True, eq=False)
class CenteredFrame:
    """Zero-mean magnitude sequence of one received frame."""

    samples: np.ndarray


@dataclass(frozen=True)
class DetectionReport:
    ris_id: int
    d_max: float
    best_shift: int
    decided_reachable: bool
    threshold_used: float


def extract_and_center(y: Sequence[complex]) -> CenteredFrame:
    """Magnitudes of the received symbols with their sample mean removed.

    No variance normalization is applied: the statistic must retain signal
    scale so that detection values grow with transmit power and code length.
    """
    yv = np.asarray(y, dtype=np.complex128)
    if yv.ndim != 1 or yv.size < 2:
        raise ValueError(f"expected a frame of at least 2 symbols, got shape {yv.shape}")
    mags = np.abs(yv)
    mean = math.fsum(mags.tolist()) / yv.size
    out = mags - mean
    out.setflags(write=False)
    return CenteredFrame(samples=out)


def _shift_rows(code: ArpCode) -> np.ndarray:
    # Row s holds the code rotated left by s, as float64, C-contiguous.
    sym = code.symbols.astype(np.float64)
    m = sym.size
    idx = (np.arange(m)[:, None] + np.arange(m)[None, :]) % m
    return np.ascontiguousarray(sym[idx])


def _statistic(row: np.ndarray, samples: np.ndarray, sqrt_m: float) -> Tuple[float, float]:
    d = math.fsum((row * samples).tolist()) / sqrt_m
    return d, d * d


def detection_statistic(frame: CenteredFrame, code: ArpCode, shift: int) -> Tuple[float, float]:
    """(d, D) for one cyclic shift: the sqrt(M)-normalized correlation of the
    shifted code with the centered frame, and its square."""
    m = code.length
    if frame.samples.size != m:
        raise ValueError(
            f"frame length {frame.samples.size} does not match code length {m}"
        )
    if not 0 <= shift < m:
        raise ValueError(f"shift must lie in [0, {m - 1}], got {shift}")
    row = np.roll(code.symbols.astype(np.float64), -shift)
    return _statistic(row, frame.samples, math.sqrt(m))


def detect(frame: CenteredFrame, code: ArpCode, threshold: float) -> DetectionReport:
    """Run the shift-max detection for one candidate pattern.

    D_max is the maximum of D over all M cyclic shifts, best_shift the smallest
    shift attaining it, and the surface is declared reachable iff D_max exceeds
    the threshold strictly.
    """
    if threshold < 0.0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    m = code.length
    if frame.samples.size != m:
        raise ValueError(
            f"frame length {frame.samples.size} does not match code length {m}"
        )
    # One vectorized multiply for all shifts; the exact products per shift are
    # unchanged, only the reduction below decides the numerics.
    products = (_shift_rows(code) * frame.samples).tolist()
    sqrt_m = math.sqrt(m)
    d_max = -1.0
    best_shift = 0
    for s in range(m):
        d = math.fsum(products[s]) / sqrt_m
        big_d = d * d
        if big_d > d_max:
            d_max = big_d
            best_shift = s
    return DetectionReport(
        ris_id=code.ris_id,
        d_max=d_max,
        best_shift=best_shift,
        decided_reachable=d_max > threshold,
        threshold_used=threshold,
    )


def detect_all(
    y: Sequence[complex], codebook: Sequence[ArpCode], threshold: float
) -> List[DetectionReport]:
    """Detection report per candidate pattern, sharing one centered frame."""
    if len(codebook) == 0:
        raise ValueError("codebook must contain at least one code")
    frame = extract_and_center(y)
    return [detect(frame, code, threshold) for code in codebook]


def normalize_threshold(thr_norm: float, noise_power: float) -> float:
    """Absolute decision threshold from a noise-normalized one."""
    if noise_power <= 0.0:
        raise ValueError(f"noise_power must be > 0 to normalize, got {noise_power}")
    return thr_norm * noise_power


def estimate_noise_power(quiet_samples: Sequence[complex]) -> float:
    """Mean |sample|^2 over a signal-free stretch; needs at least 100 samples.

    Returns 0.0 for an all-zero input; callers must reject that before
    threshold normalization.
    """
    qv = np.asarray(quiet_samples, dtype=np.complex128)
    if qv.size < 100:
        raise InsufficientDataError(
            f"noise estimation needs >= 100 samples, got {qv.size}"
        )
    return math.fsum((np.abs(qv) ** 2).tolist()) / qv.size
