"""Raw baseband IQ capture files and symbol recovery from oversampled streams.

Capture format: interleaved little-endian IEEE-754 single-precision pairs,
I then Q, with a JSON sidecar describing rates and framing.  This is the
lowest common denominator emitted by common SDR tooling and is bit-exact to
read back.
"""

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .errors import CaptureFormatError, InsufficientDataError, SchemaError

CAPTURE_FORMAT_TAG = "iq-f32le-interleaved"


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class CaptureMeta:
    sample_rate_hz: float
    samples_per_symbol: int
    center_freq_hz: float
    frame_length: int
    format_tag: str = CAPTURE_FORMAT_TAG

    def __post_init__(self):
        if self.samples_per_symbol < 1:
            raise ValueError(
                f"samples_per_symbol must be >= 1, got {self.samples_per_symbol}"
            )
        if not _is_power_of_two(self.frame_length):
            raise ValueError(
                f"frame_length must be a power of two, got {self.frame_length}"
            )
        if self.format_tag != CAPTURE_FORMAT_TAG:
            raise ValueError(
                f"unsupported format_tag {self.format_tag!r}; "
                f"expected {CAPTURE_FORMAT_TAG!r}"
            )


def write_meta(meta: CaptureMeta, path) -> None:
    Path(path).write_text(json.dumps(asdict(meta), indent=2) + "\n")


def read_meta(path) -> CaptureMeta:
    raw = json.loads(Path(path).read_text())
    expected = {"sample_rate_hz", "samples_per_symbol", "center_freq_hz", "frame_length", "format_tag"}
    missing = expected - set(raw)
    if missing:
        raise SchemaError(f"capture sidecar {path} is missing keys: {sorted(missing)}")
    try:
        return CaptureMeta(
            sample_rate_hz=float(raw["sample_rate_hz"]),
            samples_per_symbol=int(raw["samples_per_symbol"]),
            center_freq_hz=float(raw["center_freq_hz"]),
            frame_length=int(raw["frame_length"]),
            format_tag=str(raw["format_tag"]),
        )
    except ValueError as exc:
        raise SchemaError(f"capture sidecar {path}: {exc}") from exc


def read_capture(path, meta: CaptureMeta) -> np.ndarray:
    """Decode a raw capture into complex128 samples, in file order."""
    size = Path(path).stat().st_size
    if size % 8 != 0:
        raise CaptureFormatError(
            f"capture {path} is truncated: {size} bytes is not a multiple of 8 "
            f"(trailing partial sample at byte offset {size - size % 8})"
        )
    flat = np.fromfile(str(path), dtype="<f4")
    if flat.size == 0:
        return np.empty(0, dtype=np.complex128)
    pairs = flat.reshape(-1, 2).astype(np.float64)
    return pairs[:, 0] + 1j * pairs[:, 1]


def write_capture(path, samples: Sequence[complex]) -> None:
    """Encode complex samples as interleaved float32 pairs (inverse of read)."""
    sv = np.asarray(samples, dtype=np.complex128)
    flat = np.empty(2 * sv.size, dtype="<f4")
    flat[0::2] = sv.real.astype(np.float32)
    flat[1::2] = sv.imag.astype(np.float32)
    flat.tofile(str(path))


def symbols_from_samples(samples: Sequence[complex], meta: CaptureMeta) -> List[np.ndarray]:
    """Integrate-and-dump candidate frames, one per integer sample offset.

    For offset o, symbol m is the mean of samples[o + m*sps : o + (m+1)*sps].
    Offsets are tried in [0, sps); an offset is only emitted when a full frame
    fits, so a minimally sized capture yields the offset-0 candidate alone.
    The caller picks the offset whose frame maximizes the detection value.
    """
    sv = np.asarray(samples, dtype=np.complex128)
    sps = meta.samples_per_symbol
    m = meta.frame_length
    need = sps * m
    if sv.size < need:
        raise InsufficientDataError(
            f"need at least {need} samples for {m} symbols at {sps} samples/symbol, "
            f"got {sv.size}"
        )
    frames = []
    for o in range(sps):
        if o + need > sv.size:
            break
        frames.append(sv[o : o + need].reshape(m, sps).mean(axis=1))
    return frames


def upsample_symbols(
    symbols: Sequence[complex], sps: int, sample_offset: int, n_samples: int
) -> np.ndarray:
    """Piecewise-constant sample stream from a cyclically repeating frame.

    The surface modulates continuously, so the symbol sequence wraps; the
    first full symbol boundary in the stream falls at index `sample_offset`.
    """
    sym = np.asarray(symbols, dtype=np.complex128)
    if sps < 1:
        raise ValueError(f"sps must be >= 1, got {sps}")
    if not 0 <= sample_offset < sps:
        raise ValueError(f"sample_offset must lie in [0, {sps - 1}], got {sample_offset}")
    t = np.arange(n_samples)
    idx = np.floor_divide(t - sample_offset, sps) % sym.size
    return sym[idx]


def synthesize_capture(
    noiseless_symbols: Sequence[complex],
    sps: int,
    sample_offset: int,
    noise_power_per_sample: float,
    rng,
    n_frames: int = 2,
    quiet_head: int = 0,
) -> np.ndarray:
    """Oversampled capture of a repeating frame plus per-sample complex AWGN.

    An optional noise-only head of `quiet_head` samples is prepended for
    receiver-side noise power estimation.
    """
    sym = np.asarray(noiseless_symbols, dtype=np.complex128)
    n_sig = n_frames * sym.size * sps
    sig = upsample_symbols(sym, sps, sample_offset, n_sig)
    out = np.concatenate([np.zeros(quiet_head, dtype=np.complex128), sig])
    if noise_power_per_sample > 0.0:
        scale = math.sqrt(noise_power_per_sample / 2.0)
        out = out + scale * (
            rng.standard_normal(out.size) + 1j * rng.standard_normal(out.size)
        )
    return out
