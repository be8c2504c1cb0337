"""Monte Carlo estimation of miss/false-alarm probabilities and average
detection values, with sweeps over threshold, SNR, and code length.

Randomness layout: every consumer of randomness gets its own substream,
derived as SeedSequence(entropy=seed, spawn_key=(trial, consumer)) with
consumer 0 for frame noise, 2*i+1 for the channel of profile i, and 2*i+2 for
its cyclic offset.  Trial outcomes therefore depend only on (seed, trial), and
results are merged by assembling per-trial arrays in trial order before
reducing, so the worker count cannot change any output bit.
"""

import csv
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channel import (
    CHANNEL_MODES,
    ChannelRealization,
    FrameSynthesisConfig,
    draw_cascade,
    mean_cascade_power,
    synthesize_frame,
)
from .codebook import ArpCode, assign_codes
from .detector import detect_all, normalize_threshold
from .errors import SchemaError
from .ris import RisProfile

SWEEP_AXES = ("thr_norm", "snr_db", "code_length")

# Column order is a wire contract; consumers validate it verbatim.
CSV_COLUMNS = [
    "scenario",
    "ris_id",
    "reachable",
    "code_length",
    "snr_db",
    "thr_norm",
    "swept_axis",
    "swept_value",
    "p_miss",
    "p_miss_se",
    "p_false",
    "p_false_se",
    "d_max_avg",
    "trials",
    "seed",
]

_SWEEP_STREAM = 0x5EED  # spawn_key namespace for per-value seeds


@dataclass(frozen=True, eq=False)
class TrialConfig:
    """Everything one batch of randomized trials needs, including its seed."""

    profiles: Tuple[RisProfile, ...]
    frame: FrameSynthesisConfig
    codebook: Tuple[ArpCode, ...]
    thr_norm: float
    trials: int
    seed: int
    channel_mode: str = "reciprocal"
    label: str = ""
    offsets: Optional[Tuple[Optional[int], ...]] = None  # None entry = fresh draw per trial
    offset_low: int = 0  # 1 restricts offsets to {1..M-1}
    code_rows: Optional[Tuple[Optional[int], ...]] = None  # remembered for code_length sweeps

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.channel_mode not in CHANNEL_MODES:
            raise ValueError(
                f"channel mode must be one of {CHANNEL_MODES}, got {self.channel_mode!r}"
            )
        if len(self.profiles) != len(self.codebook):
            raise ValueError("need exactly one codebook entry per profile")
        for p, c in zip(self.profiles, self.codebook):
            if p.ris_id != c.ris_id:
                raise ValueError(
                    f"profile/codebook ris_id mismatch: {p.ris_id} vs {c.ris_id}"
                )
        if self.offsets is not None and len(self.offsets) != len(self.profiles):
            raise ValueError("offsets must align with profiles")
        if self.offset_low not in (0, 1):
            raise ValueError(f"offset_low must be 0 or 1, got {self.offset_low}")


@dataclass(frozen=True)
class MetricsRow:
    """One CSV row: metrics for one RIS under one parameter setting."""

    scenario: str
    ris_id: int
    reachable: bool
    code_length: int
    snr_db: float
    thr_norm: float
    swept_axis: str
    swept_value: float
    p_miss: Optional[float]
    p_miss_se: Optional[float]
    p_false: Optional[float]
    p_false_se: Optional[float]
    d_max_avg: float
    trials: int
    seed: int


@dataclass(frozen=True)
class SweepResult:
    axis: str
    values: Tuple[float, ...]
    rows: Tuple[MetricsRow, ...]


def _consumer_rng(seed: int, trial: int, consumer: int):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial, consumer))
    return np.random.default_rng(ss)


def derive_value_seed(seed: int, index: int) -> int:
    """Per-sweep-value child seed, derived so runs stay replayable in isolation."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_SWEEP_STREAM, index))
    return int(ss.generate_state(1, np.uint64)[0])


def signal_power_reference(
    profiles: Sequence[RisProfile], carrier_amplitude: float, mode: str
) -> float:
    """Mean noiseless frame power of the strongest reachable surface.

    Falls back to the strongest surface overall when none is reachable, so the
    SNR knob stays meaningful in no-reflection scenarios.
    """
    def power(p: RisProfile) -> float:
        a1, a2 = p.amplitudes()
        return (
            carrier_amplitude ** 2
            * mean_cascade_power(p.n_elements, mode)
            * (a1 ** 2 + a2 ** 2)
            / 2.0
        )

    pool = [p for p in profiles if p.reachable] or list(profiles)
    if not pool:
        raise ValueError("at least one profile is required")
    return max(power(p) for p in pool)


def noise_power_for_snr(
    profiles: Sequence[RisProfile], carrier_amplitude: float, mode: str, snr_db: float
) -> float:
    return signal_power_reference(profiles, carrier_amplitude, mode) / 10.0 ** (snr_db / 10.0)


def effective_snr_db(config: TrialConfig) -> float:
    p_sig = signal_power_reference(
        config.profiles, config.frame.carrier_amplitude, config.channel_mode
    )
    return 10.0 * math.log10(p_sig / config.frame.noise_power)


def _trial_block(config: TrialConfig, lo: int, hi: int):
    """Outcomes for trials [lo, hi): D_max and reachability decisions per RIS."""
    n = len(config.profiles)
    m = config.frame.frame_length
    threshold = normalize_threshold(config.thr_norm, config.frame.noise_power)
    offsets = config.offsets or (None,) * n
    d_max = np.empty((hi - lo, n), dtype=np.float64)
    decided = np.empty((hi - lo, n), dtype=bool)
    for t in range(lo, hi):
        profiles_t = []
        channels = []
        for i, p in enumerate(config.profiles):
            c = offsets[i]
            if c is None:
                c = int(
                    _consumer_rng(config.seed, t, 2 * i + 2).integers(config.offset_low, m)
                )
            profiles_t.append(replace(p, offset_c=c))
            if p.reachable:
                channels.append(
                    draw_cascade(
                        p.n_elements, config.channel_mode, _consumer_rng(config.seed, t, 2 * i + 1)
                    )
                )
            else:
                channels.append(ChannelRealization(h_tilde=0j, mode=config.channel_mode))
        y = synthesize_frame(
            profiles_t, channels, config.frame, _consumer_rng(config.seed, t, 0)
        )
        for i, report in enumerate(detect_all(y, config.codebook, threshold)):
            d_max[t - lo, i] = report.d_max
            decided[t - lo, i] = report.decided_reachable
    return d_max, decided


def _wald_se(p: float, k: int) -> float:
    return math.sqrt(p * (1.0 - p) / k)


def run_trials(
    config: TrialConfig,
    workers: int = 1,
    swept_axis: str = "",
    swept_value: float = math.nan,
) -> List[MetricsRow]:
    """Estimate per-RIS metrics over `config.trials` randomized trials.

    Each trial draws fresh channels, fresh cyclic offsets, and fresh noise,
    then runs the detector for every codebook entry against the shared frame.
    Miss probabilities are tallied only for truly reachable surfaces and false
    alarms only for unreachable ones.
    """
    if config.frame.noise_power <= 0.0:
        raise ValueError("run_trials needs noise_power > 0: the normalized threshold is undefined otherwise")
    k = config.trials
    if workers <= 1 or k == 1:
        d_max, decided = _trial_block(config, 0, k)
    else:
        workers = min(workers, k)
        bounds = np.linspace(0, k, workers + 1).astype(int)
        spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_trial_block, [config] * len(spans), *zip(*spans)))
        d_max = np.vstack([p[0] for p in parts])
        decided = np.vstack([p[1] for p in parts])

    snr_db = effective_snr_db(config)
    rows = []
    for i, profile in enumerate(config.profiles):
        avg = float(np.sum(d_max[:, i]) / k)
        hits = int(np.count_nonzero(decided[:, i]))
        if profile.reachable:
            p_miss = (k - hits) / k
            p_miss_se = _wald_se(p_miss, k)
            p_false = p_false_se = None
        else:
            p_false = hits / k
            p_false_se = _wald_se(p_false, k)
            p_miss = p_miss_se = None
        rows.append(
            MetricsRow(
                scenario=config.label,
                ris_id=profile.ris_id,
                reachable=profile.reachable,
                code_length=config.frame.frame_length,
                snr_db=snr_db,
                thr_norm=config.thr_norm,
                swept_axis=swept_axis,
                swept_value=swept_value,
                p_miss=p_miss,
                p_miss_se=p_miss_se,
                p_false=p_false,
                p_false_se=p_false_se,
                d_max_avg=avg,
                trials=k,
                seed=config.seed,
            )
        )
    return rows


def _with_axis_value(base: TrialConfig, axis: str, value: float, seed: int) -> TrialConfig:
    if axis == "thr_norm":
        return replace(base, thr_norm=value, seed=seed)
    if axis == "snr_db":
        sigma2 = noise_power_for_snr(
            base.profiles, base.frame.carrier_amplitude, base.channel_mode, value
        )
        return replace(base, frame=replace(base.frame, noise_power=sigma2), seed=seed)
    if axis == "code_length":
        m = int(value)
        if m != value or m < 4 or (m & (m - 1)) != 0:
            raise ValueError(f"code_length values must be powers of two >= 4, got {value}")
        rows = base.code_rows or (None,) * len(base.profiles)
        codes = assign_codes(m, rows)
        profiles = tuple(
            replace(p, code=c, offset_c=0) for p, c in zip(base.profiles, codes)
        )
        offsets = None
        if base.offsets is not None:
            for o in base.offsets:
                if o is not None and o >= m:
                    raise ValueError(f"fixed offset {o} is out of range for code length {m}")
            offsets = base.offsets
        return replace(
            base,
            profiles=profiles,
            codebook=tuple(codes),
            frame=replace(base.frame, frame_length=m),
            offsets=offsets,
            seed=seed,
        )
    raise ValueError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")


def sweep(
    base: TrialConfig, axis: str, values: Sequence[float], workers: int = 1
) -> SweepResult:
    """One run_trials per swept value, each on a seed derived from the master.

    Values must be non-empty and sorted ascending so downstream monotonicity
    checks and plots read naturally.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("sweep needs at least one value")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError("sweep values must be strictly ascending")
    rows: List[MetricsRow] = []
    for j, v in enumerate(vals):
        cfg = _with_axis_value(base, axis, v, derive_value_seed(base.seed, j))
        rows.extend(run_trials(cfg, workers=workers, swept_axis=axis, swept_value=v))
    return SweepResult(axis=axis, values=tuple(vals), rows=tuple(rows))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def write_csv(rows: Sequence[MetricsRow], path) -> None:
    """Write rows in the documented column order, atomically (write then rename)."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(prefix=".risid-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in rows:
                writer.writerow(
                    [
                        r.scenario,
                        r.ris_id,
                        _cell(r.reachable),
                        r.code_length,
                        _cell(r.snr_db),
                        _cell(r.thr_norm),
                        r.swept_axis,
                        _cell(r.swept_value),
                        _cell(r.p_miss),
                        _cell(r.p_miss_se),
                        _cell(r.p_false),
                        _cell(r.p_false_se),
                        _cell(r.d_max_avg),
                        r.trials,
                        r.seed,
                    ]
                )
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path) -> List[MetricsRow]:
    """Parse a results CSV, validating the exact column order."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"results file {path} is empty") from None
        for got, want in zip(header, CSV_COLUMNS):
            if got != want:
                raise SchemaError(
                    f"results file {path}: expected column {want!r}, found {got!r}"
                )
        if len(header) != len(CSV_COLUMNS):
            raise SchemaError(
                f"results file {path}: expected {len(CSV_COLUMNS)} columns, "
                f"found {len(header)}"
            )
        rows = []
        for rec in reader:
            if len(rec) != len(CSV_COLUMNS):
                raise SchemaError(
                    f"results file {path}: row {reader.line_num} has {len(rec)} fields"
                )
            opt = lambda s: None if s == "" else float(s)
            rows.append(
                MetricsRow(
                    scenario=rec[0],
                    ris_id=int(rec[1]),
                    reachable=rec[2] == "1",
                    code_length=int(rec[3]),
                    snr_db=float(rec[4]),
                    thr_norm=float(rec[5]),
                    swept_axis=rec[6],
                    swept_value=math.nan if rec[7] == "" else float(rec[7]),
                    p_miss=opt(rec[8]),
                    p_miss_se=opt(rec[9]),
                    p_false=opt(rec[10]),
                    p_false_se=opt(rec[11]),
                    d_max_avg=float(rec[12]),
                    trials=int(rec[13]),
                    seed=int(rec[14]),
                )
            )
    if not rows:
        raise SchemaError(f"results file {path} contains no data rows")
    return rows
