"""Scenario configuration files: a flat TOML schema describing the surfaces,
the channel, the noise level, and the trial protocol.

Top-level keys
    name               string, defaults to the file stem
    code_length        int, power of two >= 4 (required)
    trials             int, default 300
    seed               int, default 0
    thr_norm           float, default 1.0
    carrier_amplitude  float, default 1.0
    noise_power XOR snr_db   exactly one (snr_db is relative to the mean
                             noiseless frame power of the strongest reachable
                             surface)
    channel_mode       "reciprocal" (default) or "independent"
    leakage_re / leakage_im  floats, default 0
    offset_range       "full" (offsets 0..M-1, default) or "nonzero" (1..M-1)

Per-surface [[ris]] tables
    n_elements         int (required)
    reachable          bool (required)
    a_min, delta, gamma        amplitude-model constants (defaults 0.2,
                               0.43*pi, 1.6)
    phi_1, phi_2       phase states in radians (default delta +- pi/2)
    code_row           optional explicit Hadamard row index
    offset             "random" (default) or a fixed integer in range
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .channel import CHANNEL_MODES, FrameSynthesisConfig
from .codebook import assign_codes
from .errors import ConfigError
from .montecarlo import TrialConfig, noise_power_for_snr
from .ris import AmplitudeModelParams, PhaseStatePair, RisProfile, default_phase_pair


@dataclass
class RisSpec:
    n_elements: int
    reachable: bool
    a_min: float
    delta: float
    gamma: float
    phi_1: Optional[float]
    phi_2: Optional[float]
    code_row: Optional[int]
    offset: Optional[int]  # None = fresh draw per trial


@dataclass
class ScenarioConfig:
    name: str
    code_length: int
    trials: int
    seed: int
    thr_norm: float
    carrier_amplitude: float
    noise_power: Optional[float]
    snr_db: Optional[float]
    channel_mode: str
    leakage: complex
    offset_low: int
    ris: List[RisSpec]


def _get(table, key, kind, default=None, required=False, where="scenario"):
    if key not in table:
        if required:
            raise ConfigError(f"{where}: missing required key {key!r}")
        return default
    val = table[key]
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, kind) or (kind is int and isinstance(val, bool)):
        raise ConfigError(f"{where}: key {key!r} must be {kind.__name__}, got {type(val).__name__}")
    return val


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc

    name = _get(raw, "name", str, default=path.stem)
    code_length = _get(raw, "code_length", int, required=True)
    trials = _get(raw, "trials", int, default=300)
    seed = _get(raw, "seed", int, default=0)
    thr_norm = _get(raw, "thr_norm", float, default=1.0)
    carrier = _get(raw, "carrier_amplitude", float, default=1.0)
    noise_power = _get(raw, "noise_power", float)
    snr_db = _get(raw, "snr_db", float)
    if (noise_power is None) == (snr_db is None):
        raise ConfigError(f"{path}: exactly one of noise_power or snr_db must be set")
    mode = _get(raw, "channel_mode", str, default="reciprocal")
    if mode not in CHANNEL_MODES:
        raise ConfigError(f"{path}: channel_mode must be one of {CHANNEL_MODES}, got {mode!r}")
    leakage = complex(
        _get(raw, "leakage_re", float, default=0.0),
        _get(raw, "leakage_im", float, default=0.0),
    )
    offset_range = _get(raw, "offset_range", str, default="full")
    if offset_range not in ("full", "nonzero"):
        raise ConfigError(f"{path}: offset_range must be 'full' or 'nonzero', got {offset_range!r}")

    tables = raw.get("ris")
    if not isinstance(tables, list) or not tables:
        raise ConfigError(f"{path}: at least one [[ris]] table is required")
    ris = []
    for i, tbl in enumerate(tables):
        where = f"{path} [[ris]] #{i + 1}"
        offset_raw = tbl.get("offset", "random")
        if offset_raw == "random":
            offset = None
        elif isinstance(offset_raw, int) and not isinstance(offset_raw, bool):
            offset = offset_raw
        else:
            raise ConfigError(f"{where}: offset must be 'random' or an integer, got {offset_raw!r}")
        delta = _get(tbl, "delta", float, default=0.43 * math.pi, where=where)
        ris.append(
            RisSpec(
                n_elements=_get(tbl, "n_elements", int, required=True, where=where),
                reachable=_get(tbl, "reachable", bool, required=True, where=where),
                a_min=_get(tbl, "a_min", float, default=0.2, where=where),
                delta=delta,
                gamma=_get(tbl, "gamma", float, default=1.6, where=where),
                phi_1=_get(tbl, "phi_1", float, where=where),
                phi_2=_get(tbl, "phi_2", float, where=where),
                code_row=_get(tbl, "code_row", int, where=where),
                offset=offset,
            )
        )

    return ScenarioConfig(
        name=name,
        code_length=code_length,
        trials=trials,
        seed=seed,
        thr_norm=thr_norm,
        carrier_amplitude=carrier,
        noise_power=noise_power,
        snr_db=snr_db,
        channel_mode=mode,
        leakage=leakage,
        offset_low=0 if offset_range == "full" else 1,
        ris=ris,
    )


def trial_config(sc: ScenarioConfig) -> TrialConfig:
    """Materialize a scenario into a runnable trial configuration."""
    try:
        code_rows = tuple(spec.code_row for spec in sc.ris)
        codes = assign_codes(sc.code_length, code_rows)
        profiles = []
        for spec, code in zip(sc.ris, codes):
            params = AmplitudeModelParams(a_min=spec.a_min, delta=spec.delta, gamma=spec.gamma)
            base = default_phase_pair(params)
            phases = PhaseStatePair(
                phi_1=base.phi_1 if spec.phi_1 is None else spec.phi_1,
                phi_2=base.phi_2 if spec.phi_2 is None else spec.phi_2,
            )
            profiles.append(
                RisProfile(
                    ris_id=code.ris_id,
                    n_elements=spec.n_elements,
                    reachable=spec.reachable,
                    amp_params=params,
                    phases=phases,
                    code=code,
                    offset_c=spec.offset or 0,
                )
            )
        noise = sc.noise_power
        if noise is None:
            noise = noise_power_for_snr(profiles, sc.carrier_amplitude, sc.channel_mode, sc.snr_db)
        frame = FrameSynthesisConfig(
            frame_length=sc.code_length,
            noise_power=noise,
            carrier_amplitude=sc.carrier_amplitude,
            leakage=sc.leakage,
        )
        return TrialConfig(
            profiles=tuple(profiles),
            frame=frame,
            codebook=tuple(codes),
            thr_norm=sc.thr_norm,
            trials=sc.trials,
            seed=sc.seed,
            channel_mode=sc.channel_mode,
            label=sc.name,
            offsets=tuple(spec.offset for spec in sc.ris),
            offset_low=sc.offset_low,
            code_rows=code_rows,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"scenario {sc.name!r}: {exc}") from exc
