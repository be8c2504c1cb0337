"""Detection and identification of reachable reconfigurable surfaces from
amplitude-coded reflections: codebooks, channel simulation, the shift-max
detector, Monte Carlo evaluation, and IQ capture handling."""

from .capture import (
    CAPTURE_FORMAT_TAG,
    CaptureMeta,
    read_capture,
    read_meta,
    symbols_from_samples,
    synthesize_capture,
    upsample_symbols,
    write_capture,
    write_meta,
)
from .channel import (
    CHANNEL_MODES,
    ChannelRealization,
    FrameSynthesisConfig,
    draw_cascade,
    mean_cascade_power,
    synthesize_frame,
)
from .codebook import (
    ArpCode,
    CodebookReport,
    assign_codes,
    build_codebook,
    cyclic_ambiguity_classes,
    generate_hadamard,
    max_cyclic_crosscorr,
)
from .detector import (
    CenteredFrame,
    DetectionReport,
    detect,
    detect_all,
    detection_statistic,
    estimate_noise_power,
    extract_and_center,
    normalize_threshold,
)
from .errors import (
    CapacityError,
    CaptureFormatError,
    ConfigError,
    InsufficientDataError,
    SchemaError,
)
from .montecarlo import (
    CSV_COLUMNS,
    SWEEP_AXES,
    MetricsRow,
    SweepResult,
    TrialConfig,
    derive_value_seed,
    effective_snr_db,
    noise_power_for_snr,
    read_csv,
    run_trials,
    signal_power_reference,
    sweep,
    write_csv,
)
from .ris import (
    AmplitudeModelParams,
    PhaseStatePair,
    RisProfile,
    amplitude_of_phase,
    default_phase_pair,
    reflection_sequence,
)
from .scenario import ScenarioConfig, load_scenario, trial_config
from .svgplot import plot_rows, render_line_chart

__version__ = "0.1.0"
