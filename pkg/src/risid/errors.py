"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Requested more codes than the codebook can supply without ambiguity."""


class InsufficientDataError(ValueError):
    """Not enough samples to perform the requested operation."""


class CaptureFormatError(ValueError):
    """Capture file bytes do not conform to the raw IQ format."""


class SchemaError(ValueError):
    """Tabular data does not match the documented schema."""


class ConfigError(ValueError):
    """Scenario configuration is missing, inconsistent, or ill-typed."""
