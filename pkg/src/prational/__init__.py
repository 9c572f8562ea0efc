"""p-rationality of quadratic fields and multiquadratic compositums."""

from .errors import (
    ComputationRefused,
    ConfigError,
    InvalidInput,
    NoRoot,
    NotPrincipal,
    PrecisionLoss,
)

__version__ = "0.1.0"

__all__ = [
    "ComputationRefused",
    "ConfigError",
    "InvalidInput",
    "NoRoot",
    "NotPrincipal",
    "PrecisionLoss",
]
