"""
Custom exceptions for the elastic fidelity simulator
"""
from enum import Enum


class EFIDException(Exception):
    """Base exception for the simulator"""

    pass


class ConfigurationError(EFIDException):
    """Raised when configuration is invalid"""

    pass


class UsageError(EFIDException):
    """Raised when an API is used outside its contract"""

    pass


class DimensionError(EFIDException):
    """Raised when media dimensions or shapes are unsupported"""

    pass


class BitstreamError(EFIDException):
    """Raised when a bitstream header does not verify"""

    pass


class MetricError(EFIDException):
    """Raised when quality metric inputs are incompatible"""

    pass


class PowerModelError(EFIDException):
    """Raised when power model inputs are out of range"""

    pass


class WorkloadLoadError(EFIDException):
    """Raised when a workload mix file cannot be loaded"""

    pass


class ManifestLoadError(EFIDException):
    """Raised when a sweep manifest cannot be loaded"""

    pass


class ReportError(EFIDException):
    """Raised when a sweep result cannot be reported"""

    pass


class FailureKind(str, Enum):
    """Detected decode failure categories"""

    INVALID_CODE = "InvalidCode"
    INDEX_OUT_OF_RANGE = "IndexOutOfRange"
    STREAM_EXHAUSTED = "StreamExhausted"
    LIMIT_EXCEEDED = "LimitExceeded"


class DecodeFailure(EFIDException):
    """
    Raised by a decoder when injected errors drive it into a detected abort.

    Trial runners record it as an outcome rather than propagating it.
    """

    def __init__(self, kind: FailureKind, location: str, detail: str = ""):
        message = f"{kind.value} in {location}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.kind = kind
        self.location = location
        self.detail = detail
