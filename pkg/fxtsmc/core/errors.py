"""Domain exceptions and the exit codes the CLI maps them to."""

from __future__ import annotations

from typing import Optional, Tuple

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERIC = 4
EXIT_ACCEPTANCE = 5


class FxtError(Exception):
    """Base class; `exit_code` is what a CLI command exits with."""

    exit_code = EXIT_NUMERIC

    def __init__(self, message: str, error_type: str = "numeric"):
        super().__init__(message)
        self.error_type = error_type


class ConfigError(FxtError):
    exit_code = EXIT_CONFIG

    def __init__(self, message: str):
        super().__init__(message, "config")


class ArtifactIOError(FxtError):
    exit_code = EXIT_IO

    def __init__(self, message: str):
        super().__init__(message, "io")


class AcceptanceError(FxtError):
    exit_code = EXIT_ACCEPTANCE

    def __init__(self, message: str):
        super().__init__(message, "acceptance")


class ParameterError(FxtError, ValueError):
    """A gain, exponent or bound argument lies outside its domain."""

    def __init__(self, message: str, channel: Optional[int] = None):
        if channel is not None:
            message = f"channel {channel + 1}: {message}"
        super().__init__(message, "parameter")
        self.channel = channel


class GainTooSmallError(ParameterError):
    def __init__(self, inequality: str, channel: Optional[int] = None):
        super().__init__(f"gain condition violated: {inequality}", channel)
        self.inequality = inequality


class NumericError(FxtError):
    def __init__(self, message: str):
        super().__init__(message, "numeric")


class SimulationDivergedError(NumericError):
    def __init__(self, t: float, channel: int):
        super().__init__(f"simulation diverged at t={t:.6g}s on channel {channel + 1}")
        self.t = t
        self.channel = channel


class SingularGainError(NumericError):
    def __init__(self, channel: int, t: Optional[float] = None):
        where = f" at t={t:.6g}s" if t is not None else ""
        super().__init__(f"input gain g_{channel + 1}(x) is zero{where}")
        self.t = t
        self.channel = channel


class EvaluationError(NumericError):
    def __init__(self, what: str, channel: int):
        super().__init__(f"{what} is not finite on channel {channel + 1}")
        self.channel = channel


class AccumulationError(NumericError):
    def __init__(self, t: float, channel: int):
        super().__init__(f"sliding integral became non-finite at t={t:.6g}s "
                         f"on channel {channel + 1}")
        self.t = t
        self.channel = channel


class PerturbationBoundError(NumericError):
    def __init__(self, t: float, channel: int, value: float, bound: float):
        super().__init__(f"|d_{channel + 1}({t:.6g})| = {abs(value):.6g} exceeds "
                         f"declared bound {bound:.6g}")
        self.t = t
        self.channel = channel


class IllConditionedDataError(NumericError):
    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        if pair is not None:
            message = f"{message} (rows {pair[0]} and {pair[1]})"
        super().__init__(message)
        self.pair = pair


class UnfitModelError(NumericError):
    pass


class ChannelMismatchError(NumericError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"expected {expected} channels, got {got}")
        self.expected = expected
        self.got = got
