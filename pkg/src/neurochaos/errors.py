"""Exception hierarchy shared by the library and the command line.

Each class carries the process exit code the CLI uses when it escapes.
"""


class NeurochaosError(Exception):
    exit_code = 1


class ArgumentError(NeurochaosError, ValueError):
    """Invalid argument or configuration value (usage error)."""

    exit_code = 1


class DataError(NeurochaosError, ValueError):
    """Malformed or out-of-range input data."""

    exit_code = 2


class NormalizationError(DataError):
    """A stimulus lies outside the unit interval."""


class ParseError(DataError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EncodingError(DataError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"position {position}: {message}"
        super().__init__(message)
        self.position = position


class LengthError(DataError):
    pass


class ApproximationError(NeurochaosError, RuntimeError):
    """One or more neurons never reached their neighbourhood."""

    exit_code = 2

    def __init__(self, indices):
        self.indices = list(indices)
        super().__init__(f"neurons did not fire within max_iters: {self.indices}")


class TrainingError(NeurochaosError, RuntimeError):
    exit_code = 2


class ProtocolError(NeurochaosError, RuntimeError):
    """An experiment protocol cannot be carried out on the given data."""

    exit_code = 3
