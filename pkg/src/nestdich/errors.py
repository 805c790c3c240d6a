"""Exception hierarchy; the CLI maps each class to an exit code."""


class NestDichError(Exception):
    exit_code = 4


class UsageError(NestDichError, ValueError):
    """Bad arguments or a call that violates a precondition."""

    exit_code = 2


class DataError(NestDichError, ValueError):
    """Input data is structurally valid but unusable (or a model file is bad)."""

    exit_code = 3


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
