"""Exception hierarchy shared by all polariguide modules."""


class PolariguideError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PolariguideError, ValueError):
    pass


class GeometryError(PolariguideError):
    """Two emitters closer than the minimal admissible separation."""


class DomainError(PolariguideError, ValueError):
    """A function was evaluated outside of its domain."""


class PreconditionError(PolariguideError):
    """A closed-form result was requested outside of its validity range."""


class SingularSystemError(PolariguideError):
    pass


class EigenConvergenceError(PolariguideError):
    """Raised when an eigenpair violates its residual bound.

    The offending matrix is kept on ``matrix`` so that callers can dump it.
    """

    def __init__(self, message, matrix=None, residuals=None):
        super().__init__(message)
        self.matrix = matrix
        self.residuals = residuals


class FitError(PolariguideError):
    pass


class RealizationError(PolariguideError):
    """Wraps a failure inside one ensemble realization."""

    def __init__(self, index, seed, cause):
        super().__init__(f"realization {index} (seed {seed}) failed: {cause}")
        self.index = index
        self.seed = seed
        self.cause = cause


class ConfigError(PolariguideError):
    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line
        self.reason = message
