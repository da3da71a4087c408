"""Exception types raised across the package."""


class NqsError(Exception):
    """Base class for all package errors."""


class InvalidSystemError(NqsError, ValueError):
    pass


class DimensionError(NqsError, ValueError):
    pass


class CapacityError(NqsError):
    """Requested Hilbert space is too large for full-basis work."""


class SolverError(NqsError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NumericOverflowError(NqsError, FloatingPointError):
    pass


class DegenerateStateError(NqsError, ValueError):
    """A wavefunction vector is identically zero."""


class IncompleteSweepError(NqsError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"sweep incomplete, missing couplings: {self.missing}")


class NoInteriorExtremumError(NqsError):
    pass


class ParameterError(NqsError, ValueError):
    pass
