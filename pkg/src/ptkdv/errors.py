"""Exception types shared across the solver suite."""


class PtkdvError(Exception):
    """Base class for runtime failures of the solvers."""


class DomainError(ValueError):
    """Argument lies outside an evaluator's guaranteed range."""


class CarrierMismatchError(ValueError):
    """Operation requires a complex-carrier field but got a real one (or vice versa)."""


class SingularPowerError(ValueError):
    """Negative power of a gradient that vanishes somewhere on the grid."""


class ConfigurationError(ValueError):
    """Inconsistent evolution configuration (e.g. dt does not divide snapshot times)."""


class BlowUpError(PtkdvError):
    """Time integration produced NaN/overflowing modes."""

    def __init__(self, time_reached: float, message: str | None = None):
        self.time_reached = time_reached
        super().__init__(message or f"solution blew up at t = {time_reached:.6g}")


class ConvergenceError(PtkdvError):
    """An iteration (series, secant, ...) failed to converge within its budget."""


class NoSolutionError(PtkdvError):
    """No root of the matching condition inside the search bracket."""


class NoWaveError(PtkdvError):
    """No coherent right-moving pulse found in a trajectory."""


class MalformedProfileError(PtkdvError):
    """Profile does not have the structure an operation requires."""
