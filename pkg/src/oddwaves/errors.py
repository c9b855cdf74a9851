"""Package-wide exception types.

``ConfigurationError`` covers invalid parameters, grids, and usage; the CLI
maps it to exit code 2.  ``NumericalError`` covers runtime numerical failure
(non-convergence, singular systems, NaN/overflow); the CLI maps it to exit
code 3.
"""


class OddWavesError(Exception):
    """Base class for all package errors."""


class ConfigurationError(OddWavesError):
    """Invalid parameter, grid, or usage."""


class NumericalError(OddWavesError):
    """Numerical failure: divergence, singular system, or non-finite state."""

    def __init__(self, message, *, time=None, last_state=None):
        super().__init__(message)
        self.time = time
        self.last_state = last_state
