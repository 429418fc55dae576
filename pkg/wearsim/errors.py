"""
Wearsim Exceptions
==================
Typed errors raised by the models, the stochastic engine and the CLI.
"""

from typing import List, Optional


class WearsimError(Exception):
    """Base class for every error raised by wearsim"""


class DomainError(WearsimError, ValueError):
    """A model precondition was violated (T <= 0, j <= 0, d_ox <= 0, ...)"""


class VariantError(DomainError):
    """Operation called with an OB variant or params type it does not handle"""


class WaveformError(DomainError):
    """Waveform samples are empty, unordered or exceed the period"""


class TruncationExhaustedError(DomainError):
    """Too many draws fell below a distribution floor"""

    def __init__(self, name: str, floor: float, attempts: int):
        super().__init__(
            f"parameter '{name}': {attempts} redraws still below floor {floor!r}; "
            f"distribution is unphysical for this floor"
        )
        self.name = name
        self.floor = floor
        self.attempts = attempts


class IncompatibleBindingError(DomainError):
    """A parameter target does not feed the chosen mechanism or OB variant"""


class NonMonotoneMapError(DomainError):
    """The TTF map is not strictly monotone over the bracket"""


class FitError(WearsimError, ValueError):
    """Weibull maximum-likelihood fit failed"""


class InsufficientDataError(FitError):
    """Fewer samples than the fit needs"""


class DegenerateDataError(FitError):
    """All samples are equal, the shape parameter is unbounded"""


class ConvergenceError(FitError):
    """Iteration budget exhausted before the tolerance was met"""


class ScenarioValidationError(WearsimError, ValueError):
    """Scenario rejected; carries every error diagnostic"""

    def __init__(self, diagnostics: List["object"]):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"invalid scenario: {lines}")


class UsageError(WearsimError):
    """Command-line flags missing or malformed"""


class InputDataError(WearsimError):
    """Input file unreadable or malformed"""

    def __init__(self, message: str, details: Optional[List[str]] = None):
        super().__init__(message)
        self.details = list(details or [])
