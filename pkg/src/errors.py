"""
Exception hierarchy for mixcurve.

Two families:
- UsageError: the input was wrong (bad text, wrong dimension, not a root).
  The CLI exits with code 1.
- InconclusiveResult: the input was fine but the numerics could not certify
  an answer (root on a circle, non-admissible form, quadrature did not settle).
  The CLI exits with code 2 and reports the diagnostics.
"""

from typing import Any, Dict, Optional


class MixcurveError(Exception):
    """Base class for all mixcurve errors."""

    exit_code = 1

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": type(self).__name__,
            "message": self.message,
            "diagnostics": self.diagnostics,
        }


# ============ USAGE ERRORS (exit 1) ============

class UsageError(MixcurveError, ValueError):
    exit_code = 1


class MixParseError(UsageError):
    """Syntax error in mixed-polynomial text, with the offending position."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}", {"position": position})
        self.position = position
        self.text = text

    def pointer(self) -> str:
        """Two-line rendering of the text with a caret under the error."""
        return f"{self.text}\n{' ' * self.position}^"


class DimensionMismatch(UsageError):
    pass


class ZeroPolynomialError(UsageError):
    pass


class NotHomogeneous(UsageError):
    pass


class NotARoot(UsageError):
    pass


class ConfigurationError(UsageError):
    pass


# ============ INCONCLUSIVE RESULTS (exit 2) ============

class InconclusiveResult(MixcurveError, ArithmeticError):
    exit_code = 2


class CertificationFailure(InconclusiveResult):
    """A winding computation could not be certified (probable root on the circle)."""


class NonIsolated(InconclusiveResult):
    """Shrinking circles never agreed; the root is probably not isolated."""


class AdmissibilityViolation(InconclusiveResult):
    """A factor u + γū with |γ| = 1 makes β or ρ undefined."""


class RootFinderError(InconclusiveResult):
    """Simultaneous iteration did not converge."""


class BoundaryRoot(InconclusiveResult):
    """A root lies on the boundary of the search box."""


class NewtonDivergence(InconclusiveResult):
    """Newton seeds from a cell group found no root inside the search box."""


class TransversalityFailure(InconclusiveResult):
    """Gradient frame is (nearly) degenerate; use the sphere degree instead."""


class SphereHitsZero(InconclusiveResult):
    """The map vanishes (or nearly) on the 3-sphere; shrink ε."""


class NoConvergence(InconclusiveResult):
    """Quadrature refinement hit the depth cap without settling on an integer."""
