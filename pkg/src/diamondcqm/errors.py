"""Typed errors raised by the numerical layers.

Every failure mode that a caller can sensibly branch on gets its own class;
all inherit from CQMError so the CLI can surface any numerical failure with
exit code 1.
"""


class CQMError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(CQMError):
    """Evaluation requested exactly at a pole of a special function."""


class SpectrumPoleError(PoleError):
    """Green's function evaluated on a discrete eigenvalue."""


class OverflowGuardError(CQMError):
    """Result magnitude would exceed the floating-point range."""


class BranchCutError(CQMError):
    """Argument lies on a branch cut and no side was selected."""


class CausticError(CQMError):
    """Real-time kernel evaluated at a zero of sin(omega*T)."""


class HorizonError(CQMError):
    """Time reparametrization hit a zero of f(t) = u + v*t + w*t**2."""


class SingularOriginError(CQMError):
    """Generator evaluated at Q = 0 where the inverse-square term diverges."""


class UnsupportedCoefficientsError(CQMError):
    """No closed-form inverse time map for these generator coefficients."""


class StepDegeneracyError(CQMError):
    """Finite-difference step underflowed relative to the evaluation point."""


class BelowMinimumError(CQMError):
    """Energy below the minimum of the confining effective potential."""


class BlowUpError(CQMError):
    """Trajectory exceeded the overflow bound before reaching tau_max."""

    def __init__(self, message, tau_reached=None):
        super().__init__(message)
        self.tau_reached = tau_reached


class StepFailureError(CQMError):
    """ODE integrator failed to advance (e.g. near a fixed point)."""


class InsufficientGrowthError(CQMError):
    """Twin-trajectory separation never grew enough for a rate estimate.

    Carries the (near-zero) slope that was measured anyway in ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class QuadratureError(CQMError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class InsufficientLevelsError(CQMError):
    """Too few resolved eigenvalues around the requested energy window."""


class ConvergenceError(CQMError):
    """Eigensolver residual exceeded tolerance."""


class DomainError(CQMError):
    """Requested evaluation outside the classically/analytically allowed domain."""
