"""Exception hierarchy. The CLI maps each family to a distinct exit code."""


class SpinflopError(Exception):
    """Base class for all library errors."""


class ValidationError(SpinflopError):
    """Invalid input: bad parameter values, malformed config, bad sweep spec."""


class DomainError(SpinflopError):
    """Physically out-of-domain request on otherwise valid parameters."""


class BeyondCriticalFieldError(DomainError):
    """Field at or beyond the spin-flop transition; spin-wave results invalid."""

    def __init__(self, field_b: float, critical: float):
        self.field_b = field_b
        self.critical = critical
        super().__init__(
            f"beyond spin-flop critical field: B = {field_b:g} T >= B_c = {critical:g} T"
        )


class ZeroFieldError(DomainError):
    """Cyclic evolution undefined without a field."""

    def __init__(self, field_b: float):
        self.field_b = field_b
        super().__init__(f"quasiperiod undefined at zero field (B = {field_b:g} T)")


class NumericalError(SpinflopError):
    """Numerical procedure failed to meet its contract."""


class QuadratureConvergenceError(NumericalError):
    """Refinement budget exhausted before reaching tolerance.

    Carries the best value and the achieved error estimate.
    """

    def __init__(self, value: float, error_estimate: float, panels: int):
        self.value = value
        self.error_estimate = error_estimate
        self.panels = panels
        super().__init__(
            f"quadrature did not converge within {panels} panels "
            f"(value {value:.12g}, error estimate {error_estimate:.3e})"
        )


class BranchDegeneracyError(NumericalError):
    """Eigenbranch matching ambiguous at a trajectory step."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"eigenbranch matching ambiguous at time step {step}")


class UndefinedPhaseError(NumericalError):
    """Total interference sum vanished; the phase is undefined."""


class FitError(NumericalError):
    """Power-law fit is ill-posed on the supplied points."""
