"""Geometric phase of a central spin qubit in an antiferromagnetic magnon bath.

Units throughout: g*mu_B = k_B = hbar = 1, so fields, temperatures and
energies are in Tesla and times in inverse Tesla.
"""

__version__ = "0.1.0"

from .bath import (
    BathParams,
    MagnonBranch,
    TemperatureValidityWarning,
    clamp_to_critical,
    critical_field,
    decoherence_time,
    magnon_frequency,
    thermal_weight,
    thermal_weight_result,
)
from .errors import (
    BeyondCriticalFieldError,
    BranchDegeneracyError,
    DomainError,
    FitError,
    NumericalError,
    QuadratureConvergenceError,
    SpinflopError,
    UndefinedPhaseError,
    ValidationError,
    ZeroFieldError,
)
from .qubit import DensityMatrix2, EigenSystem2, InitialState, eigensystem, reduced_density_matrix
from .phase import (
    GpResult,
    Trajectory,
    circular_difference,
    gp_closed_form,
    gp_for_params,
    gp_isolated,
    gp_trajectory_oracle,
    precession_trajectory,
)
from .analysis import (
    AxisSpec,
    PowerLawFit,
    SweepSpec,
    SweepTable,
    figure_data,
    fit_power_law,
    fit_scaling,
    run_sweep,
    scaling_curve,
)

__all__ = [
    "__version__",
    "BathParams",
    "MagnonBranch",
    "TemperatureValidityWarning",
    "clamp_to_critical",
    "critical_field",
    "decoherence_time",
    "magnon_frequency",
    "thermal_weight",
    "thermal_weight_result",
    "DensityMatrix2",
    "EigenSystem2",
    "InitialState",
    "eigensystem",
    "reduced_density_matrix",
    "GpResult",
    "Trajectory",
    "circular_difference",
    "gp_closed_form",
    "gp_for_params",
    "gp_isolated",
    "gp_trajectory_oracle",
    "precession_trajectory",
    "AxisSpec",
    "PowerLawFit",
    "SweepSpec",
    "SweepTable",
    "figure_data",
    "fit_power_law",
    "fit_scaling",
    "run_sweep",
    "scaling_curve",
    "SpinflopError",
    "ValidationError",
    "DomainError",
    "BeyondCriticalFieldError",
    "ZeroFieldError",
    "NumericalError",
    "QuadratureConvergenceError",
    "BranchDegeneracyError",
    "UndefinedPhaseError",
    "FitError",
]
