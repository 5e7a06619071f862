"""Antiferromagnetic magnon environment of the central spin.

Provides the two-branch magnon dispersion, the thermal magnon weights that
set the dephasing rate, the Gaussian decoherence time, and the spin-flop
critical field at which the lower branch gap closes.

Unit system: g*mu_B = k_B = hbar = 1. Fields, temperatures and all energies
are in Tesla; times are in inverse Tesla. The dimensionless momentum variable
x is the wave number times the sublattice cell edge.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

from .errors import BeyondCriticalFieldError, ValidationError
from .quadrature import QuadratureResult, integrate_adaptive

#: Spin-wave treatment is trusted only below this temperature (Tesla units).
TEMPERATURE_VALIDITY_LIMIT = 2.5

#: Margin used when clamping a field onto the valid side of the transition.
CRITICAL_FIELD_GUARD = 1e-6

#: Dimensionless normalization of the continuum mode sum entering the squared
#: dephasing rate. The thermal weights below are defined per mode with the
#: bare x^2 dx measure, so converting the lattice sum to an integral leaves a
#: fixed constant behind; only the combination weight * (eta+ + eta-) is
#: observable. (2*pi)^4 makes the qubit decohere completely as the field
#: reaches the transition, which is the regime this package targets.
MODE_SUM_WEIGHT = (2.0 * math.pi) ** 4

#: Truncation of the improper thermal integrals: the upper limit is placed
#: where the Boltzmann exponent has grown by this much over its minimum,
#: so the discarded tail is below e^-45 of the peak.
THERMAL_EXPONENT_CUTOFF = 45.0


class TemperatureValidityWarning(UserWarning):
    """Temperature above the documented spin-wave validity range."""


class MagnonBranch(Enum):
    """Selects the field-split magnon branch (and its thermal weight)."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> float:
        return 1.0 if self is MagnonBranch.PLUS else -1.0


@dataclass(frozen=True)
class BathParams:
    """Physical parameters of the qubit plus antiferromagnetic environment.

    exchange_j, anisotropy_ba, field_b, temperature_t and coupling_j0 are in
    Tesla. coordination_m is the number of nearest neighbours; spin_s is the
    sublattice spin magnitude (a positive half-integer).
    """

    exchange_j: float
    anisotropy_ba: float
    field_b: float
    temperature_t: float
    coupling_j0: float
    coordination_m: int = 6
    spin_s: float = 0.5

    def __post_init__(self):
        if not (isinstance(self.coordination_m, int) and self.coordination_m > 0):
            raise ValidationError("coordination_m must be a positive integer")
        if not (self.spin_s > 0 and float(2 * self.spin_s).is_integer()):
            raise ValidationError("spin_s must be a positive half-integer")
        if not self.exchange_j > 0:
            raise ValidationError("exchange_j must be positive (antiferromagnetic)")
        if not self.anisotropy_ba > 0:
            raise ValidationError("anisotropy_ba must be strictly positive")
        if self.field_b < 0:
            raise ValidationError("field_b must be nonnegative")
        if not self.temperature_t > 0:
            raise ValidationError("temperature_t must be strictly positive")
        if self.coupling_j0 < 0:
            raise ValidationError("coupling_j0 must be nonnegative")
        if self.temperature_t > TEMPERATURE_VALIDITY_LIMIT:
            warnings.warn(
                f"temperature {self.temperature_t:g} T exceeds the spin-wave "
                f"validity range (<= {TEMPERATURE_VALIDITY_LIMIT:g} T)",
                TemperatureValidityWarning,
                stacklevel=2,
            )

    @classmethod
    def from_mj(
        cls,
        *,
        mj: float,
        anisotropy_ba: float,
        field_b: float,
        temperature_t: float,
        coupling_j0: float,
        coordination_m: int = 6,
        spin_s: float = 0.5,
    ) -> "BathParams":
        """Build parameters from the product M*J (Tesla), the usual quoted scale."""
        if not mj > 0:
            raise ValidationError("mj must be positive")
        return cls(
            exchange_j=mj / coordination_m,
            anisotropy_ba=anisotropy_ba,
            field_b=field_b,
            temperature_t=temperature_t,
            coupling_j0=coupling_j0,
            coordination_m=coordination_m,
            spin_s=spin_s,
        )

    @property
    def exchange_mj(self) -> float:
        """The product M*J in Tesla."""
        return self.coordination_m * self.exchange_j

    @property
    def gap_scale(self) -> float:
        """2*M*S*J, the overall magnon energy scale in Tesla."""
        return 2.0 * self.coordination_m * self.spin_s * self.exchange_j

    def with_field(self, field_b: float) -> "BathParams":
        return replace(self, field_b=field_b)


def critical_field(params: BathParams) -> float:
    """Spin-flop critical field: the field closing the minus-branch gap at x=0."""
    scale = params.gap_scale
    ratio = params.anisotropy_ba / scale
    return scale * math.sqrt((1.0 + ratio) ** 2 - 1.0)


def clamp_to_critical(params: BathParams, guard: float = CRITICAL_FIELD_GUARD) -> BathParams:
    """Return params with the field pulled just below the transition if needed."""
    bc = critical_field(params)
    if params.field_b < bc - guard:
        return params
    return params.with_field(bc - guard)


def _dispersion_sqrt(params: BathParams, x: float) -> float:
    # sqrt(B_c^2 + (gap_scale)^2 * (2/M) * x^2), the branch-independent part
    bc = critical_field(params)
    cx2 = params.gap_scale**2 * (2.0 / params.coordination_m)
    return math.sqrt(bc * bc + cx2 * x * x)


def magnon_frequency(params: BathParams, branch: MagnonBranch, x: float) -> float:
    """Magnon energy (Tesla) of the given branch at dimensionless momentum x.

    Small-momentum cubic-lattice form; the minus branch softens with the
    field and its x=0 gap closes exactly at the critical field.
    """
    if x < 0:
        raise ValidationError("momentum x must be nonnegative")
    value = _dispersion_sqrt(params, x) + branch.sign * params.field_b
    if value < 0.0:
        raise BeyondCriticalFieldError(params.field_b, critical_field(params))
    return value


def _bose_squared(z: float) -> float:
    # e^-z / (1 - e^-z)^2 = n(n+1) for a mode with omega/T = z, z > 0
    if z > 700.0:
        return 0.0
    em = math.expm1(-z)  # -(1 - e^-z)
    return math.exp(-z) / (em * em)


def _weight_quadrature(
    params: BathParams, branch: MagnonBranch, rtol: float, max_panels: int
) -> QuadratureResult:
    bc = critical_field(params)
    b = params.field_b
    if b >= bc:
        raise BeyondCriticalFieldError(b, bc)
    temp = params.temperature_t
    cx = params.gap_scale * math.sqrt(2.0 / params.coordination_m)
    sign = branch.sign

    def integrand(x: float) -> float:
        omega = math.sqrt(bc * bc + (cx * x) ** 2) + sign * b
        return 0.5 * x * x * _bose_squared(omega / temp)

    # truncate where the dispersion has climbed THERMAL_EXPONENT_CUTOFF * T
    # above its minimum; the discarded tail is ~e^-45 of the peak
    top = bc + THERMAL_EXPONENT_CUTOFF * temp
    x_max = math.sqrt(top * top - bc * bc) / cx

    # isolate the small-x region where omega has only doubled from its gap;
    # near the transition the integrand spikes there
    seeds = []
    x_star_sq = (2.0 * bc - b) ** 2 - bc * bc
    if x_star_sq > 0:
        x_star = math.sqrt(x_star_sq) / cx
        while x_star < x_max:
            seeds.append(x_star)
            x_star *= 5.0

    return integrate_adaptive(
        integrand, 0.0, x_max, atol=1e-300, rtol=rtol, seeds=seeds, max_panels=max_panels
    )


def thermal_weight_result(
    params: BathParams,
    branch: MagnonBranch,
    *,
    rtol: float = 1e-10,
    max_panels: int = 4000,
) -> QuadratureResult:
    """Thermal weight with its quadrature error estimate and panel count."""
    return _weight_quadrature(params, branch, rtol, max_panels)


def thermal_weight(
    params: BathParams,
    branch: MagnonBranch,
    *,
    rtol: float = 1e-10,
    max_panels: int = 4000,
) -> float:
    """Dimensionless thermal magnon weight of one branch.

    Integral over x in [0, x_max] of (1/2) x^2 e^{-omega(x)/T} /
    (1 - e^{-omega(x)/T})^2, evaluated adaptively to relative tolerance
    `rtol`. Requires the field to be below the critical field so the
    minus-branch integrand stays finite at x = 0.
    """
    return _weight_quadrature(params, branch, rtol, max_panels).value


def decoherence_time(
    params: BathParams,
    *,
    eta_rtol: float = 1e-10,
    mode_weight: float = MODE_SUM_WEIGHT,
) -> float:
    """Gaussian decoherence time tau0 in inverse Tesla.

    Returns +inf for an uncoupled qubit (coupling_j0 = 0); that value is a
    legitimate input for all downstream phase computations.
    """
    bc = critical_field(params)
    if params.field_b >= bc:
        raise BeyondCriticalFieldError(params.field_b, bc)
    if params.coupling_j0 == 0.0:
        return math.inf
    total = thermal_weight(params, MagnonBranch.PLUS, rtol=eta_rtol) + thermal_weight(
        params, MagnonBranch.MINUS, rtol=eta_rtol
    )
    return math.sqrt(2.0) * math.pi / (params.coupling_j0 * math.sqrt(mode_weight * total))
