"""Reduced qubit state under pure dephasing, and its spectral decomposition.

Basis ordering is (|e>, |g>): index 0 is the excited state. The initial pure
state is sin(theta0/2)|e> + cos(theta0/2)|g> with theta0 the Bloch polar
angle measured from |g>.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

_HERMITICITY_TOL = 1e-12
_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class InitialState:
    """Initial pure qubit state, parametrized by its Bloch polar angle."""

    theta0: float

    def __post_init__(self):
        if not (0.0 <= self.theta0 <= math.pi):
            raise ValidationError("theta0 must lie in [0, pi]")


@dataclass(frozen=True)
class DensityMatrix2:
    """2x2 qubit density matrix in the (|e>, |g>) basis."""

    ee: complex
    eg: complex
    ge: complex
    gg: complex

    def __post_init__(self):
        if abs(self.ge - self.eg.conjugate()) > _HERMITICITY_TOL:
            raise ValidationError("density matrix not Hermitian")
        if abs(self.ee.imag) > _HERMITICITY_TOL or abs(self.gg.imag) > _HERMITICITY_TOL:
            raise ValidationError("diagonal entries must be real")
        trace = self.ee.real + self.gg.real
        if abs(trace - 1.0) > _HERMITICITY_TOL:
            raise ValidationError(f"trace must be 1, got {trace!r}")
        # smallest eigenvalue of a Hermitian unit-trace 2x2 matrix
        radius = math.sqrt((self.ee.real - self.gg.real) ** 2 + 4.0 * abs(self.eg) ** 2)
        if 0.5 * (trace - radius) < -_HERMITICITY_TOL:
            raise ValidationError("density matrix not positive semidefinite")

    def as_array(self) -> np.ndarray:
        return np.array([[self.ee, self.eg], [self.ge, self.gg]], dtype=complex)

    def purity(self) -> float:
        return float(
            self.ee.real**2 + self.gg.real**2 + 2.0 * abs(self.eg) ** 2
        )


@dataclass(frozen=True)
class EigenSystem2:
    """Eigenvalues and orthonormal eigenvectors of a qubit density matrix.

    Vectors are stored as (e component, g component) pairs. Gauge: the |g>
    component is real and nonnegative; when it vanishes the |e> component is
    real and nonnegative instead.
    """

    eps_plus: float
    eps_minus: float
    v_plus: tuple[complex, complex]
    v_minus: tuple[complex, complex]


def _coherence_decay(tau0: float, t: float) -> float:
    """exp(-(t/tau0)^2); exactly 1 for an uncoupled qubit (tau0 = inf)."""
    if math.isinf(tau0):
        return 1.0
    u = t / tau0
    return math.exp(-u * u)


def reduced_density_matrix(
    init: InitialState, b: float, tau0: float, t: float
) -> DensityMatrix2:
    """Qubit state at time t: static populations, precessing decaying coherence.

    The off-diagonal element rotates at the Larmor rate b and decays under
    the Gaussian envelope exp(-(t/tau0)^2).
    """
    if t < 0:
        raise ValidationError("time must be nonnegative")
    if not tau0 > 0:
        raise ValidationError("tau0 must be positive or infinite")
    half = 0.5 * init.theta0
    ee = math.sin(half) ** 2
    gg = math.cos(half) ** 2
    eg = 0.5 * math.sin(init.theta0) * _coherence_decay(tau0, t) * cmath.exp(-1j * b * t)
    return DensityMatrix2(ee=ee, eg=eg, ge=eg.conjugate(), gg=gg)


def _split_terms(c: float, s2: float, g: float) -> tuple[float, float, float]:
    """Return (R, c+R, c-R) without cancellation.

    R = sqrt(c^2 + g*s^2); the sums are rewritten through g*s^2/(R -+ c)
    on the side where direct evaluation would cancel.
    """
    radius = math.sqrt(c * c + g * s2)
    if c >= 0.0:
        d_plus = c + radius
        d_minus = -(g * s2) / (radius + c) if radius + c > 0.0 else 0.0
    else:
        d_plus = (g * s2) / (radius - c)
        d_minus = c - radius
    return radius, d_plus, d_minus


def eigensystem(init: InitialState, b: float, tau0: float, t: float) -> EigenSystem2:
    """Spectral decomposition of the reduced state at time t.

    At exact degeneracy (sin(theta0) = 0, or fully dephased equal weights)
    the canonical basis is returned, ordered by the diagonal entries.
    """
    if t < 0:
        raise ValidationError("time must be nonnegative")
    if not tau0 > 0:
        raise ValidationError("tau0 must be positive or infinite")
    theta0 = init.theta0
    s = math.sin(theta0)
    c = math.cos(theta0)
    decay = _coherence_decay(tau0, t)
    g = decay * decay
    s2 = s * s

    if s == 0.0:
        # populations only; order basis vectors by eigenvalue
        ee = math.sin(0.5 * theta0) ** 2
        gg = 1.0 - ee
        if ee >= gg:
            return EigenSystem2(ee, gg, (1.0 + 0j, 0j), (0j, 1.0 + 0j))
        return EigenSystem2(gg, ee, (0j, 1.0 + 0j), (1.0 + 0j, 0j))

    radius, d_plus, d_minus = _split_terms(c, s2, g)
    eps_plus = 0.5 + 0.5 * radius
    eps_minus = 0.5 - 0.5 * radius

    if radius < _DEGENERACY_TOL:
        ee = math.sin(0.5 * theta0) ** 2
        gg = 1.0 - ee
        if ee >= gg:
            return EigenSystem2(eps_plus, eps_minus, (1.0 + 0j, 0j), (0j, 1.0 + 0j))
        return EigenSystem2(eps_plus, eps_minus, (0j, 1.0 + 0j), (1.0 + 0j, 0j))

    phase = cmath.exp(-1j * b * t)
    amp_e = s * decay  # |e> amplitude magnitude shared by both eigenvectors

    norm_plus = math.hypot(amp_e, d_plus)
    if norm_plus > 0.0:
        v_plus = (amp_e * phase / norm_plus, d_plus / norm_plus + 0j)
    else:  # fully dephased, c < 0: the larger eigenvalue belongs to |e>
        v_plus = (1.0 + 0j, 0j)

    norm_minus = math.hypot(amp_e, d_minus)
    if norm_minus > 0.0:
        # flip sign so the |g> component (R - c) is nonnegative
        v_minus = (-amp_e * phase / norm_minus, -d_minus / norm_minus + 0j)
    else:  # fully dephased, c > 0: the smaller eigenvalue belongs to |e>
        v_minus = (1.0 + 0j, 0j)

    return EigenSystem2(eps_plus, eps_minus, v_plus, v_minus)
