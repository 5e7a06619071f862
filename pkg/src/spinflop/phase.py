"""Geometric phase of the dephasing qubit over one precession cycle.

Two independent routes are provided. `gp_closed_form` integrates the known
closed-form rate over the quasiperiod tau = 2*pi/B. `gp_trajectory_oracle`
evaluates the general gauge-invariant mixed-state expression on a sampled
trajectory of density matrices: per eigenbranch it accumulates a discrete
parallel-transport (Pancharatnam) product of normalized overlaps, weights the
branches by sqrt(eps_k(0) * eps_k(tau)) times the raw endpoint overlap, and
takes the argument of the branch sum. The two must agree; the oracle knows
nothing about the closed form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bath import BathParams, critical_field, clamp_to_critical, decoherence_time
from .errors import (
    BeyondCriticalFieldError,
    BranchDegeneracyError,
    UndefinedPhaseError,
    ValidationError,
    ZeroFieldError,
)
from .qubit import DensityMatrix2, InitialState, reduced_density_matrix
from .quadrature import integrate_adaptive

TWO_PI = 2.0 * math.pi

#: Angles within this of 0, pi/2 or pi are treated as exactly protected.
_ANGLE_SNAP = 1e-14

#: Overlap-magnitude gap below which eigenbranch matching is ambiguous.
_BRANCH_MATCH_TOL = 1e-8

#: Default trajectory sampling, with the convergence check at half count.
DEFAULT_ORACLE_STEPS = 4096

#: Default absolute quadrature tolerance for the closed-form integral (rad).
DEFAULT_PHASE_TOL = 1e-9


def _reduce_phase(value: float) -> float:
    out = math.fmod(value, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    if out == TWO_PI:
        out = 0.0
    return out


def circular_difference(a: float, b: float) -> float:
    """Distance between two phases on the circle, in [0, pi]."""
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class GpResult:
    """A geometric phase in [0, 2*pi) with its diagnostics."""

    phase: float
    tau: float
    tau0: float
    quadrature_error: float
    method: str

    def __post_init__(self):
        if not (0.0 <= self.phase < TWO_PI):
            raise ValidationError("phase must lie in [0, 2*pi)")
        if self.quadrature_error < 0.0:
            raise ValidationError("quadrature_error must be nonnegative")


@dataclass(frozen=True)
class Trajectory:
    """A sampled path of qubit states on [0, tau].

    `sampler` must return a valid DensityMatrix2 at every queried time.
    `dense_until` hints where the state moves fastest so the oracle can
    cluster its samples; None means uniform sampling.
    """

    sampler: Callable[[float], DensityMatrix2]
    tau: float
    n_steps: int = DEFAULT_ORACLE_STEPS
    dense_until: float | None = None
    tau0: float = field(default=math.nan)

    def __post_init__(self):
        if not self.tau > 0:
            raise ValidationError("trajectory horizon tau must be positive")
        if self.n_steps < 16:
            raise ValidationError("n_steps must be at least 16")


def precession_trajectory(
    init: InitialState, b: float, tau0: float, n_steps: int = DEFAULT_ORACLE_STEPS
) -> Trajectory:
    """Trajectory of the dephasing qubit over one cycle tau = 2*pi/b."""
    if b <= 0:
        raise ZeroFieldError(b)
    if not tau0 > 0:
        raise ValidationError("tau0 must be positive or infinite")
    tau = TWO_PI / b
    dense = min(10.0 * tau0, tau) if math.isfinite(tau0) else None
    return Trajectory(
        sampler=lambda t: reduced_density_matrix(init, b, tau0, t),
        tau=tau,
        n_steps=n_steps,
        dense_until=dense,
        tau0=tau0,
    )


def gp_isolated(init: InitialState) -> GpResult:
    """Geometric phase of the uncoupled qubit: the solid angle pi*(1-cos theta0)."""
    phase = _reduce_phase(math.pi * (1.0 - math.cos(init.theta0)))
    return GpResult(
        phase=phase,
        tau=math.nan,
        tau0=math.inf,
        quadrature_error=0.0,
        method="isolated_analytic",
    )


def _phase_rate(t: float, b: float, s2: float, c: float, inv_tau0: float) -> float:
    """Closed-form phase accumulation rate at time t; bounded by b.

    Written so the two exponentially small quantities (the coherence
    envelope and, for c < 0, the gap of the larger eigenvalue above the
    excited population) never cancel.
    """
    u = t * inv_tau0
    g = math.exp(-2.0 * u * u)
    radius = math.sqrt(c * c + g * s2)
    if c > 0.0:
        d = c + radius
        return b * s2 * g / (s2 * g + d * d)
    q = g * s2 / ((radius - c) * (radius - c))
    return b / (1.0 + q)


def gp_closed_form(
    init: InitialState,
    b: float,
    tau0: float,
    *,
    tol: float = DEFAULT_PHASE_TOL,
    max_panels: int = 4000,
) -> GpResult:
    """Geometric phase over one cycle from the closed-form integral.

    The integrand varies on the decoherence timescale, so the initial
    partition subdivides [0, min(3*tau0, tau)] and continues doubling
    outward; adaptive refinement does the rest. theta0 = 0 and pi carry no
    coherence and return phase 0 (the pi case is 2*pi reduced mod 2*pi).
    """
    if b <= 0:
        raise ZeroFieldError(b)
    if not tau0 > 0:
        raise ValidationError("tau0 must be positive or infinite")
    tau = TWO_PI / b

    s = math.sin(init.theta0)
    c = math.cos(init.theta0)
    if abs(s) < _ANGLE_SNAP:
        return GpResult(0.0, tau, tau0, 0.0, "closed_form")
    if abs(c) < _ANGLE_SNAP:
        # protected angle: the rate is exactly b/2 and the cycle gives pi
        return GpResult(math.pi, tau, tau0, 0.0, "closed_form")

    s2 = s * s
    inv_tau0 = 0.0 if math.isinf(tau0) else 1.0 / tau0

    seeds = []
    if inv_tau0 > 0.0:
        edge = 1.5 * tau0
        while edge < tau:
            seeds.append(edge)
            edge *= 2.0

    result = integrate_adaptive(
        lambda t: _phase_rate(t, b, s2, c, inv_tau0),
        0.0,
        tau,
        atol=tol,
        seeds=seeds,
        max_panels=max_panels,
    )
    phase = _reduce_phase(result.value)
    error = max(result.error, 1e-15 * (1.0 + abs(result.value)))
    return GpResult(phase, tau, tau0, error, "closed_form")


def _oracle_mesh(tau: float, dense_until: float | None, n_steps: int) -> np.ndarray:
    """Sample times: three quarters of the budget inside the dense window."""
    if dense_until is None or dense_until >= tau:
        return np.linspace(0.0, tau, n_steps + 1)
    n_head = (3 * n_steps) // 4
    n_tail = n_steps - n_head
    head = np.linspace(0.0, dense_until, n_head + 1)
    tail = np.linspace(dense_until, tau, n_tail + 1)
    return np.concatenate([head, tail[1:]])


def _pancharatnam_phase(traj: Trajectory, n_steps: int) -> float:
    times = _oracle_mesh(traj.tau, traj.dense_until, n_steps)
    mats = np.stack([traj.sampler(float(t)).as_array() for t in times])
    evals, evecs = np.linalg.eigh(mats)
    evals = np.clip(evals, 0.0, None)

    # branch a starts on the larger eigenvalue, branch b on the smaller
    vec_a = evecs[0][:, 1].copy()
    vec_b = evecs[0][:, 0].copy()
    start_a = vec_a.copy()
    start_b = vec_b.copy()
    eps_a0 = float(evals[0][1])
    eps_b0 = float(evals[0][0])
    transport_a = 1.0 + 0j
    transport_b = 1.0 + 0j

    eps_a = eps_a0
    eps_b = eps_b0
    for i in range(1, len(times)):
        w0 = evecs[i][:, 0]
        w1 = evecs[i][:, 1]
        ov0 = np.vdot(vec_a, w0)
        ov1 = np.vdot(vec_a, w1)
        if abs(abs(ov0) - abs(ov1)) < _BRANCH_MATCH_TOL:
            raise BranchDegeneracyError(i)
        if abs(ov1) >= abs(ov0):
            next_a, next_b = w1, w0
            eps_a, eps_b = float(evals[i][1]), float(evals[i][0])
            ov_a, ov_b = ov1, np.vdot(vec_b, w0)
        else:
            next_a, next_b = w0, w1
            eps_a, eps_b = float(evals[i][0]), float(evals[i][1])
            ov_a, ov_b = ov0, np.vdot(vec_b, w1)
        transport_a *= ov_a / abs(ov_a)
        transport_b *= ov_b / abs(ov_b)
        vec_a = next_a
        vec_b = next_b

    total = math.sqrt(eps_a0 * eps_a) * np.vdot(start_a, vec_a) * transport_a.conjugate()
    total += math.sqrt(eps_b0 * eps_b) * np.vdot(start_b, vec_b) * transport_b.conjugate()
    if abs(total) < 1e-300:
        raise UndefinedPhaseError("interference sum vanished; phase undefined")
    return _reduce_phase(cmath.phase(total))


def gp_trajectory_oracle(traj: Trajectory) -> GpResult:
    """Gauge-invariant geometric phase from a sampled state trajectory.

    The reported quadrature_error is the circle distance to the half-count
    evaluation; the discrete transport converges at second order, so doubling
    n_steps moves the result by less than that estimate.
    """
    fine = _pancharatnam_phase(traj, traj.n_steps)
    coarse = _pancharatnam_phase(traj, traj.n_steps // 2)
    error = max(circular_difference(fine, coarse), 1e-12)
    return GpResult(fine, traj.tau, traj.tau0, error, "trajectory_oracle")


def gp_for_params(
    params: BathParams,
    init: InitialState,
    *,
    clamp_field: bool = False,
    tol: float = DEFAULT_PHASE_TOL,
    eta_rtol: float = 1e-10,
) -> GpResult:
    """Geometric phase for a full parameter set: decoherence time, then phase.

    With clamp_field the field is pulled just below the critical field
    instead of raising. The reported error adds the phase uncertainty
    inherited from the thermal-weight tolerance to the quadrature estimate.
    """
    if params.field_b <= 0:
        raise ZeroFieldError(params.field_b)
    if clamp_field:
        params = clamp_to_critical(params)
    bc = critical_field(params)
    if params.field_b >= bc:
        raise BeyondCriticalFieldError(params.field_b, bc)

    tau0 = decoherence_time(params, eta_rtol=eta_rtol)
    result = gp_closed_form(init, params.field_b, tau0, tol=tol)
    error = result.quadrature_error
    if math.isfinite(tau0):
        # d(phase)/d(ln tau0) is bounded by the phase itself
        error += abs(result.phase) * eta_rtol
    return GpResult(result.phase, result.tau, tau0, error, "closed_form")
