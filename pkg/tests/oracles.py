"""Brute-force reference evaluations, independent of the library's quadrature.

These deliberately reimplement the integrands with plain numpy grids so the
adaptive code paths are checked against something that cannot share their
bugs.
"""

import math

import numpy as np

from spinflop.bath import BathParams, MagnonBranch, THERMAL_EXPONENT_CUTOFF, critical_field


def thermal_weight_trapezoid(
    params: BathParams, branch: MagnonBranch, n: int = 2_000_001
) -> float:
    """Uniform-grid trapezoid evaluation of the thermal magnon weight."""
    bc = critical_field(params)
    cx = params.gap_scale * math.sqrt(2.0 / params.coordination_m)
    temp = params.temperature_t
    top = bc + THERMAL_EXPONENT_CUTOFF * temp
    x_max = math.sqrt(top * top - bc * bc) / cx

    x = np.linspace(0.0, x_max, n)
    omega = np.sqrt(bc * bc + (cx * x) ** 2) + branch.sign * params.field_b
    z = omega / temp
    em = np.expm1(-z)
    integrand = 0.5 * x * x * np.exp(-z) / (em * em)
    return float(np.trapezoid(integrand, x))


def phase_simpson(theta0: float, b: float, tau0: float, n: int = 400_000) -> float:
    """Composite-Simpson evaluation of the closed-form phase integral."""
    if n % 2:
        n += 1
    tau = 2.0 * math.pi / b
    t = np.linspace(0.0, tau, n + 1)
    s2 = math.sin(theta0) ** 2
    c = math.cos(theta0)
    u = np.zeros_like(t) if math.isinf(tau0) else t / tau0
    g = np.exp(-2.0 * u * u)
    radius = np.sqrt(c * c + g * s2)
    if abs(c) < 1e-14:
        rate = np.full_like(t, 0.5 * b)
    elif c > 0:
        d = c + radius
        rate = b * s2 * g / (s2 * g + d * d)
    else:
        q = g * s2 / ((radius - c) * (radius - c))
        rate = b / (1.0 + q)
    h = tau / n
    return float(h / 3.0 * (rate[0] + rate[-1] + 4.0 * rate[1:-1:2].sum() + 2.0 * rate[2:-1:2].sum()))
