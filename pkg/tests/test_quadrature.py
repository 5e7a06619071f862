import math

import pytest

from spinflop.errors import QuadratureConvergenceError
from spinflop.quadrature import integrate_adaptive


def test_polynomial_is_exact():
    result = integrate_adaptive(lambda x: x**3, 0.0, 1.0, atol=1e-12)
    assert result.value == pytest.approx(0.25, abs=1e-15)
    assert result.error <= 1e-12


def test_sine_to_tight_tolerance():
    result = integrate_adaptive(math.sin, 0.0, math.pi, atol=1e-12)
    assert abs(result.value - 2.0) <= result.error + 1e-13


def test_relative_tolerance_mode():
    result = integrate_adaptive(lambda x: math.exp(-x), 0.0, 50.0, rtol=1e-10)
    exact = 1.0 - math.exp(-50.0)
    assert result.value == pytest.approx(exact, rel=1e-9)


def test_seed_isolates_narrow_spike():
    center, width = 5e-4, 1e-5

    def spike(x):
        return math.exp(-(((x - center) / width) ** 2))

    result = integrate_adaptive(spike, 0.0, 2.0, rtol=1e-9, seeds=[center])
    assert result.value == pytest.approx(math.sqrt(math.pi) * width, rel=1e-7)


def test_budget_exhaustion_carries_estimate():
    with pytest.raises(QuadratureConvergenceError) as excinfo:
        integrate_adaptive(
            lambda x: math.sin(1000.0 * x), 0.0, 10.0, atol=1e-14, max_panels=3
        )
    err = excinfo.value
    assert err.error_estimate > 0
    assert math.isfinite(err.value)
    assert err.panels == 3


def test_empty_interval_and_bad_bounds():
    assert integrate_adaptive(math.sin, 1.0, 1.0, atol=1e-12).value == 0.0
    with pytest.raises(ValueError):
        integrate_adaptive(math.sin, 1.0, 0.0, atol=1e-12)
