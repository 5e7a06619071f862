import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinflop import (
    BathParams,
    BeyondCriticalFieldError,
    MagnonBranch,
    TemperatureValidityWarning,
    ValidationError,
    clamp_to_critical,
    critical_field,
    decoherence_time,
    magnon_frequency,
    thermal_weight,
    thermal_weight_result,
)
from conftest import make_bath
from oracles import thermal_weight_trapezoid

# brute-force reference values (trapezoid oracle, 4e6 points), reference bath
# at B = 0.5 T, T = 0.8 T, B_A = 0.10 T, MJ = 40 T
ETA_MINUS_PIN = 1.5456090400043543e-05
ETA_PLUS_PIN = 4.328298141187861e-06
TAU0_PIN = 1.518081430685286  # J0 = 2.5 J, default mode-sum weight
TAU0_AT_282_PIN = 0.13023990609248645

BC_010 = 2.830194339616947
BC_015 = 3.4673476895171302


class TestBathParams:
    def test_from_mj_divides_by_coordination(self):
        p = make_bath()
        assert p.exchange_j == pytest.approx(40.0 / 6.0, rel=1e-15)
        assert p.exchange_mj == pytest.approx(40.0, rel=1e-15)
        assert p.gap_scale == pytest.approx(40.0, rel=1e-15)  # 2*M*S*J with S=1/2

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(exchange_j=-1.0),
            dict(exchange_j=0.0),
            dict(anisotropy_ba=0.0),
            dict(anisotropy_ba=-0.1),
            dict(field_b=-0.5),
            dict(temperature_t=0.0),
            dict(coupling_j0=-1.0),
            dict(spin_s=0.3),
            dict(spin_s=-0.5),
            dict(coordination_m=0),
        ],
    )
    def test_invalid_parameters_rejected(self, kwargs):
        base = dict(
            exchange_j=40.0 / 6.0,
            anisotropy_ba=0.10,
            field_b=0.5,
            temperature_t=0.8,
            coupling_j0=1.0,
            coordination_m=6,
            spin_s=0.5,
        )
        base.update(kwargs)
        with pytest.raises(ValidationError):
            BathParams(**base)

    def test_temperature_validity_warning(self):
        with pytest.warns(TemperatureValidityWarning):
            make_bath(temperature_t=3.0)

    def test_no_warning_at_limit(self, recwarn):
        make_bath(temperature_t=2.5)
        assert not [w for w in recwarn if w.category is TemperatureValidityWarning]

    def test_integer_spin_accepted(self):
        make_bath(spin_s=1.0)


class TestCriticalField:
    def test_reference_anisotropy(self):
        assert critical_field(make_bath()) == pytest.approx(BC_010, abs=1e-9)

    def test_larger_anisotropy(self):
        assert critical_field(make_bath(anisotropy_ba=0.15)) == pytest.approx(
            BC_015, abs=1e-9
        )

    def test_vanishing_anisotropy_limit(self):
        assert critical_field(make_bath(anisotropy_ba=1e-12)) < 1e-4

    def test_clamp(self):
        p = make_bath(field_b=3.5)
        clamped = clamp_to_critical(p)
        assert clamped.field_b == pytest.approx(BC_010 - 1e-6, abs=1e-12)
        untouched = make_bath(field_b=0.5)
        assert clamp_to_critical(untouched) is untouched


class TestDispersion:
    def test_gap_at_zero_field(self):
        # 40 * sqrt((1 + 0.1/40)^2 - 1) by direct arithmetic
        p = make_bath(field_b=0.0)
        for branch in MagnonBranch:
            assert magnon_frequency(p, branch, 0.0) == pytest.approx(
                2.830194339616947, abs=1e-9
            )

    def test_minus_gap_closes_at_critical_field(self):
        p = make_bath(field_b=critical_field(make_bath()))
        gap = magnon_frequency(p, MagnonBranch.MINUS, 0.0)
        assert abs(gap) <= 1e-12 * p.gap_scale

    def test_vanishing_anisotropy_and_field(self):
        p = make_bath(field_b=0.0, anisotropy_ba=1e-12)
        assert magnon_frequency(p, MagnonBranch.PLUS, 0.0) < 1e-4

    def test_negative_minus_branch_rejected(self):
        p = make_bath(field_b=2.9)
        with pytest.raises(BeyondCriticalFieldError):
            magnon_frequency(p, MagnonBranch.MINUS, 0.0)
        # away from the zone centre the minus branch is positive again
        assert magnon_frequency(p, MagnonBranch.MINUS, 1.0) > 0

    def test_negative_momentum_rejected(self):
        with pytest.raises(ValidationError):
            magnon_frequency(make_bath(), MagnonBranch.PLUS, -0.1)

    def test_branch_splitting_equals_twice_field(self):
        p = make_bath(field_b=1.7)
        for x in (0.0, 0.05, 0.3, 1.0, 4.0):
            delta = magnon_frequency(p, MagnonBranch.PLUS, x) - magnon_frequency(
                p, MagnonBranch.MINUS, x
            )
            assert delta == pytest.approx(2 * 1.7, abs=1e-12)

    def test_strictly_increasing_in_momentum(self):
        p = make_bath(field_b=1.0)
        xs = np.linspace(0.0, 2.0, 40)
        for branch in MagnonBranch:
            values = [magnon_frequency(p, branch, x) for x in xs]
            assert all(b > a for a, b in zip(values, values[1:]))

    @settings(max_examples=60, deadline=None)
    @given(
        b=st.floats(0.0, 2.5),
        ba=st.floats(0.01, 0.5),
        x=st.floats(0.0, 5.0),
    )
    def test_splitting_property(self, b, ba, x):
        p = make_bath(field_b=b, anisotropy_ba=ba)
        plus = magnon_frequency(p, MagnonBranch.PLUS, x)
        minus = magnon_frequency(p, MagnonBranch.MINUS, x)
        assert plus - minus == pytest.approx(2 * b, abs=1e-10)
        assert minus >= -1e-12


class TestThermalWeight:
    def test_pinned_reference_values(self, dashed_params):
        assert thermal_weight(dashed_params, MagnonBranch.MINUS) == pytest.approx(
            ETA_MINUS_PIN, rel=1e-9
        )
        assert thermal_weight(dashed_params, MagnonBranch.PLUS) == pytest.approx(
            ETA_PLUS_PIN, rel=1e-9
        )

    def test_matches_trapezoid_oracle(self, dashed_params):
        for branch in MagnonBranch:
            brute = thermal_weight_trapezoid(dashed_params, branch)
            assert thermal_weight(dashed_params, branch) == pytest.approx(brute, rel=1e-8)

    def test_matches_trapezoid_near_critical(self):
        p = make_bath(field_b=BC_010 - 0.01)
        brute = thermal_weight_trapezoid(p, MagnonBranch.MINUS, n=4_000_001)
        assert thermal_weight(p, MagnonBranch.MINUS) == pytest.approx(brute, rel=1e-6)

    def test_minus_exceeds_plus_in_field(self):
        for b in (0.1, 0.5, 1.5, 2.5):
            p = make_bath(field_b=b)
            assert thermal_weight(p, MagnonBranch.MINUS) > thermal_weight(
                p, MagnonBranch.PLUS
            )

    def test_cold_bath_freezes_out(self):
        p = make_bath(temperature_t=0.01)
        assert thermal_weight(p, MagnonBranch.MINUS) < 1e-30

    def test_monotone_in_temperature(self):
        values = [
            thermal_weight(make_bath(temperature_t=t), MagnonBranch.MINUS)
            for t in (0.4, 0.8, 1.2, 1.6, 2.0)
        ]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_minus_monotone_in_field(self):
        values = [
            thermal_weight(make_bath(field_b=b), MagnonBranch.MINUS)
            for b in (0.2, 0.8, 1.6, 2.4, 2.8)
        ]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_beyond_critical_rejected(self):
        p = make_bath(field_b=2.9)
        for branch in MagnonBranch:
            with pytest.raises(BeyondCriticalFieldError):
                thermal_weight(p, branch)

    def test_halved_tolerance_within_prior_estimate(self):
        for b in (0.5, BC_010 - 0.01, BC_010 - 1e-4):
            p = make_bath(field_b=b)
            coarse = thermal_weight_result(p, MagnonBranch.MINUS, rtol=1e-10)
            fine = thermal_weight_result(p, MagnonBranch.MINUS, rtol=0.5e-10)
            assert abs(fine.value - coarse.value) < max(coarse.error, 1e-15 * coarse.value)


class TestDecoherenceTime:
    def test_uncoupled_is_infinite(self):
        assert decoherence_time(make_bath(coupling_j0=0.0)) == math.inf

    def test_pinned_value(self, dashed_params):
        assert decoherence_time(dashed_params) == pytest.approx(TAU0_PIN, rel=1e-9)

    def test_exact_inverse_coupling_scaling(self, dashed_params):
        single = decoherence_time(dashed_params)
        doubled = decoherence_time(make_bath(coupling_j0=2 * dashed_params.coupling_j0))
        assert doubled == single / 2  # exact: the weights do not see J0

    def test_decreases_with_temperature(self):
        times = [
            decoherence_time(make_bath(temperature_t=t)) for t in (0.4, 0.8, 1.5, 2.2)
        ]
        assert all(b < a for a, b in zip(times, times[1:]))

    def test_collapse_toward_transition(self, dashed_params):
        near = decoherence_time(make_bath(field_b=2.82))
        assert near == pytest.approx(TAU0_AT_282_PIN, rel=1e-9)
        assert decoherence_time(dashed_params) / near > 10.0

    def test_beyond_critical_rejected(self):
        with pytest.raises(BeyondCriticalFieldError):
            decoherence_time(make_bath(field_b=3.0))

    def test_near_critical_scaling_exponent(self):
        # log-log slope of tau0 against distance below the transition
        distances = np.exp(np.linspace(math.log(1e-3), math.log(1e-1), 20))
        times = [decoherence_time(make_bath(field_b=BC_010 - d)) for d in distances]
        slope, _ = np.polyfit(np.log(distances), np.log(times), 1)
        assert slope == pytest.approx(0.25, abs=0.03)
