import math

import pytest

from spinflop import BathParams, InitialState, figure_data

REFERENCE_MJ = 40.0
REFERENCE_M = 6
REFERENCE_J = REFERENCE_MJ / REFERENCE_M
COUPLED_J0 = 2.5 * REFERENCE_J

# isolated-qubit phase at theta0 = 1.3, used all over the reference figures
ISOLATED_13 = math.pi * (1.0 - math.cos(1.3))


def make_bath(
    *,
    field_b=0.5,
    temperature_t=0.8,
    coupling_j0=COUPLED_J0,
    anisotropy_ba=0.10,
    spin_s=0.5,
) -> BathParams:
    return BathParams.from_mj(
        mj=REFERENCE_MJ,
        anisotropy_ba=anisotropy_ba,
        field_b=field_b,
        temperature_t=temperature_t,
        coupling_j0=coupling_j0,
        coordination_m=REFERENCE_M,
        spin_s=spin_s,
    )


@pytest.fixture(scope="session")
def dashed_params() -> BathParams:
    """Coupled reference curve: J0 = 2.5 J, T = 0.8 T, B_A = 0.10 T."""
    return make_bath()


@pytest.fixture(scope="session")
def theta_13() -> InitialState:
    return InitialState(theta0=1.3)


@pytest.fixture(scope="session")
def fig3_table():
    return figure_data("fig3")


@pytest.fixture(scope="session")
def fig4_table():
    return figure_data("fig4")


@pytest.fixture(scope="session")
def fig3_table_halved():
    """Same grid as fig3_table with both quadrature tolerances halved."""
    return figure_data("fig3", tol=0.5e-9, eta_rtol=0.5e-10)
