import math

import pytest

from risrelay import LinkBudget, LinkGeometry, RisProfile, figure_spec, run_sweep

THETA_I = math.radians(45.0)
THETA_R = math.radians(60.0)


@pytest.fixture(scope="session")
def budget28():
    return LinkBudget(carrier_frequency_hz=28e9, reference_snr_db=114.0)


@pytest.fixture(scope="session")
def ris075():
    return RisProfile(half_length=0.75)


@pytest.fixture()
def geo():
    def make(d0, theta_i=THETA_I, theta_r=THETA_R):
        return LinkGeometry.equidistant(d0, theta_i, theta_r)

    return make


@pytest.fixture(scope="session")
def fig3_result():
    return run_sweep(figure_spec("fig3"))


@pytest.fixture(scope="session")
def fig4_indoor_result():
    return run_sweep(figure_spec("fig4-indoor"))


@pytest.fixture(scope="session")
def fig4_outdoor_result():
    return run_sweep(figure_spec("fig4-outdoor"))


@pytest.fixture(scope="session")
def fig5_outdoor_result():
    return run_sweep(figure_spec("fig5-outdoor"))
