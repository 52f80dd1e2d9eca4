import numpy as np
import pytest


@pytest.fixture(scope="session")
def hm():
    from nibm.painleve import default_hastings_mcleod

    return default_hastings_mcleod()


@pytest.fixture(scope="session")
def pd16():
    from nibm.phase import phase_data

    return phase_data(16.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240815)
