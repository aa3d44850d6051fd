import numpy as np
import pytest

from fracwave import EquationParams, make_grid


@pytest.fixture
def unit_params():
    return EquationParams(kappa=1.0, lam=1.0, mu=1.0, nu=1.0, alpha=0.5)


@pytest.fixture
def grid_pi_64():
    return make_grid(np.pi, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
