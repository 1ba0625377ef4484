import numpy as np
import pytest

from oscquench import QuenchSpec, mode_thermo, normal_modes, thermal_rho_coupled


@pytest.fixture
def quench_36():
    return QuenchSpec(3.0, 6.0, 3.0, 6.0)


@pytest.fixture
def rho_36(quench_36):
    m1, m2 = normal_modes(quench_36)
    return thermal_rho_coupled(mode_thermo(m1, 1.0), mode_thermo(m2, 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_valid_quench(rng) -> QuenchSpec:
    """Random spec whose both modes quench upward (always-valid beta domain)."""
    k0_i = rng.uniform(0.2, 4.0)
    j_i = rng.uniform(-0.4 * k0_i, 4.0)
    k0_f = k0_i * rng.uniform(1.0, 4.0)
    # raise J so that omega2 also moves up
    j_min = (k0_i + 2 * j_i - k0_f) / 2
    j_f = max(j_min, -0.4 * k0_f) + rng.uniform(0.01, 3.0)
    return QuenchSpec(k0_i, k0_f, j_i, j_f)
