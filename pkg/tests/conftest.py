import numpy as np
import pytest

from su11otto import EngineConfig


@pytest.fixture(scope="session")
def fig3_config() -> EngineConfig:
    """The default operating point used throughout: omega1=0.1, omega2=1,
    t_hot=2, t_cold=0.01 in units of omega2 (hbar = k_B = 1)."""
    return EngineConfig(omega1=0.1, omega2=1.0, t_hot=2.0, t_cold=0.01)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
