"""
Shared pytest fixtures: seeded generators, random valid states, noise presets
"""
import numpy as np
import pytest

from components.noise import NoiseParams
from components.qstate import XState


def random_xstate(rng: np.random.Generator) -> XState:
    """A valid X state with populations away from zero and random coherence phases"""
    p11, p22, p33, p44 = rng.dirichlet([2.0, 2.0, 2.0, 2.0])
    c14 = rng.uniform(0.0, 0.95) * np.sqrt(p11 * p44) * np.exp(1j * rng.uniform(0.0, 2 * np.pi))
    c23 = rng.uniform(0.0, 0.95) * np.sqrt(p22 * p33) * np.exp(1j * rng.uniform(0.0, 2 * np.pi))
    # renormalise so rounding in the Dirichlet draw cannot trip the trace check
    total = p11 + p22 + p33 + p44
    return XState(p11 / total, p22 / total, p33 / total, p44 / total, complex(c14 / total), complex(c23 / total))


@pytest.fixture
def rng():
    return np.random.default_rng(20110101)


@pytest.fixture
def make_xstate(rng):
    return lambda: random_xstate(rng)


@pytest.fixture
def experimental_noise():
    """Omega = 1e11 rad/s, Sigma = 0.02 Omega, sf = 2e6 1/s, T = 0.04 K"""
    return NoiseParams(omega=1e11, sigma=0.02e11, sf=2e6, temperature=0.04)
