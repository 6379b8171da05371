import numpy as np
import pytest

from gaussent.config import get_settings
from gaussent.phasespace import service as phasespace


def random_symplectic(rng: np.random.Generator, n: int, layers: int = 2, max_squeezing: float = 0.5):
    """Random optical network: local rotations and squeezers between beam splitter rows."""
    stages = []
    for _ in range(layers):
        stages.append(phasespace.local_transform(*(
            phasespace.compose(
                phasespace.make_phase_rotation(rng.uniform(0, 2 * np.pi)),
                phasespace.make_squeezer(rng.uniform(-max_squeezing, max_squeezing)),
                phasespace.make_phase_rotation(rng.uniform(0, 2 * np.pi)),
            )
            for _ in range(n)
        )))
        for i in range(1, n):
            stages.append(phasespace.make_beam_splitter(rng.uniform(0, 2 * np.pi), i, i + 1, n))
    return phasespace.compose(*stages)


def random_state(rng: np.random.Generator, n: int, pure: bool = False, **kwargs):
    nu = np.ones(n) if pure else rng.uniform(1.0, 3.0, n)
    diagonal = phasespace.covariance(np.diag(np.repeat(nu, 2)))
    return phasespace.apply_symplectic(diagonal, random_symplectic(rng, n, **kwargs))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    monkeypatch.delenv("GAUSSENT_SEED", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def make_state(rng):
    def factory(n: int, pure: bool = False, **kwargs):
        return random_state(rng, n, pure, **kwargs)
    return factory


@pytest.fixture
def make_symplectic(rng):
    def factory(n: int, **kwargs):
        return random_symplectic(rng, n, **kwargs)
    return factory
