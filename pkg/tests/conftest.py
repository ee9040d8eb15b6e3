import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from modules.linalg_core import save_matrix

settings.register_profile(
    "accretive",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("accretive")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240611))


@pytest.fixture
def matrix_file(tmp_path):
    """Write a matrix to a JSON file and return its path."""
    counter = {"n": 0}

    def write(A):
        counter["n"] += 1
        path = tmp_path / f"matrix_{counter['n']}.json"
        save_matrix(A, str(path))
        return str(path)

    return write
