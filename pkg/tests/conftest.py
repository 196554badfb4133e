import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def projector(vec) -> np.ndarray:
    """Rank-one projector onto a (not necessarily normalized) vector."""
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())
