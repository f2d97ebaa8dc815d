import numpy as np
import pytest


def random_density(rng, dim=4, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_blocks(rng, scale=1.0):
    """Hermitian A, B with [[A, B], [B, A]] positive semidefinite.

    Averages a random PSD 6x6 matrix with its block-swapped copy, which
    keeps positivity and forces equal diagonal blocks.
    """
    g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    c = g @ g.conj().T
    A = (c[:3, :3] + c[3:, 3:]) / 2
    B = (c[:3, 3:] + c[3:, :3]) / 2
    return scale * A, scale * B


def random_bloch(rng, max_norm=1.0):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * max_norm * rng.uniform() ** (1 / 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)
