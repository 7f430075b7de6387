import numpy as np
import pytest

from vandiejen import Coupling, sample


@pytest.fixture
def g():
    return Coupling(0.7, 0.4)


@pytest.fixture
def g_hat(g):
    return g.hat()


def point(n, seed):
    return sample(n, seed=seed)


def det_cofactor(m):
    """Brute-force determinant by first-row cofactor expansion (test oracle)."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] == 1:
        return m[0, 0]
    total = 0.0 + 0.0j
    for j in range(m.shape[1]):
        sub = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += (-1) ** j * m[0, j] * det_cofactor(sub)
    return total
