import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_spd(n: int, rng: np.random.Generator,
               lo: float = 0.3, hi: float = 3.0) -> np.ndarray:
    Q = random_orthogonal(n, rng)
    w = rng.uniform(lo, hi, size=n)
    A = (Q * w) @ Q.T
    return 0.5 * (A + A.T)
