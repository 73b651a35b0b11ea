import numpy as np
import pytest

from fourier_cur import kernels


def random_trig_coeffs(rng, I1, I2, hermitian=True):
    """Random coefficient matrix; Hermitian-symmetric ones belong to real functions."""
    B = rng.standard_normal((2 * I1 + 1, 2 * I2 + 1)) + 1j * rng.standard_normal((2 * I1 + 1, 2 * I2 + 1))
    if hermitian:
        B = 0.5 * (B + np.conj(B[::-1, ::-1]))
    return B


def trig_function(A, I1, I2):
    """Vectorised real function whose Fourier coefficients are ``A``."""
    k1 = np.arange(-I1, I1 + 1)
    k2 = np.arange(-I2, I2 + 1)

    def f(x1, x2):
        x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
        E1 = np.exp(1j * x1[..., None] * k1)           # (..., 2I1+1)
        E2 = np.exp(1j * x2[..., None] * k2)
        return np.real(np.einsum("...a,ab,...b->...", E1, A, E2))

    return f


def naive_series(A, I1, I2, x1s, x2s):
    """Direct double sum of the series at every grid point."""
    out = np.zeros((len(x1s), len(x2s)), dtype=complex)
    for p, a in enumerate(x1s):
        for q, b in enumerate(x2s):
            s = 0j
            for i, k1 in enumerate(range(-I1, I1 + 1)):
                for j, k2 in enumerate(range(-I2, I2 + 1)):
                    s += A[i, j] * np.exp(1j * (k1 * a + k2 * b))
            out[p, q] = s
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


BACKENDS = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
