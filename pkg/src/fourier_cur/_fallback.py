"""Numpy implementation of the trigonometric contraction kernel.

Used when the compiled extension is unavailable or disabled through the
``FOURIER_CUR_PURE_PYTHON`` environment variable.
"""
import numpy as np


def _phase_table(w, nodes, freqs, sign):
    return w[None, :] * np.exp(sign * 1j * np.outer(freqs, nodes))


def trig_contract(X, w, nodes, freqs, sign=-1, compensated=False, num_threads=0):
    """out[r, s] = sum_j X[r, j] * w[j] * exp(sign * 1j * freqs[s] * nodes[j])."""
    X = np.asarray(X)
    w = np.asarray(w, dtype=np.float64)
    nodes = np.asarray(nodes, dtype=np.float64)
    freqs = np.asarray(freqs, dtype=np.float64)
    E = _phase_table(w, nodes, freqs, sign)
    if not compensated:
        return np.asarray(X @ E.T, dtype=np.complex128)
    # Kahan summation over j, vectorised across (r, s)
    R, S = X.shape[0], freqs.shape[0]
    total = np.zeros((R, S), dtype=np.complex128)
    carry = np.zeros((R, S), dtype=np.complex128)
    for j in range(nodes.shape[0]):
        term = X[:, j, None] * E[None, :, j]
        y = term - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total
