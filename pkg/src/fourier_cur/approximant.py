"""Evaluation of truncated Fourier series and their CUR approximants."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, NumericDomainError
from .kernels import trig_contract

__all__ = [
    "EvalGrid", "ErrorReport", "linspace_grid", "eval_truncated", "eval_cur",
    "l2_gap", "error_grid",
]


@dataclass(frozen=True, eq=False)
class EvalGrid:
    """Cartesian product ``x1s x x2s``; values are stored as ``[i1, i2]`` arrays."""

    x1s: np.ndarray
    x2s: np.ndarray

    def __post_init__(self):
        for xs in (self.x1s, self.x2s):
            if xs.ndim != 1:
                raise InvalidArgumentError("grid coordinates must be 1-D")
            if np.any(np.abs(xs) > np.pi * (1 + 1e-15)):
                raise InvalidArgumentError("grid points must lie in [-pi, pi]")

    @classmethod
    def from_points(cls, x1s, x2s) -> "EvalGrid":
        return cls(np.asarray(x1s, dtype=float), np.asarray(x2s, dtype=float))

    @property
    def shape(self):
        return (self.x1s.size, self.x2s.size)

    def mesh(self):
        return np.meshgrid(self.x1s, self.x2s, indexing="ij")


def linspace_grid(n: int) -> EvalGrid:
    """``n`` equally spaced points from -pi to pi inclusive in each direction."""
    if n < 2:
        raise InvalidArgumentError("grid_n must be at least 2")
    xs = np.linspace(-np.pi, np.pi, n)
    return EvalGrid(xs, xs.copy())


def _freqs(I):
    return np.arange(-I, I + 1, dtype=float)


def _ones(n):
    return np.ones(n)


def eval_truncated(A, I1: int, I2: int, points: EvalGrid, backend=None) -> np.ndarray:
    """Evaluate ``sum_{k1,k2} A[k1+I1, k2+I2] exp(1j*(k1*x1 + k2*x2))`` on a grid."""
    A = np.asarray(A, dtype=np.complex128)
    if A.shape != (2 * I1 + 1, 2 * I2 + 1):
        raise InvalidArgumentError(
            f"coefficient matrix shape {A.shape} does not match orders ({I1}, {I2})"
        )
    k1, k2 = _freqs(I1), _freqs(I2)
    # Y[k1, q] = sum_k2 A[k1, k2] e^{i k2 x2_q}
    Y = trig_contract(A, _ones(k2.size), k2, points.x2s, +1, backend=backend)
    # V[q, p] = sum_k1 Y[k1, q] e^{i k1 x1_p}
    V = trig_contract(np.ascontiguousarray(Y.T), _ones(k1.size), k1, points.x1s, +1,
                      backend=backend)
    return V.T


def eval_cur(m, points: EvalGrid, backend=None) -> np.ndarray:
    """Evaluate ``(v1^T C) U (R v2)`` without forming ``C @ U @ R``."""
    if m.C.shape != (2 * m.I1 + 1, m.U.shape[0]) or m.R.shape != (m.U.shape[1], 2 * m.I2 + 1):
        raise InvalidArgumentError("CUR factors have inconsistent shapes")
    k1, k2 = _freqs(m.I1), _freqs(m.I2)
    P1 = trig_contract(np.ascontiguousarray(m.C.T), _ones(k1.size), k1, points.x1s, +1,
                       backend=backend)                                  # S2 x n1
    P2 = trig_contract(m.R, _ones(k2.size), k2, points.x2s, +1, backend=backend)  # S1 x n2
    return P1.T @ (m.U @ P2)


def l2_gap(A, m) -> float:
    """L2 distance between the truncated series and the CUR approximant.

    With the normalised inner product ``(2*pi)**-2 * integral`` the
    exponentials are orthonormal, so this is ``||A - C U R||_F``.
    """
    A = np.asarray(A, dtype=np.complex128)
    if A.shape != (m.C.shape[0], m.R.shape[1]):
        raise InvalidArgumentError(f"shape mismatch: A is {A.shape}")
    D = A - m.matrix()
    return float(np.sqrt(np.sum(D.real**2 + D.imag**2)))


@dataclass
class ErrorReport:
    grid: EvalGrid
    f_vals: np.ndarray
    g_vals: np.ndarray
    err: np.ndarray
    max_err: float
    max_imag_residue: float
    g_imag: np.ndarray = None
    l2_gap: float = None
    timings: dict = field(default_factory=dict)
    n_integrals: int = None

    def rows(self):
        """Yield ``(x1, x2, f, approx_real, approx_imag, err)`` row by row."""
        X1, X2 = self.grid.mesh()
        imag = self.g_imag if self.g_imag is not None else np.zeros_like(self.g_vals)
        cols = [a.ravel() for a in (X1, X2, self.f_vals, self.g_vals, imag, self.err)]
        return zip(*(c.tolist() for c in cols))


def error_grid(f, g_eval, grid_n: int = 60) -> ErrorReport:
    """Compare ``f`` with an approximant on a ``grid_n x grid_n`` linspace grid.

    ``g_eval`` takes an :class:`EvalGrid` and returns (possibly complex)
    values of shape ``grid.shape``; only the real part is compared.
    """
    grid = linspace_grid(grid_n)
    X1, X2 = grid.mesh()
    t0 = time.perf_counter()
    fv = np.broadcast_to(np.asarray(f(X1, X2), dtype=float), grid.shape).copy()
    t1 = time.perf_counter()
    gv = np.asarray(g_eval(grid))
    t2 = time.perf_counter()
    if gv.shape != grid.shape:
        raise InvalidArgumentError(f"approximant returned shape {gv.shape}, expected {grid.shape}")
    for name, vals in (("f", fv), ("approximant", gv)):
        bad = ~np.isfinite(vals)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            node = (float(grid.x1s[i]), float(grid.x2s[j]))
            raise NumericDomainError(f"{name} is not finite at {node}", node=node)
    g_real = np.real(gv).astype(float)
    g_imag = np.imag(gv).astype(float) if np.iscomplexobj(gv) else np.zeros_like(g_real)
    err = np.abs(fv - g_real)
    return ErrorReport(
        grid=grid, f_vals=fv, g_vals=g_real, err=err, max_err=float(err.max()),
        max_imag_residue=float(np.abs(g_imag).max()), g_imag=g_imag,
        timings={"f": t1 - t0, "approximant": t2 - t1},
    )
