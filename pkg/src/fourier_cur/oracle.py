"""Lazily evaluated Fourier coefficients of a bivariate function.

The oracle samples ``f`` once on the tensor grid of two quadrature rules and
then produces coefficients

    alpha[k1, k2] = (2*pi)**-2 * sum_ij w1_i w2_j f(x1_i, x2_j) exp(-1j*(k1*x1_i + k2*x2_j))

on demand.  Every coefficient is computed at most once and the number of
distinct coefficients ever computed is the cost measure reported by the
adaptive algorithms.

Block requests use a two-stage separable summation: a column block at
frequency k2 first contracts the grid along x2 (``M1*M2`` work per k2) and
then along x1 for each row frequency (``M1`` work per entry).
"""
from __future__ import annotations

import threading

import numpy as np

from .errors import InvalidArgumentError, NumericDomainError
from .kernels import trig_contract
from .quadrature import Quad1D

__all__ = ["CoeffOracle", "new_oracle", "as_index_set"]

_NORM = 1.0 / (2.0 * np.pi) ** 2


def as_index_set(T, bound: int, name: str = "index set") -> np.ndarray:
    """Validate a strictly increasing set of integer frequencies in [-bound, bound]."""
    arr = np.asarray(T)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise InvalidArgumentError(f"{name} must contain integers")
    arr = arr.astype(np.int64)
    if arr.size and np.any(np.diff(arr) <= 0):
        raise InvalidArgumentError(f"{name} must be strictly increasing")
    if arr.size and (arr[0] < -bound or arr[-1] > bound):
        raise InvalidArgumentError(f"{name} has entries outside [-{bound}, {bound}]")
    return arr


class CoeffOracle:
    """Cached Fourier coefficients of ``f`` truncated to ``|k1| <= I1, |k2| <= I2``.

    Parameters
    ----------
    f : callable
        Real bivariate function, vectorised over broadcast arrays.
    I1, I2 : int
        Truncation orders.
    r1, r2 : Quad1D
        Quadrature rules along x1 and x2.
    compensated : bool, optional
        Use compensated (Kahan) summation in the contractions.
    backend : str, optional
        Kernel backend override (``"compiled"`` or ``"python"``).

    Notes
    -----
    Inserts into the cache are serialised by a lock, so concurrent callers
    may race to compute the same coefficient but it is stored and counted
    once.
    """

    def __init__(self, f, I1: int, I2: int, r1: Quad1D, r2: Quad1D,
                 compensated: bool = False, backend=None):
        for name, val in (("I1", I1), ("I2", I2)):
            if isinstance(val, bool) or int(val) != val or val < 0:
                raise InvalidArgumentError(f"{name} must be a nonnegative integer, got {val!r}")
        self.f = f
        self.I1, self.I2 = int(I1), int(I2)
        self.r1, self.r2 = r1, r2
        self.compensated = compensated
        self.backend = backend

        x1, x2 = r1.nodes, r2.nodes
        grid = np.asarray(f(x1[:, None], x2[None, :]))
        if np.iscomplexobj(grid):
            if np.any(grid.imag != 0):
                raise InvalidArgumentError("f must be real-valued")
            grid = grid.real
        grid = np.ascontiguousarray(np.broadcast_to(grid, (x1.size, x2.size)), dtype=np.float64)
        bad = ~np.isfinite(grid)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            node = (float(x1[i]), float(x2[j]))
            raise NumericDomainError(f"f is not finite at node (x1, x2) = {node}", node=node)
        grid.setflags(write=False)
        self.fgrid = grid

        self._cache: dict[tuple[int, int], complex] = {}
        self._lock = threading.Lock()
        # partial sums: contraction of fgrid along x2 (keyed by k2) or x1 (keyed by k1)
        self._col_partial: dict[int, np.ndarray] = {}
        self._row_partial: dict[int, np.ndarray] = {}

    # -- bookkeeping ------------------------------------------------------

    @property
    def n_integrals(self) -> int:
        return len(self._cache)

    def integral_count(self) -> int:
        """Number of distinct coefficients computed so far."""
        return len(self._cache)

    @property
    def shape(self):
        return (2 * self.I1 + 1, 2 * self.I2 + 1)

    def _contract(self, X, rule, freqs):
        return trig_contract(X, rule.weights, rule.nodes, freqs, -1,
                             self.compensated, self.backend)

    def _store(self, keys, values):
        with self._lock:
            cache = self._cache
            for key, val in zip(keys, values):
                if key not in cache:
                    cache[key] = complex(val)

    # -- stage one ----------------------------------------------------------

    def _column_partials(self, k2s):
        missing = [k for k in k2s if k not in self._col_partial]
        if missing:
            # H[i, s] = sum_j w2_j f(x1_i, x2_j) exp(-1j k2_s x2_j)
            H = self._contract(self.fgrid, self.r2, np.asarray(missing, dtype=float))
            for s, k in enumerate(missing):
                self._col_partial.setdefault(k, np.ascontiguousarray(H[:, s]))
        return np.stack([self._col_partial[k] for k in k2s])

    def _row_partials(self, k1s):
        missing = [k for k in k1s if k not in self._row_partial]
        if missing:
            H = self._contract(np.ascontiguousarray(self.fgrid.T), self.r1,
                               np.asarray(missing, dtype=float))
            for s, k in enumerate(missing):
                self._row_partial.setdefault(k, np.ascontiguousarray(H[:, s]))
        return np.stack([self._row_partial[k] for k in k1s])

    # -- fill routines ------------------------------------------------------

    def _fill_columns(self, k1s, k2s):
        """Ensure all (k1, k2) for k1 in k1s, k2 in k2s are cached (column path)."""
        cache = self._cache
        todo = [k2 for k2 in k2s if any((k1, k2) not in cache for k1 in k1s)]
        if not todo:
            return
        P = self._column_partials(todo)                      # (len(todo), M1)
        vals = self._contract(P, self.r1, np.asarray(k1s, dtype=float)) * _NORM
        keys, out = [], []
        for s, k2 in enumerate(todo):
            for r, k1 in enumerate(k1s):
                if (k1, k2) not in cache:
                    keys.append((k1, k2))
                    out.append(vals[s, r])
        self._store(keys, out)

    def _fill_rows(self, k1s, k2s):
        cache = self._cache
        todo = [k1 for k1 in k1s if any((k1, k2) not in cache for k2 in k2s)]
        if not todo:
            return
        P = self._row_partials(todo)                         # (len(todo), M2)
        vals = self._contract(P, self.r2, np.asarray(k2s, dtype=float)) * _NORM
        keys, out = [], []
        for s, k1 in enumerate(todo):
            for r, k2 in enumerate(k2s):
                if (k1, k2) not in cache:
                    keys.append((k1, k2))
                    out.append(vals[s, r])
        self._store(keys, out)

    def _gather(self, k1s, k2s):
        cache = self._cache
        out = np.empty((len(k1s), len(k2s)), dtype=np.complex128)
        for a, k1 in enumerate(k1s):
            for b, k2 in enumerate(k2s):
                out[a, b] = cache[(k1, k2)]
        return out

    # -- public API -----------------------------------------------------------

    def coeff(self, k1: int, k2: int) -> complex:
        """Fourier coefficient alpha_{k1,k2}."""
        if isinstance(k1, tuple):
            k1, k2 = k1
        k1, k2 = int(k1), int(k2)
        if abs(k1) > self.I1 or abs(k2) > self.I2:
            raise InvalidArgumentError(
                f"frequency ({k1}, {k2}) outside [-{self.I1}, {self.I1}] x [-{self.I2}, {self.I2}]"
            )
        key = (k1, k2)
        if key not in self._cache:
            self._fill_columns([k1], [k2])
        return self._cache[key]

    def column_block(self, T2) -> np.ndarray:
        """Columns ``T2`` of the coefficient matrix, shape ``(2*I1+1, len(T2))``."""
        T2 = as_index_set(T2, self.I2, "T2")
        k1s = list(range(-self.I1, self.I1 + 1))
        k2s = T2.tolist()
        self._fill_columns(k1s, k2s)
        return self._gather(k1s, k2s)

    def row_block(self, T1) -> np.ndarray:
        """Rows ``T1`` of the coefficient matrix, shape ``(len(T1), 2*I2+1)``."""
        T1 = as_index_set(T1, self.I1, "T1")
        k1s = T1.tolist()
        k2s = list(range(-self.I2, self.I2 + 1))
        self._fill_rows(k1s, k2s)
        return self._gather(k1s, k2s)

    def core_block(self, T1, T2) -> np.ndarray:
        """Intersection ``A[T1 + I1, T2 + I2]``, shape ``(len(T1), len(T2))``."""
        T1 = as_index_set(T1, self.I1, "T1")
        T2 = as_index_set(T2, self.I2, "T2")
        k1s, k2s = T1.tolist(), T2.tolist()
        # contract along whichever axis needs fewer stage-one passes
        if len(k2s) <= len(k1s):
            self._fill_columns(k1s, k2s)
        else:
            self._fill_rows(k1s, k2s)
        return self._gather(k1s, k2s)

    def full_matrix(self) -> np.ndarray:
        """The whole ``(2*I1+1) x (2*I2+1)`` coefficient matrix."""
        return self.column_block(np.arange(-self.I2, self.I2 + 1))


def new_oracle(f, I1, I2, r1, r2, **kwargs) -> CoeffOracle:
    return CoeffOracle(f, I1, I2, r1, r2, **kwargs)
