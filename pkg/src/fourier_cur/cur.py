"""CUR models of the Fourier coefficient matrix.

Fixed index sets give the cross approximation ``C @ pinv(G) @ R``, the
two-sided interpolative decomposition, or the best coupling matrix for
given ``C`` and ``R``.  The adaptive drivers grow symmetric frequency bands
``{-kb..-(k-1)b-1} U {(k-1)b+1..kb}`` until a relative smallest-singular-value
test falls below ``tau``:

* ``algorithm1`` grows the column and row factors and tests both;
* ``algorithm2`` grows only the intersection core and tests it;
* ``algorithm_c1`` grows a block-diagonal core (off-diagonal borders are
  never sampled).

In all three the loop runs while ``tol > tau`` and ``k <= K``.  The test is
applied from ``k = 1`` on, and a zero running norm counts as ``tol = inf``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .errors import CapacityError, InvalidArgumentError
from .linalg import pinv, sigma_min
from .oracle import CoeffOracle, as_index_set

__all__ = [
    "RunStats", "CurModel", "OrderEstimate", "estimate_orders", "index_band",
    "cur_fixed", "cur_from_matrix", "algorithm1", "algorithm2", "algorithm_c1", "ALGORITHMS",
    "STOP_REASONS", "unique_integral_count", "block_diagonal_formula_count", "DESK_BUDGET",
]

STOP_REASONS = ("tolerance", "max_iterations", "index_bounds")

# largest coefficient matrix (entries) that routines materialising A will build
DESK_BUDGET = 10**6


@dataclass
class RunStats:
    iterations: int = 0
    tol_trace: list = field(default_factory=list)
    n_integrals: int = 0
    elapsed: float = 0.0
    stop_reason: str = "tolerance"
    algorithm: str = ""
    # coefficients sampled before the final C and R were assembled
    n_integrals_selection: int = 0
    # (sigma_min(C)/sqrt(nF_C), sigma_min(R)/sqrt(nF_R)) per iteration, algorithm1 only
    ratio_trace: list = field(default_factory=list)


@dataclass
class CurModel:
    """``A ~ C @ U @ R`` with ``C = A[:, T2+I2]``, ``R = A[T1+I1, :]``."""

    I1: int
    I2: int
    T1: np.ndarray
    T2: np.ndarray
    C: np.ndarray
    R: np.ndarray
    G: np.ndarray
    U: np.ndarray
    stats: RunStats = field(default_factory=RunStats)

    @property
    def S1(self) -> int:
        return int(self.T1.size)

    @property
    def S2(self) -> int:
        return int(self.T2.size)

    def matrix(self) -> np.ndarray:
        """Materialised approximation ``C @ U @ R``."""
        return self.C @ (self.U @ self.R)


@dataclass(frozen=True)
class OrderEstimate:
    I1: int
    I2: int
    alpha: float
    eps: float
    C_const: float
    seminorm: float


def estimate_orders(alpha, eps, C_const=1.0, seminorm=1.0) -> OrderEstimate:
    """Truncation orders ``I = ceil((C_const*seminorm/eps)**(1/alpha))``.

    >>> estimate_orders(2, 1e-7).I1
    3163
    """
    if isinstance(alpha, bool) or int(alpha) != alpha or alpha < 1:
        raise InvalidArgumentError(f"alpha must be an integer >= 1, got {alpha!r}")
    if not 0 < eps < 1:
        raise InvalidArgumentError(f"eps must lie in (0, 1), got {eps!r}")
    if not C_const > 0:
        raise InvalidArgumentError("C_const must be positive")
    if not seminorm > 0:
        raise InvalidArgumentError("seminorm must be positive")
    value = (C_const * seminorm / eps) ** (1.0 / alpha)
    nearest = round(value)
    # (1e4)**0.5 may land a few ulps above 100; do not round that up to 101
    order = nearest if abs(value - nearest) <= 1e-9 * max(1.0, value) else math.ceil(value)
    order = max(int(order), 1)
    return OrderEstimate(order, order, alpha, eps, C_const, seminorm)


def index_band(k: int, b: int) -> np.ndarray:
    """The 2b integers ``-kb..-(k-1)b-1`` and ``(k-1)b+1..kb``, ascending."""
    if k < 1 or b < 1:
        raise InvalidArgumentError("index_band needs k >= 1 and b >= 1")
    hi = np.arange((k - 1) * b + 1, k * b + 1)
    return np.concatenate([-hi[::-1], hi])


def _clipped_band(k, b, bound):
    band = index_band(k, b)
    return band[np.abs(band) <= bound]


def unique_integral_count(I1, I2, S1, S2) -> int:
    """Distinct coefficients needed by C and R: (2I1+1)S2 + (2I2+1)S1 - S1S2."""
    return (2 * I1 + 1) * S2 + (2 * I2 + 1) * S1 - S1 * S2


def block_diagonal_formula_count(I1, I2, S1, S2, K, b1, b2) -> int:
    """Published closed-form integral count for the block-diagonal variant."""
    return (2 * I1 + 1) * S2 + (2 * I2 + 1) * S1 - 2 * S1 * S2 + K * b1 * b2


def _check_params(b1, b2, tau, K):
    for name, v in (("b1", b1), ("b2", b2), ("K", K)):
        if isinstance(v, bool) or int(v) != v or v < 1:
            raise InvalidArgumentError(f"{name} must be a positive integer, got {v!r}")
    if not 0 < tau < 1:
        raise InvalidArgumentError(f"tau must lie in (0, 1), got {tau!r}")


def _ratio(smin, nf):
    return math.inf if nf == 0.0 else smin / math.sqrt(nf)


def _fro2(M):
    return float(np.sum(M.real**2 + M.imag**2))


def _finish(o, T1, T2, C, R, G, stats, start_count, t0):
    """Sort index sets ascending, permuting the factors to match."""
    p1, p2 = np.argsort(T1, kind="stable"), np.argsort(T2, kind="stable")
    T1, T2 = np.asarray(T1)[p1], np.asarray(T2)[p2]
    C, R, G = C[:, p2], R[p1, :], G[np.ix_(p1, p2)]
    U = pinv(G)
    stats.n_integrals = o.n_integrals - start_count
    stats.elapsed = time.perf_counter() - t0
    return CurModel(o.I1, o.I2, T1, T2, C, R, G, U, stats)


def cur_fixed(o: CoeffOracle, T1, T2, mode: str = "cross", budget: int = DESK_BUDGET) -> CurModel:
    """CUR model for given index sets.

    ``mode`` is ``"cross"`` (``U = pinv(G)``), ``"two_sided_id"``
    (``U = pinv(C[I1,:]) @ G @ pinv(R[:,I2])``) or ``"best"``
    (``U = pinv(C) @ A @ pinv(R)``, which needs the full matrix).
    """
    if mode not in ("cross", "two_sided_id", "best"):
        raise InvalidArgumentError(f"unknown CUR mode {mode!r}")
    T1 = as_index_set(T1, o.I1, "T1")
    T2 = as_index_set(T2, o.I2, "T2")
    if mode == "best" and o.shape[0] * o.shape[1] > budget:
        raise CapacityError(
            f"best-U CUR needs the full {o.shape[0]}x{o.shape[1]} matrix, above budget {budget}"
        )
    t0 = time.perf_counter()
    start = o.n_integrals
    C = o.column_block(T2)
    R = o.row_block(T1)
    G = o.core_block(T1, T2)
    if mode == "cross":
        U = pinv(G)
    elif mode == "two_sided_id":
        U = pinv(C[T1 + o.I1, :]) @ G @ pinv(R[:, T2 + o.I2])
    else:
        U = pinv(C) @ o.full_matrix() @ pinv(R)
    stats = RunStats(algorithm=f"fixed-{mode}", stop_reason="tolerance")
    stats.n_integrals = stats.n_integrals_selection = o.n_integrals - start
    stats.elapsed = time.perf_counter() - t0
    return CurModel(o.I1, o.I2, T1, T2, C, R, G, U, stats)


def cur_from_matrix(A, rows, cols, I1=None, I2=None) -> CurModel:
    """Cross approximation of an explicit matrix from 0-based row/column indices."""
    A = np.asarray(A, dtype=np.complex128)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    I1 = (A.shape[0] - 1) // 2 if I1 is None else I1
    I2 = (A.shape[1] - 1) // 2 if I2 is None else I2
    C, R = A[:, cols], A[rows, :]
    G = A[np.ix_(rows, cols)]
    stats = RunStats(algorithm="matrix-cross")
    return CurModel(I1, I2, rows - I1, cols - I2, C, R, G, pinv(G), stats)


def algorithm1(o: CoeffOracle, b1: int, b2: int, tau: float, K: int) -> CurModel:
    """Grow the column and row factors band by band.

    After each iteration ``tol = min(smin(C)/sqrt(nF_C), smin(R)/sqrt(nF_R))``
    where ``nF`` are the running squared Frobenius norms.
    """
    _check_params(b1, b2, tau, K)
    t0 = time.perf_counter()
    start = o.n_integrals
    stats = RunStats(algorithm="alg1")
    T1, T2 = [0], [0]
    C = o.column_block([0])
    R = o.row_block([0])
    nf_c, nf_r = _fro2(C), _fro2(R)
    k = 1
    while True:
        if k > K:
            stats.stop_reason = "max_iterations"
            break
        band1 = _clipped_band(k, b1, o.I1)
        band2 = _clipped_band(k, b2, o.I2)
        if band1.size == 0 and band2.size == 0:
            stats.stop_reason = "index_bounds"
            break
        Ck = o.column_block(band2)
        Rk = o.row_block(band1)
        nf_c += _fro2(Ck)
        nf_r += _fro2(Rk)
        C = np.hstack([C, Ck])
        R = np.vstack([R, Rk])
        T1.extend(band1.tolist())
        T2.extend(band2.tolist())
        rc = _ratio(sigma_min(C), nf_c)
        rr = _ratio(sigma_min(R), nf_r)
        tol = min(rc, rr)
        stats.ratio_trace.append((rc, rr))
        stats.tol_trace.append(tol)
        stats.iterations = k
        k += 1
        if tol <= tau:
            stats.stop_reason = "tolerance"
            break
    stats.n_integrals_selection = o.n_integrals - start
    G = C[np.asarray(T1) + o.I1, :]
    return _finish(o, T1, T2, C, R, G, stats, start, t0)


def _grow_core(o, b1, b2, tau, K, bordered, name):
    _check_params(b1, b2, tau, K)
    t0 = time.perf_counter()
    start = o.n_integrals
    stats = RunStats(algorithm=name)
    T1, T2 = [0], [0]
    G = o.core_block([0], [0])
    nf = _fro2(G)
    k = 1
    while True:
        if k > K:
            stats.stop_reason = "max_iterations"
            break
        band1 = _clipped_band(k, b1, o.I1)
        band2 = _clipped_band(k, b2, o.I2)
        if band1.size == 0 and band2.size == 0:
            stats.stop_reason = "index_bounds"
            break
        G3 = o.core_block(band1, band2)
        if bordered:
            # bands are disjoint from, and more extreme than, everything in T
            G1 = o.core_block(np.sort(T1), band2)[np.argsort(np.argsort(T1))]
            G2 = o.core_block(band1, np.sort(T2))[:, np.argsort(np.argsort(T2))]
            nf += _fro2(G1) + _fro2(G2) + _fro2(G3)
            G = np.block([[G, G1], [G2, G3]])
        else:
            nf += _fro2(G3)
            G = block_diag(G, G3).astype(np.complex128)
        T1.extend(band1.tolist())
        T2.extend(band2.tolist())
        tol = _ratio(sigma_min(G), nf)
        stats.tol_trace.append(tol)
        stats.iterations = k
        k += 1
        if tol <= tau:
            stats.stop_reason = "tolerance"
            break
    stats.n_integrals_selection = o.n_integrals - start
    s1, s2 = np.sort(T1), np.sort(T2)
    # C and R in the growth order so that _finish applies one permutation
    C = o.column_block(s2)[:, np.argsort(np.argsort(T2))]
    R = o.row_block(s1)[np.argsort(np.argsort(T1)), :]
    return _finish(o, T1, T2, C, R, G, stats, start, t0)


def algorithm2(o: CoeffOracle, b1: int, b2: int, tau: float, K: int) -> CurModel:
    """Grow the core ``G`` by bordering; ``tol = smin(G)/sqrt(nF_G)``.

    ``C`` and ``R`` are sampled once the index sets are final.
    """
    return _grow_core(o, b1, b2, tau, K, bordered=True, name="alg2")


def algorithm_c1(o: CoeffOracle, b1: int, b2: int, tau: float, K: int) -> CurModel:
    """Like :func:`algorithm2` but the borders are set to zero, so ``G`` is
    block diagonal with one ``2b1 x 2b2`` block per iteration."""
    return _grow_core(o, b1, b2, tau, K, bordered=False, name="algc1")


ALGORITHMS = {"alg1": algorithm1, "alg2": algorithm2, "algc1": algorithm_c1}
