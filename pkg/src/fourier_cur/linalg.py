"""Dense complex matrix helpers: SVD, pseudoinverse, norms and volume.

Matrices are plain ``numpy`` arrays (complex128); the SVD itself is LAPACK's.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InvalidArgumentError, NumericFailureError

__all__ = [
    "SvdResult", "as_cmatrix", "svd", "singular_values", "pinv", "sigma_min",
    "norm", "volume", "maxvol_bruteforce", "MAXVOL_BUDGET",
]

MAXVOL_BUDGET = 10**6


def as_cmatrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise InvalidArgumentError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidArgumentError("matrix has non-finite entries")
    return A


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``A = U @ diag(S) @ V.conj().T`` with ``S`` descending."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


def svd(A) -> SvdResult:
    A = as_cmatrix(A)
    try:
        U, S, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericFailureError(f"SVD did not converge: {exc}") from exc
    return SvdResult(U, S, Vh.conj().T)


def singular_values(A) -> np.ndarray:
    A = as_cmatrix(A)
    if A.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericFailureError(f"SVD did not converge: {exc}") from exc


def pinv(A, rtol=None) -> np.ndarray:
    """Moore-Penrose pseudoinverse via the truncated SVD.

    Singular values ``<= rtol * sigma_1`` are treated as zero.  The default
    ``rtol`` is ``max(A.shape) * eps``.
    """
    A = as_cmatrix(A)
    m, n = A.shape
    if rtol is None:
        rtol = max(m, n) * np.finfo(float).eps
    if rtol < 0:
        raise InvalidArgumentError("rtol must be nonnegative")
    if A.size == 0:
        return np.zeros((n, m), dtype=np.complex128)
    res = svd(A)
    S = res.S
    if S[0] == 0.0:
        return np.zeros((n, m), dtype=np.complex128)
    keep = S > rtol * S[0]
    inv = np.zeros_like(S)
    inv[keep] = 1.0 / S[keep]
    return (res.V * inv) @ res.U.conj().T


def sigma_min(A) -> float:
    """Smallest of the ``min(rows, cols)`` singular values."""
    A = as_cmatrix(A)
    if A.size == 0:
        raise InvalidArgumentError("sigma_min of an empty matrix")
    return float(singular_values(A)[-1])


def norm(A, kind: str = "fro") -> float:
    A = as_cmatrix(A)
    if kind == "max":
        return float(np.abs(A).max()) if A.size else 0.0
    if kind == "fro":
        return float(np.sqrt(np.sum(A.real**2 + A.imag**2)))
    if kind == "spectral":
        return float(singular_values(A)[0]) if A.size else 0.0
    raise InvalidArgumentError(f"unknown norm kind {kind!r}")


def volume(A) -> float:
    """Product of the singular values."""
    return float(np.prod(singular_values(A)))


def maxvol_bruteforce(A, S1: int, S2: int, budget: int = MAXVOL_BUDGET):
    """Exhaustive search for the ``S1 x S2`` submatrix of maximal volume.

    Ties are broken towards the lexicographically smallest (rows, cols) pair.
    Only meant for tiny matrices; raises ``CapacityError`` when the number of
    candidate pairs exceeds ``budget``.
    """
    A = as_cmatrix(A)
    m, n = A.shape
    if not (1 <= S1 <= m and 1 <= S2 <= n):
        raise InvalidArgumentError(f"need 1 <= S1 <= {m} and 1 <= S2 <= {n}")
    count = math.comb(m, S1) * math.comb(n, S2)
    if count > budget:
        raise CapacityError(f"{count} candidate submatrices exceed the budget of {budget}")
    best, best_vol = None, -1.0
    # combinations() yields in lexicographic order, so strict > keeps the first maximiser
    col_sets = list(itertools.combinations(range(n), S2))
    for rows in itertools.combinations(range(m), S1):
        sub_rows = A[list(rows), :]
        for cols in col_sets:
            vol = volume(sub_rows[:, list(cols)])
            if vol > best_vol:
                best, best_vol = (list(rows), list(cols)), vol
    return best
