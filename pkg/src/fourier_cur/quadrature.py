"""One-dimensional quadrature rules on [-pi, pi] and tensor-product integration.

All three rule families are normalised so that the weights integrate the
constant function exactly: ``sum(weights) == 2*pi``.  Clenshaw-Curtis and
Gauss-Legendre rules are built on [-1, 1] and mapped affinely (nodes and
weights both scaled by pi); the Newton-Cotes family is the periodic
trapezoid rule on equispaced points.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .errors import InvalidArgumentError, NumericDomainError

__all__ = ["QuadKind", "Quad1D", "make_rule", "integrate2d", "clenshaw_curtis"]


class QuadKind(str, enum.Enum):
    CC = "CC"
    GL = "GL"
    NC = "NC"

    @classmethod
    def parse(cls, value) -> "QuadKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise InvalidArgumentError(
                f"unknown quadrature kind {value!r}; expected one of CC, GL, NC"
            ) from None


@dataclass(frozen=True, eq=False)
class Quad1D:
    """Nodes and positive weights of a rule on [-pi, pi] (read-only arrays)."""

    kind: QuadKind
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    def scaled(self, factor: float) -> "Quad1D":
        return Quad1D(self.kind, self.nodes.copy(), self.weights * factor)


def clenshaw_curtis(M: int):
    """Clenshaw-Curtis nodes (ascending) and weights on [-1, 1].

    Uses the explicit cosine-sum formula for the weights; the M = 1 rule is
    the midpoint rule.
    """
    if M == 1:
        return np.zeros(1), np.full(1, 2.0)
    n = M - 1
    # sine form keeps the node set exactly symmetric
    x = np.sin(np.pi * np.arange(-n, n + 1, 2) / (2 * n))
    theta = np.pi * np.arange(n + 1) / n
    w = np.zeros(n + 1)
    inner = theta[1:-1]
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n * n - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2 * k * inner) / (4 * k * k - 1)
        v -= np.cos(n * inner) / (n * n - 1)
    else:
        w[0] = w[n] = 1.0 / (n * n)
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * inner) / (4 * k * k - 1)
    w[1:-1] = 2.0 * v / n
    # theta runs from x=1 down to x=-1; the weights are symmetric so only
    # the node order needs care
    return x, w[::-1].copy()


def make_rule(kind, M: int) -> Quad1D:
    """Build an ``M``-point rule of the given kind on [-pi, pi].

    Parameters
    ----------
    kind : QuadKind or str
        ``"CC"``, ``"GL"`` or ``"NC"``.
    M : int
        Number of nodes, at least 1.

    Returns
    -------
    Quad1D
        Ascending nodes with strictly positive weights summing to 2*pi.
    """
    kind = QuadKind.parse(kind)
    if isinstance(M, bool) or int(M) != M or M < 1:
        raise InvalidArgumentError(f"quadrature size must be a positive integer, got {M!r}")
    M = int(M)
    if kind is QuadKind.NC:
        nodes = -np.pi + 2.0 * np.pi * np.arange(M) / M
        weights = np.full(M, 2.0 * np.pi / M)
    elif kind is QuadKind.GL:
        if M == 1:
            t, w = np.zeros(1), np.full(1, 2.0)
        else:
            t, w = roots_legendre(M)
        nodes, weights = np.pi * t, np.pi * w
    else:
        t, w = clenshaw_curtis(M)
        nodes, weights = np.pi * t, np.pi * w
    return Quad1D(kind, np.ascontiguousarray(nodes), np.ascontiguousarray(weights))


def _check_finite(values, x1, x2, what="integrand"):
    bad = ~np.isfinite(values)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        node = (float(x1[i]), float(x2[j]))
        raise NumericDomainError(
            f"{what} is not finite at node (x1, x2) = {node}", node=node
        )


def integrate2d(r1: Quad1D, r2: Quad1D, g) -> complex:
    """Tensor-product quadrature of ``g`` over [-pi, pi]^2.

    ``g`` must accept broadcastable arrays ``(x1[:, None], x2[None, :])``.
    """
    x1, x2 = r1.nodes, r2.nodes
    vals = np.broadcast_to(
        np.asarray(g(x1[:, None], x2[None, :]), dtype=complex), (x1.size, x2.size)
    )
    _check_finite(vals, x1, x2)
    # inner sums over x2 first, row by row
    inner = vals @ r2.weights
    return complex(r1.weights @ inner)
