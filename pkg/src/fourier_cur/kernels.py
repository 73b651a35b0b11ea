"""Backend selection for the hot trigonometric contraction.

The compiled extension is preferred; setting ``FOURIER_CUR_PURE_PYTHON=1``
forces the numpy fallback.  ``BACKEND`` names the active implementation.
"""
import os

from . import _fallback

try:
    if os.environ.get("FOURIER_CUR_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("compiled backend disabled by environment")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

_NUM_THREADS = int(os.environ.get("FOURIER_CUR_NUM_THREADS", "0") or 0) or (os.cpu_count() or 1)


def get_backend(name=None):
    """Return the kernel module for ``name`` (``"compiled"``, ``"python"`` or None)."""
    if name is None:
        name = BACKEND
    if name == "python":
        return _fallback
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def trig_contract(X, w, nodes, freqs, sign=-1, compensated=False, backend=None):
    """Weighted trigonometric sums along the last axis of ``X``.

    Computes ``out[r, s] = sum_j X[r, j] * w[j] * exp(sign*1j*freqs[s]*nodes[j])``.
    Because the phase is symmetric in (frequency, node) the same routine
    serves both coefficient quadrature (nodes are points, freqs are integers)
    and series evaluation (nodes are integers, freqs are points).
    """
    mod = get_backend(backend)
    return mod.trig_contract(X, w, nodes, freqs, sign, compensated, _NUM_THREADS)
