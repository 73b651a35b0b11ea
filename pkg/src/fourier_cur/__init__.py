"""Low-rank CUR approximation of bivariate truncated Fourier series.

The coefficient matrix of a function on [-pi, pi]^2 is sampled lazily
through a cached quadrature oracle and compressed by adaptive cross
approximation, so only a few rows and columns of Fourier coefficients are
ever computed.
"""
from .approximant import (EvalGrid, ErrorReport, error_grid, eval_cur,
                          eval_truncated, l2_gap, linspace_grid)
from .cur import (CurModel, OrderEstimate, RunStats, algorithm1, algorithm2,
                  algorithm_c1, cur_fixed, cur_from_matrix, estimate_orders, index_band)
from .errors import (CapacityError, ExperimentIOError, FourierCurError,
                     InvalidArgumentError, NumericDomainError, NumericFailureError)
from .kernels import BACKEND
from .linalg import maxvol_bruteforce, norm, pinv, sigma_min, svd, volume
from .oracle import CoeffOracle, new_oracle
from .quadrature import Quad1D, QuadKind, integrate2d, make_rule
from .testfns import f1, f2, f3

__version__ = "0.1.0"
