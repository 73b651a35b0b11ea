import numpy as np
import pytest

from fourier_cur.approximant import (EvalGrid, error_grid, eval_cur, eval_truncated,
                                     l2_gap, linspace_grid)
from fourier_cur.cur import CurModel, cur_fixed, cur_from_matrix
from fourier_cur.errors import InvalidArgumentError, NumericDomainError
from fourier_cur.oracle import CoeffOracle
from fourier_cur.quadrature import integrate2d, make_rule
from fourier_cur.testfns import f2

from conftest import naive_series, random_trig_coeffs, trig_function


def random_points(rng, n):
    return EvalGrid.from_points(rng.uniform(-np.pi, np.pi, n), rng.uniform(-np.pi, np.pi, n))


def test_center_only_is_constant(backend):
    A = np.zeros((5, 7), complex)
    A[2, 3] = 1
    v = eval_truncated(A, 2, 3, linspace_grid(9), backend=backend)
    assert np.abs(v - 1).max() <= 1e-15


def test_cosine(backend):
    A = np.zeros((3, 3), complex)
    A[0, 1] = A[2, 1] = 0.5
    g = linspace_grid(17)
    v = eval_truncated(A, 1, 1, g, backend=backend)
    X1, _ = g.mesh()
    assert np.abs(v - np.cos(X1)).max() <= 1e-12


def test_matches_double_sum(rng, backend):
    A = random_trig_coeffs(rng, 2, 2, hermitian=False)
    g = random_points(rng, 10)
    v = eval_truncated(A, 2, 2, g, backend=backend)
    assert np.abs(v - naive_series(A, 2, 2, g.x1s, g.x2s)).max() <= 1e-12


def test_shape_mismatch():
    with pytest.raises(InvalidArgumentError):
        eval_truncated(np.zeros((3, 3)), 2, 1, linspace_grid(3))


def test_grid_validation():
    with pytest.raises(InvalidArgumentError):
        EvalGrid.from_points([0.0, 4.0], [0.0])
    with pytest.raises(InvalidArgumentError):
        linspace_grid(1)


def test_eval_cur_matches_truncated(rng, backend):
    A = random_trig_coeffs(rng, 6, 5, hermitian=False)
    m = cur_from_matrix(A, [1, 4, 7, 9], [0, 3, 8])
    g = random_points(rng, 100)
    direct = eval_truncated(m.matrix(), 6, 5, g, backend=backend)
    assert np.abs(eval_cur(m, g, backend=backend) - direct).max() <= 1e-10


def test_eval_cur_exact_model(rng):
    A = random_trig_coeffs(rng, 3, 3)
    m = cur_from_matrix(A, np.arange(7), np.arange(7))
    g = linspace_grid(11)
    assert np.abs(eval_cur(m, g) - eval_truncated(A, 3, 3, g)).max() <= 1e-10


def test_eval_cur_constant():
    r = make_rule("NC", 8)
    o = CoeffOracle(lambda a, b: np.ones(np.broadcast(a, b).shape), 3, 3, r, r)
    m = cur_fixed(o, [0], [0])
    assert np.abs(eval_cur(m, linspace_grid(5)) - 1).max() <= 1e-12


def test_eval_cur_inconsistent():
    m = cur_from_matrix(np.eye(3), [0], [0])
    bad = CurModel(m.I1, m.I2, m.T1, m.T2, m.C[:2], m.R, m.G, m.U)
    with pytest.raises(InvalidArgumentError):
        eval_cur(bad, linspace_grid(3))


def test_l2_gap_exact_model(rng):
    A = random_trig_coeffs(rng, 3, 3)
    m = cur_from_matrix(A, np.arange(7), np.arange(7))
    assert l2_gap(A, m) <= 1e-12
    with pytest.raises(InvalidArgumentError):
        l2_gap(A[:5], m)


def test_l2_gap_parseval_quadrature(rng):
    I = 10
    r = make_rule("NC", 256)
    for _ in range(3):
        A = random_trig_coeffs(rng, I, I, hermitian=False)
        m = cur_from_matrix(A, np.sort(rng.choice(21, 5, replace=False)),
                            np.sort(rng.choice(21, 4, replace=False)))
        D = A - m.matrix()
        vals = eval_truncated(D, I, I, EvalGrid(r.nodes, r.nodes))
        quad = float(np.real(r.weights @ np.abs(vals) ** 2 @ r.weights)) / (2 * np.pi) ** 2
        assert abs(l2_gap(A, m) ** 2 - quad) <= 1e-6 * quad


def test_l2_gap_svd_tail(rng):
    A = random_trig_coeffs(rng, 4, 4, hermitian=False)
    U, S, Vh = np.linalg.svd(A)
    r = 3
    # the rank-r truncation written as a CUR model with identity-coupled factors
    C = U[:, :r] * S[:r]
    m = CurModel(4, 4, np.arange(r), np.arange(r), C, Vh[:r], np.eye(r), np.eye(r))
    assert abs(l2_gap(A, m) - np.sqrt(np.sum(S[r:] ** 2))) <= 1e-10


def test_error_grid_identity():
    rep = error_grid(f2, lambda g: f2(*g.mesh()), 60)
    assert rep.max_err == 0.0 and rep.f_vals.size == 3600
    assert rep.grid.x1s[0] == -np.pi and rep.grid.x1s[-1] == np.pi
    rows = list(rep.rows())
    assert len(rows) == 3600 and rows[0][:2] == (-np.pi, -np.pi)


def test_error_grid_shape_and_nan():
    with pytest.raises(InvalidArgumentError):
        error_grid(f2, lambda g: np.zeros((2, 2)), 5)
    with pytest.raises(NumericDomainError):
        error_grid(f2, lambda g: np.full(g.shape, np.nan), 5)


@pytest.mark.parametrize("kind,M", [("GL", 501), ("NC", 2001)])
def test_error_decreases_with_order(kind, M):
    errs = {}
    r = make_rule(kind, M)
    for I in (20, 40):
        A = CoeffOracle(f2, I, I, r, r).full_matrix()
        errs[I] = error_grid(f2, lambda g: eval_truncated(A, I, I, g), 60).max_err
    assert errs[40] <= errs[20]


def test_real_function_has_real_series(rng):
    A = random_trig_coeffs(rng, 4, 4)
    r = make_rule("NC", 32)
    B = CoeffOracle(trig_function(A, 4, 4), 4, 4, r, r).full_matrix()
    rep = error_grid(trig_function(A, 4, 4), lambda g: eval_truncated(B, 4, 4, g), 20)
    assert rep.max_imag_residue <= 1e-10 and rep.max_err <= 1e-10
