import threading

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fourier_cur.errors import InvalidArgumentError, NumericDomainError
from fourier_cur.oracle import CoeffOracle, new_oracle
from fourier_cur.quadrature import make_rule
from fourier_cur.testfns import f2

from conftest import random_trig_coeffs, trig_function

NC16 = make_rule("NC", 16)


def cos3sin2(x1, x2):
    return np.cos(3 * x1) * np.sin(2 * x2)


def test_constant_oracle_fresh():
    r = make_rule("NC", 8)
    o = new_oracle(lambda a, b: np.ones_like(a + b), 2, 2, r, r)
    assert np.all(o.fgrid == 1.0)
    assert o.integral_count() == 0


def test_fgrid_is_direct_evaluation():
    r = make_rule("GL", 64)
    o = CoeffOracle(f2, 10, 10, r, r)
    i = j = 32
    assert o.fgrid[i, j] == f2(r.nodes[i], r.nodes[j])


def test_nan_rejected_with_location():
    r = make_rule("NC", 8)
    def f(a, b):
        return np.where((a == 0) & (b == 0), np.nan, 1.0)
    with pytest.raises(NumericDomainError) as info:
        CoeffOracle(f, 2, 2, r, r)
    assert info.value.node == (0.0, 0.0)


@pytest.mark.parametrize("I", [-1, 1.5])
def test_bad_orders(I):
    with pytest.raises(InvalidArgumentError):
        CoeffOracle(f2, I, 2, NC16, NC16)


def test_constant_coefficients():
    o = CoeffOracle(lambda a, b: 1.0, 3, 3, NC16, NC16)
    assert abs(o.coeff(0, 0) - 1) <= 1e-12
    assert abs(o.coeff(1, 0)) <= 1e-12


def test_analytic_coefficient():
    o = CoeffOracle(cos3sin2, 5, 5, NC16, NC16)
    assert abs(o.coeff(3, 2) - (-0.25j)) <= 1e-12
    assert abs(o.coeff(-3, -2) - 0.25j) <= 1e-12
    assert abs(o.coeff(-3, -2) - np.conj(o.coeff(3, 2))) <= 1e-12


def test_out_of_bounds():
    o = CoeffOracle(cos3sin2, 2, 2, NC16, NC16)
    with pytest.raises(InvalidArgumentError):
        o.coeff(3, 0)
    with pytest.raises(InvalidArgumentError):
        o.column_block([0, 3])


@pytest.mark.parametrize("T", [[1, 0], [0, 0], [[0]]])
def test_invalid_index_sets(T):
    o = CoeffOracle(cos3sin2, 4, 4, NC16, NC16)
    with pytest.raises(InvalidArgumentError):
        o.row_block(T)


def test_column_block_values():
    I = 5
    o = CoeffOracle(lambda a, b: 1.0, I, I, NC16, NC16)
    col = o.column_block([0])[:, 0]
    expected = np.zeros(2 * I + 1)
    expected[I] = 1.0
    np.testing.assert_allclose(col, expected, atol=1e-12)

    # cos(3 x1) contributes 1/2 at k1 = +-3 and sin(2 x2) gives -1j/2 at k2 = 2,
    # so both rows carry -1j/4 in this column; +1j/4 lives in column k2 = -2
    o = CoeffOracle(cos3sin2, I, I, NC16, NC16)
    cols = o.column_block([-2, 2])
    expected = np.zeros((2 * I + 1, 2), dtype=complex)
    expected[[I - 3, I + 3], 1] = -0.25j
    expected[[I - 3, I + 3], 0] = 0.25j
    np.testing.assert_allclose(cols, expected, atol=1e-12)


def test_row_block_values():
    I = 5
    o = CoeffOracle(lambda a, b: 1.0, I, I, NC16, NC16)
    row = o.row_block([0])[0]
    assert abs(row[I] - 1) <= 1e-12 and np.abs(np.delete(row, I)).max() <= 1e-12

    o = CoeffOracle(cos3sin2, I, I, NC16, NC16)
    row = o.row_block([3])[0]
    expected = np.zeros(2 * I + 1, dtype=complex)
    expected[I + 2] = -0.25j
    expected[I - 2] = 0.25j
    np.testing.assert_allclose(row, expected, atol=1e-12)


def test_blocks_agree_with_scalar_path():
    r = make_rule("GL", 40)
    a = CoeffOracle(f2, 6, 7, r, r)
    b = CoeffOracle(f2, 6, 7, r, r)
    col = a.column_block([0, 1])[:, 0]
    row = a.row_block([1])[0]
    scal_col = np.array([b.coeff(k, 0) for k in range(-6, 7)])
    scal_row = np.array([b.coeff(1, k) for k in range(-7, 8)])
    np.testing.assert_allclose(col, scal_col, atol=1e-13)
    np.testing.assert_allclose(row, scal_row, atol=1e-13)
    # within one oracle every block entry is the cached scalar value
    for i, k in enumerate(range(-6, 7)):
        assert col[i] == a.coeff(k, 0)


def test_core_block_analytic():
    o = CoeffOracle(lambda a, b: np.cos(a) * np.cos(b), 2, 2, NC16, NC16)
    G = o.core_block([-1, 0, 1], [-1, 0, 1])
    expected = np.array([[0.25, 0, 0.25], [0, 0, 0], [0.25, 0, 0.25]])
    np.testing.assert_allclose(G, expected, atol=1e-12)
    assert np.array_equal(o.core_block([0], [0]), np.array([[o.coeff(0, 0)]]))


def test_core_block_matches_column_block_exactly():
    r = make_rule("CC", 33)
    o = CoeffOracle(f2, 8, 8, r, r)
    T1, T2 = np.array([-5, -1, 2, 7]), np.array([-3, 0, 4])
    G = o.core_block(T1, T2)
    C = o.column_block(T2)
    assert np.array_equal(G, C[T1 + 8, :])
    # and in the other orientation (row path first)
    o = CoeffOracle(f2, 8, 8, r, r)
    G = o.core_block(np.array([1]), np.array([-2, -1, 0, 3]))
    assert np.array_equal(G, o.row_block([1])[:, np.array([-2, -1, 0, 3]) + 8])


def test_full_matrix_small():
    o = CoeffOracle(lambda a, b: 1.0, 1, 1, NC16, NC16)
    A = o.full_matrix()
    expected = np.zeros((3, 3))
    expected[1, 1] = 1
    np.testing.assert_allclose(A, expected, atol=1e-12)
    o = CoeffOracle(lambda a, b: np.cos(a) * np.cos(b), 1, 1, NC16, NC16)
    np.testing.assert_allclose(
        o.full_matrix(), [[0.25, 0, 0.25], [0, 0, 0], [0.25, 0, 0.25]], atol=1e-12
    )
    assert o.integral_count() == 9


def test_separable_rank_one():
    r = make_rule("GL", 48)
    o = CoeffOracle(lambda a, b: np.exp(np.sin(a)) * (2 + np.cos(3 * b)), 6, 6, r, r)
    s = np.linalg.svd(o.full_matrix(), compute_uv=False)
    assert s[1] <= 1e-10 * s[0]


def test_separable_rank_rho(rng):
    # f = sum_r g_r(x1) h_r(x2) with degree <= I factors has rank <= rho
    I, rho = 4, 3
    k = np.arange(-I, I + 1)
    gs = [rng.standard_normal(2 * I + 1) for _ in range(rho)]
    hs = [rng.standard_normal(2 * I + 1) for _ in range(rho)]

    def f(a, b):
        tot = 0.0
        for g, h in zip(gs, hs):
            tot = tot + (np.cos(np.multiply.outer(a, k)) @ g) * (np.cos(np.multiply.outer(b, k)) @ h)
        return tot

    r = make_rule("NC", 2 * I + 3)
    o = CoeffOracle(lambda a, b: f(*np.broadcast_arrays(a, b)), I, I, r, r)
    s = np.linalg.svd(o.full_matrix(), compute_uv=False)
    assert s[rho] <= 1e-10 * s[0]


def test_integral_count_examples():
    r = make_rule("NC", 12)
    o = CoeffOracle(f2, 3, 4, r, r)
    assert o.integral_count() == 0
    o.coeff(0, 0)
    o.coeff(0, 0)
    assert o.integral_count() == 1
    o = CoeffOracle(f2, 3, 4, r, r)
    o.column_block([0])
    o.row_block([0])
    assert o.integral_count() == (2 * 3 + 1) + (2 * 4 + 1) - 1


@given(
    requests=st.lists(
        st.tuples(
            st.sampled_from(["coeff", "col", "row", "core"]),
            st.sets(st.integers(-3, 3), min_size=1, max_size=4),
            st.sets(st.integers(-3, 3), min_size=1, max_size=4),
        ),
        min_size=1, max_size=8,
    )
)
@settings(max_examples=40, deadline=None)
def test_count_equals_union_of_requests(requests):
    r = make_rule("NC", 10)
    o = CoeffOracle(f2, 3, 3, r, r)
    seen = set()
    full = range(-3, 4)
    for kind, s1, s2 in requests:
        T1, T2 = sorted(s1), sorted(s2)
        if kind == "coeff":
            o.coeff(T1[0], T2[0])
            seen.add((T1[0], T2[0]))
        elif kind == "col":
            o.column_block(T2)
            seen.update((a, b) for a in full for b in T2)
        elif kind == "row":
            o.row_block(T1)
            seen.update((a, b) for a in T1 for b in full)
        else:
            o.core_block(T1, T2)
            seen.update((a, b) for a in T1 for b in T2)
        assert o.integral_count() == len(seen)


def test_conjugate_symmetry_random(rng):
    I = 4
    A = random_trig_coeffs(rng, I, I)
    f = trig_function(A, I, I)
    r = make_rule("NC", 4 * I + 1)
    o = CoeffOracle(f, I, I, r, r)
    F = o.full_matrix()
    assert np.abs(F - np.conj(F[::-1, ::-1])).max() <= 1e-12
    np.testing.assert_allclose(F, A, atol=1e-12)


def test_compensated_summation_agrees(rng):
    r = make_rule("GL", 65)
    a = CoeffOracle(f2, 5, 5, r, r)
    b = CoeffOracle(f2, 5, 5, r, r, compensated=True)
    np.testing.assert_allclose(a.full_matrix(), b.full_matrix(), atol=1e-12)


def test_backends_agree_on_blocks():
    from fourier_cur import kernels
    if kernels.BACKEND != "compiled":
        pytest.skip("compiled kernels not built")
    r = make_rule("CC", 51)
    a = CoeffOracle(f2, 7, 7, r, r, backend="compiled")
    b = CoeffOracle(f2, 7, 7, r, r, backend="python")
    np.testing.assert_allclose(a.column_block([-2, 3]), b.column_block([-2, 3]), atol=1e-12)


def test_concurrent_requests_count_once():
    r = make_rule("NC", 64)
    o = CoeffOracle(f2, 10, 10, r, r)
    T = np.arange(-4, 5)
    barrier = threading.Barrier(4)

    def work(i):
        barrier.wait()
        if i % 2:
            o.column_block(T)
        else:
            o.row_block(T)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert o.integral_count() == 2 * 21 * 9 - 81
