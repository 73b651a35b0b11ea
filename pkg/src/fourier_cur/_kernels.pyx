# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trigonometric contraction kernel.

out[r, s] = sum_j X[r, j] * w[j] * exp(sign * 1j * freqs[s] * nodes[j])

Each output entry is accumulated by a single thread in ascending j, so the
result does not depend on the number of threads.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange, threadid
from libc.math cimport cos, sin

cnp.import_array()

ctypedef fused scalar_t:
    double
    double complex


DEF BLK = 8


cdef inline void _load(const scalar_t[:, ::1] X, Py_ssize_t r, Py_ssize_t j,
                       double *xr, double *xi) noexcept nogil:
    if scalar_t is double:
        xr[0] = X[r, j]
        xi[0] = 0.0
    else:
        xr[0] = X[r, j].real
        xi[0] = X[r, j].imag


cdef void _row_plain(const scalar_t[:, ::1] X, const double[:, ::1] er,
                     const double[:, ::1] ei, double complex[:, ::1] out,
                     double *acc, Py_ssize_t r) noexcept nogil:
    # axpy sweep over j: acc[s] and acc[S+s] collect the real and imaginary
    # parts of out[r, s], each in ascending j
    cdef Py_ssize_t s, j, M = er.shape[0], S = er.shape[1]
    cdef double xr, xi
    cdef const double *pr
    cdef const double *pi
    cdef double *ar = acc
    cdef double *ai = acc + S
    for s in range(S):
        ar[s] = 0.0
        ai[s] = 0.0
    for j in range(M):
        _load(X, r, j, &xr, &xi)
        pr = &er[j, 0]
        pi = &ei[j, 0]
        if scalar_t is double:
            for s in range(S):
                ar[s] = ar[s] + xr * pr[s]
                ai[s] = ai[s] + xr * pi[s]
        else:
            for s in range(S):
                ar[s] = ar[s] + (xr * pr[s] - xi * pi[s])
                ai[s] = ai[s] + (xr * pi[s] + xi * pr[s])
    for s in range(S):
        out[r, s] = ar[s] + 1j * ai[s]


cdef void _row_kahan(const scalar_t[:, ::1] X, const double[:, ::1] er,
                     const double[:, ::1] ei, double complex[:, ::1] out,
                     Py_ssize_t r) noexcept nogil:
    cdef Py_ssize_t s0, t, nb, j, M = er.shape[0], S = er.shape[1]
    cdef double sre[BLK]
    cdef double cre[BLK]
    cdef double sim[BLK]
    cdef double cim[BLK]
    cdef double xr, xi, tre, tim, y, tt
    s0 = 0
    while s0 < S:
        nb = S - s0 if S - s0 < BLK else BLK
        for t in range(BLK):
            sre[t] = 0.0
            cre[t] = 0.0
            sim[t] = 0.0
            cim[t] = 0.0
        for j in range(M):
            _load(X, r, j, &xr, &xi)
            for t in range(nb):
                if scalar_t is double:
                    tre = xr * er[j, s0 + t]
                    tim = xr * ei[j, s0 + t]
                else:
                    tre = xr * er[j, s0 + t] - xi * ei[j, s0 + t]
                    tim = xr * ei[j, s0 + t] + xi * er[j, s0 + t]
                y = tre - cre[t]
                tt = sre[t] + y
                cre[t] = (tt - sre[t]) - y
                sre[t] = tt
                y = tim - cim[t]
                tt = sim[t] + y
                cim[t] = (tt - sim[t]) - y
                sim[t] = tt
        for t in range(nb):
            out[r, s0 + t] = sre[t] + 1j * sim[t]
        s0 += BLK


def _phase_tables(const double[::1] w, const double[::1] nodes,
                  const double[::1] freqs, int sign):
    cdef Py_ssize_t S = freqs.shape[0], M = nodes.shape[0], s, j
    # node-major so that consecutive frequencies are contiguous
    er_arr = np.empty((M, S), dtype=np.float64)
    ei_arr = np.empty((M, S), dtype=np.float64)
    cdef double[:, ::1] er = er_arr
    cdef double[:, ::1] ei = ei_arr
    cdef double ph
    with nogil:
        for s in range(S):
            for j in range(M):
                ph = freqs[s] * nodes[j]
                er[j, s] = w[j] * cos(ph)
                ei[j, s] = sign * w[j] * sin(ph)
    return er_arr, ei_arr


def _contract(const scalar_t[:, ::1] X, const double[::1] w,
              const double[::1] nodes, const double[::1] freqs,
              int sign, bint compensated, int num_threads):
    cdef Py_ssize_t R = X.shape[0], S = freqs.shape[0], r
    cdef double[:, ::1] scratch
    er_arr, ei_arr = _phase_tables(w, nodes, freqs, sign)
    cdef double[:, ::1] er = er_arr
    cdef double[:, ::1] ei = ei_arr
    out_arr = np.zeros((R, S), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    if S == 0 or R == 0:
        return out_arr
    if compensated:
        for r in prange(R, nogil=True, schedule="static", num_threads=num_threads):
            _row_kahan(X, er, ei, out, r)
    else:
        # one scratch row of accumulators per thread
        scratch_arr = np.empty((num_threads, 2 * S), dtype=np.float64)
        scratch = scratch_arr
        for r in prange(R, nogil=True, schedule="static", num_threads=num_threads):
            _row_plain(X, er, ei, out, &scratch[threadid(), 0], r)
    return out_arr


def trig_contract(X, w, nodes, freqs, int sign=-1, bint compensated=False,
                  int num_threads=0):
    X = np.asarray(X)
    w = np.ascontiguousarray(w, dtype=np.float64)
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    freqs = np.ascontiguousarray(freqs, dtype=np.float64)
    if num_threads <= 0:
        num_threads = 1
    if np.iscomplexobj(X):
        X = np.ascontiguousarray(X, dtype=np.complex128)
    else:
        X = np.ascontiguousarray(X, dtype=np.float64)
    return _contract(X, w, nodes, freqs, sign, compensated, num_threads)
