# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: initializedcheck=False, language_level=3
"""Compiled kernels: dense complex LU with partial pivoting, the matching
triangular solves, and the power-iteration spectral-norm loop.

Contracts match matfunc.backend.pykernels exactly; see that module for the
reference semantics.
"""

import numpy as np

cdef extern from "complex.h":
    double cabs(double complex) nogil

DEF REL_PIVOT_TOL = 1e-13


def lu_factor(a):
    """LU with partial pivoting; returns (lu, piv, fail), fail -1 on success."""
    lu_arr = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] lu = lu_arr
    cdef Py_ssize_t n = lu.shape[0]
    piv_arr = np.arange(n, dtype=np.int64)
    cdef long long[::1] piv = piv_arr

    cdef double amax = 0.0, m, best, thresh
    cdef Py_ssize_t i, j, k, p
    cdef double complex akk, lik, tmp
    cdef long long fail = -1

    for i in range(n):
        for j in range(n):
            m = cabs(lu[i, j])
            if m > amax:
                amax = m
    thresh = REL_PIVOT_TOL * amax

    for k in range(n):
        best = cabs(lu[k, k])
        p = k
        for i in range(k + 1, n):
            m = cabs(lu[i, k])
            if m > best:
                best = m
                p = i
        if best <= thresh:
            fail = k
            break
        piv[k] = p
        if p != k:
            for j in range(n):
                tmp = lu[k, j]
                lu[k, j] = lu[p, j]
                lu[p, j] = tmp
        akk = lu[k, k]
        for i in range(k + 1, n):
            lik = lu[i, k] / akk
            lu[i, k] = lik
            if lik != 0:
                for j in range(k + 1, n):
                    lu[i, j] = lu[i, j] - lik * lu[k, j]

    return lu_arr, piv_arr, int(fail)


def lu_solve_factored(lu, piv, b):
    """Solve A x = b from lu_factor output; b may be (n,) or (n, m)."""
    lu_arr = np.ascontiguousarray(lu, dtype=np.complex128)
    cdef double complex[:, ::1] lum = lu_arr
    cdef Py_ssize_t n = lum.shape[0]
    piv_arr = np.ascontiguousarray(piv, dtype=np.int64)
    cdef long long[::1] pv = piv_arr

    b_arr = np.asarray(b, dtype=np.complex128)
    single = b_arr.ndim == 1
    x_arr = np.array(b_arr.reshape(n, 1) if single else b_arr,
                     dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] x = x_arr
    cdef Py_ssize_t m = x.shape[1]

    cdef Py_ssize_t i, j, k, p
    cdef double complex lik, uik, ukk, tmp

    # Row interchanges first (the stored L factors live in final, fully
    # permuted positions), then the two triangular solves.
    for k in range(n):
        p = pv[k]
        if p != k:
            for j in range(m):
                tmp = x[k, j]
                x[k, j] = x[p, j]
                x[p, j] = tmp

    for k in range(n):
        for i in range(k + 1, n):
            lik = lum[i, k]
            if lik != 0:
                for j in range(m):
                    x[i, j] = x[i, j] - lik * x[k, j]

    for k in range(n - 1, -1, -1):
        ukk = lum[k, k]
        for j in range(m):
            x[k, j] = x[k, j] / ukk
        for i in range(k):
            uik = lum[i, k]
            if uik != 0:
                for j in range(m):
                    x[i, j] = x[i, j] - uik * x[k, j]

    return x_arr[:, 0] if single else x_arr


def power_sigma(a, double rtol=1e-10, long long maxiter=10000):
    """Largest singular value by power iteration on the Gram matrix.

    Same seed, update, and stopping rule as the pure-Python version:
    returns (sigma, iterations, converged).
    """
    a_arr = np.ascontiguousarray(a, dtype=np.complex128)
    cdef double complex[:, ::1] am = a_arr
    cdef Py_ssize_t n = am.shape[0]

    v_arr = np.empty(n, dtype=np.complex128)
    w_arr = np.empty(n, dtype=np.complex128)
    u_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] v = v_arr
    cdef double complex[::1] w = w_arr
    cdef double complex[::1] u = u_arr

    cdef Py_ssize_t i, j
    cdef long long it
    cdef double nv = 0.0, nu, sigma = 0.0, prev = -1.0
    cdef double complex acc

    for i in range(n):
        v[i] = 1.0 / np.sqrt(n)
    v[0] = v[0] + 1e-3
    for i in range(n):
        nv += (v[i] * v[i].conjugate()).real
    nv = nv ** 0.5
    for i in range(n):
        v[i] = v[i] / nv

    for it in range(1, maxiter + 1):
        sigma = 0.0
        for i in range(n):
            acc = 0
            for j in range(n):
                acc = acc + am[i, j] * v[j]
            w[i] = acc
            sigma += (acc * acc.conjugate()).real
        sigma = sigma ** 0.5
        if sigma == 0.0:
            return 0.0, int(it), True
        nu = 0.0
        for i in range(n):
            acc = 0
            for j in range(n):
                acc = acc + am[j, i].conjugate() * w[j]
            u[i] = acc
            nu += (acc * acc.conjugate()).real
        nu = nu ** 0.5
        if nu == 0.0:
            return sigma, int(it), True
        for i in range(n):
            v[i] = u[i] / nu
        if abs(sigma - prev) <= rtol * sigma:
            return sigma, int(it), True
        prev = sigma
    return sigma, int(maxiter), False
