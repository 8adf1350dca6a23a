"""Pure-Python kernels: the fallback used when the compiled core is absent.

Same contracts as matfunc.backend._corekernels; the loops run on plain
Python complex scalars, so expect two to three orders of magnitude less
throughput.  Correct at any size, practical below a few hundred rows.
"""

from __future__ import annotations

import math

import numpy as np

# A pivot counts as zero when its magnitude is at most this fraction of the
# largest input magnitude.
REL_PIVOT_TOL = 1e-13


def lu_factor(a):
    """LU factorization with partial pivoting of a square complex matrix.

    Returns (lu, piv, fail): lu holds U in its upper triangle and the unit
    lower triangle of L below it; piv[k] is the row swapped into position k
    at step k; fail is -1 on success, else the column whose pivot fell at or
    below REL_PIVOT_TOL times the largest input magnitude.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    rows = [[complex(a[i, j]) for j in range(n)] for i in range(n)]
    piv = np.arange(n, dtype=np.int64)

    amax = 0.0
    for i in range(n):
        for j in range(n):
            m = abs(rows[i][j])
            if m > amax:
                amax = m
    thresh = REL_PIVOT_TOL * amax

    fail = -1
    for k in range(n):
        best = abs(rows[k][k])
        p = k
        for i in range(k + 1, n):
            m = abs(rows[i][k])
            if m > best:
                best = m
                p = i
        if best <= thresh:
            fail = k
            break
        piv[k] = p
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
        akk = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            lik = ri[k] / akk
            ri[k] = lik
            if lik != 0:
                for j in range(k + 1, n):
                    ri[j] -= lik * rk[j]

    lu = np.array(rows, dtype=np.complex128).reshape(n, n)
    return lu, piv, fail


def lu_solve_factored(lu, piv, b):
    """Solve A x = b from lu_factor output; b may be (n,) or (n, m)."""
    lu = np.asarray(lu, dtype=np.complex128)
    n = lu.shape[0]
    b = np.asarray(b, dtype=np.complex128)
    single = b.ndim == 1
    bmat = b.reshape(n, 1) if single else b
    m = bmat.shape[1]
    x = [[complex(bmat[i, j]) for j in range(m)] for i in range(n)]
    lurows = [[complex(lu[i, j]) for j in range(n)] for i in range(n)]

    # Row interchanges first (the stored L factors live in final, fully
    # permuted positions), then the two triangular solves.
    for k in range(n):
        p = int(piv[k])
        if p != k:
            x[k], x[p] = x[p], x[k]

    for k in range(n):
        xk = x[k]
        for i in range(k + 1, n):
            lik = lurows[i][k]
            if lik != 0:
                xi = x[i]
                for j in range(m):
                    xi[j] -= lik * xk[j]

    for k in range(n - 1, -1, -1):
        xk = x[k]
        ukk = lurows[k][k]
        for j in range(m):
            xk[j] /= ukk
        for i in range(k):
            uik = lurows[i][k]
            if uik != 0:
                xi = x[i]
                for j in range(m):
                    xi[j] -= uik * xk[j]

    out = np.array(x, dtype=np.complex128).reshape(n, m)
    return out[:, 0] if single else out


def power_sigma(a, rtol=1e-10, maxiter=10000):
    """Largest singular value by power iteration on the Gram matrix.

    Starts from the normalized all-ones vector with 1e-3 added to entry 0
    (a fixed seed that avoids common orthogonal starts), iterates
    v <- A^H A v and estimates sigma = ||A v||.  The estimate is monotone
    nondecreasing; iteration stops once successive estimates agree to rtol.

    Returns (sigma, iterations, converged).
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    arows = [[complex(a[i, j]) for j in range(n)] for i in range(n)]

    v = [1.0 / math.sqrt(n) + 0j for _ in range(n)]
    v[0] += 1e-3
    nv = math.sqrt(sum((z * z.conjugate()).real for z in v))
    v = [z / nv for z in v]

    prev = -1.0
    sigma = 0.0
    for it in range(1, maxiter + 1):
        w = [sum(arows[i][j] * v[j] for j in range(n)) for i in range(n)]
        sigma = math.sqrt(sum((z * z.conjugate()).real for z in w))
        if sigma == 0.0:
            return 0.0, it, True
        u = [sum(arows[j][i].conjugate() * w[j] for j in range(n)) for i in range(n)]
        nu = math.sqrt(sum((z * z.conjugate()).real for z in u))
        if nu == 0.0:
            return sigma, it, True
        v = [z / nu for z in u]
        if abs(sigma - prev) <= rtol * sigma:
            return sigma, it, True
        prev = sigma
    return sigma, maxiter, False
