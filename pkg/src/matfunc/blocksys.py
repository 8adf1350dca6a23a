"""The block-diagonal linear system behind the solver stage.

The M resolvent solves of the quadrature stack into one system A' x' = b'
with diagonal blocks e^{i theta_k} I - A/beta and b' = (1,...,1)^T (x) b.
Two access paths exist:

* SparseOracle / BlockOracle model black-box entry, nonzero-position and
  state-preparation access with query counters, mirroring how a quantum
  solver would touch the data.  Every diagonal-block entry query costs
  exactly one base entry query; off-diagonal blocks answer zero for free.
* assemble_blockdiag builds the same matrix densely and exists purely so
  tests can cross-check the oracle path.

Closed-form facts used downstream (condition_bounds): ||A'|| <= 1 + 1/beta,
||A'^{-1}|| <= (1 - 1/beta)^{-1}, hence kappa_{A'} < 2 kappa' with
kappa' = 1/(1 - 1/beta).

Oracle counters are the only mutable state in the package; keep each oracle
instance on a single thread.  Everything else here is pure.
"""

from __future__ import annotations

import cmath
import math
import os

import numpy as np

from .errors import BadScale, SizeCap
from .contour import _check_power_of_two, make_nodes
from .numkernel import as_matrix, as_vector, normalize

DEFAULT_SIZE_CAP = 2**14


def size_cap() -> int:
    """Dense-system size cap; MATFUNC_SIZE_CAP overrides the default 2^14."""
    raw = os.environ.get("MATFUNC_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError("MATFUNC_SIZE_CAP must be positive")
    return cap


class SparseOracle:
    """Classical stand-in for entry / position / state-preparation access.

    Built from a dense matrix and right-hand side.  The structural pattern
    is the set of nonzero entries plus every diagonal entry (kept even when
    numerically zero, so shifted diagonals stay reachable).  Counters record
    every query; read them with counts().
    """

    def __init__(self, matrix, rhs):
        a = as_matrix(matrix)
        b = as_vector(rhs)
        if b.shape[0] != a.shape[0]:
            raise ValueError("dimension mismatch between matrix and rhs")
        self._a = a.copy()
        self._a.setflags(write=False)
        self._b = b.copy()
        self._b.setflags(write=False)
        n = a.shape[0]
        self._cols = []
        for j in range(n):
            rows = set(np.nonzero(a[:, j])[0].tolist())
            rows.add(j)
            self._cols.append(tuple(sorted(rows)))
        row_counts = [0] * n
        for rows in self._cols:
            for i in rows:
                row_counts[i] += 1
        self._sparsity = max(max(len(c) for c in self._cols), max(row_counts))
        self.entry_queries = 0
        self.position_queries = 0
        self.rhs_queries = 0

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def sparsity(self) -> int:
        return self._sparsity

    def column_nnz(self, j: int) -> int:
        """Structural nonzeros in column j (pattern metadata, not a query)."""
        return len(self._cols[j])

    def entry(self, i: int, j: int) -> complex:
        """Matrix element A[i, j]; zero off the pattern.  Counts one query."""
        self.entry_queries += 1
        return complex(self._a[i, j])

    def position(self, j: int, ell: int) -> int:
        """Row index of the ell-th structural nonzero in column j."""
        self.position_queries += 1
        rows = self._cols[j]
        if ell >= len(rows):
            raise IndexError(
                "column %d has %d structural nonzeros, asked for %d"
                % (j, len(rows), ell)
            )
        return rows[ell]

    def rhs_state(self) -> np.ndarray:
        """The normalized right-hand-side state.  Counts one query."""
        self.rhs_queries += 1
        return normalize(self._b)

    def reset_counters(self):
        self.entry_queries = 0
        self.position_queries = 0
        self.rhs_queries = 0

    def counts(self) -> dict:
        return {
            "oa": self.entry_queries,
            "onu": self.position_queries,
            "pb": self.rhs_queries,
        }


class BlockOracle:
    """Oracle view of the stacked system, forwarding to a base oracle.

    Indices are pairs (k, i) with block k in [0, M) and inner index i in
    [0, N).  entry() answers zero for k != k' without touching the base
    oracle and issues exactly one base entry query when k == k'.
    """

    def __init__(self, base: SparseOracle, m_nodes: int, beta: float):
        _check_power_of_two(m_nodes, "nodes M")
        if not (beta > 0 and math.isfinite(beta)):
            raise ValueError("beta must be positive and finite")
        self.base = base
        self.m_nodes = m_nodes
        self.beta = beta
        self._phases = [
            cmath.exp(1j * (2.0 * math.pi * k / m_nodes)) for k in range(m_nodes)
        ]
        # Reciprocal scaling: real-by-complex products round identically in
        # scalar and vectorized arithmetic, so entry() matches the dense path
        # bit for bit (complex division would differ in the last ulp).
        self._inv_beta = 1.0 / beta
        self.entry_queries = 0
        self.position_queries = 0
        self.rhs_queries = 0

    @property
    def dim(self) -> int:
        return self.base.dim * self.m_nodes

    def entry(self, row, col) -> complex:
        k, i = row
        kp, j = col
        self.entry_queries += 1
        if k != kp:
            return 0j
        val = self.base.entry(i, j)
        diag = self._phases[k] if i == j else 0j
        return diag - val * self._inv_beta

    def position(self, col, ell) -> tuple:
        k, j = col
        self.position_queries += 1
        return (k, self.base.position(j, ell))

    def rhs_state(self) -> np.ndarray:
        """Normalized stacked state: uniform block weights times the base state."""
        self.rhs_queries += 1
        b = self.base.rhs_state()
        return np.tile(b, self.m_nodes) / math.sqrt(self.m_nodes)

    def to_dense(self) -> np.ndarray:
        """Materialize A' through the oracle interface (queries counted)."""
        n = self.base.dim
        m = self.m_nodes
        if n * m > size_cap():
            raise SizeCap(
                "N*M = %d exceeds the size cap %d" % (n * m, size_cap())
            )
        out = np.zeros((n * m, n * m), dtype=np.complex128)
        for k in range(m):
            for j in range(n):
                for ell in range(self.base.column_nnz(j)):
                    kk, i = self.position((k, j), ell)
                    out[kk * n + i, k * n + j] = self.entry((kk, i), (k, j))
        return out

    def counts(self) -> dict:
        return {
            "oa": self.entry_queries,
            "onu": self.position_queries,
            "pb": self.rhs_queries,
        }


def assemble_blockdiag(a, beta: float, m_nodes: int) -> np.ndarray:
    """Dense A' with blocks e^{i theta_k} I - A/beta (verification path)."""
    a = as_matrix(a)
    _check_power_of_two(m_nodes, "nodes M")
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError("beta must be positive and finite")
    n = a.shape[0]
    if n * m_nodes > size_cap():
        raise SizeCap(
            "N*M = %d exceeds the size cap %d" % (n * m_nodes, size_cap())
        )
    nodes = make_nodes(m_nodes, beta)
    eye = np.eye(n, dtype=np.complex128)
    scaled = a * (1.0 / beta)
    out = np.zeros((n * m_nodes, n * m_nodes), dtype=np.complex128)
    for k in range(m_nodes):
        phase = cmath.exp(1j * float(nodes.angles[k]))
        out[k * n : (k + 1) * n, k * n : (k + 1) * n] = phase * eye - scaled
    return out


def assemble_rhs(b, m_nodes: int) -> np.ndarray:
    """b' = (1,...,1)^T (x) b: M stacked copies of b."""
    b = as_vector(b)
    _check_power_of_two(m_nodes, "nodes M")
    return np.tile(b, m_nodes)


def scale_system(aprime, c: float, beta: float) -> np.ndarray:
    """A'/c with c >= 1 + 1/beta, so the scaled norm is at most one.

    The normalized solution state of the scaled system equals that of the
    original; c = 2 is the conventional choice.
    """
    aprime = as_matrix(aprime)
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError("beta must be positive and finite")
    if c < (1.0 + 1.0 / beta) - 1e-12:
        raise BadScale(
            "scale constant %g is below 1 + 1/beta = %g" % (c, 1.0 + 1.0 / beta)
        )
    return aprime / c


def hermitian_dilation(a, b):
    """The Hermitian embedding [[0, A], [A^H, 0]] with rhs (b, 0).

    Solving the dilated system yields (0, x) with A x = b, which is how a
    Hermitian-only solver handles a general square A.
    """
    a = as_matrix(a)
    b = as_vector(b)
    n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("dimension mismatch")
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[:n, n:] = a
    out[n:, :n] = a.conj().T
    rhs = np.concatenate([b, np.zeros(n, dtype=np.complex128)])
    return out, rhs


def condition_bounds(beta: float) -> tuple:
    """(norm bound, inverse-norm bound, condition bound) for A'.

    Returns (1 + 1/beta, (1 - 1/beta)^{-1}, 2/(1 - 1/beta)).
    """
    if not (beta > 1):
        raise ValueError("beta must exceed 1")
    inv = 1.0 / (1.0 - 1.0 / beta)
    return (1.0 + 1.0 / beta, inv, 2.0 * inv)
