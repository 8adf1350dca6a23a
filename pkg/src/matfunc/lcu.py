"""The weighting unitary that multiplies each quadrature branch by its weight.

With the series truncated at order L, the weight on branch k is
g~_k = f~_L(beta e^{i theta_k}) e^{i theta_k} where f~_L keeps coefficients
a_0 .. a_{L-1}.  The unitary

    U = (I_M (x) Wc^H) V (I_M (x) W)

realizes amplitude C~ g~_k on the all-zero ancilla of branch k, where

    W  |0>  = w,   w_j = sqrt(a_j beta^j) / sqrt(alpha),
    Wc      = elementwise conjugate of W (so Wc^H = W^T),
    V |k,j> = e^{i theta_k (j+1)} |k,j>,
    alpha   = sum_j |a_j| beta^j,   C~ = 1/alpha.

The matrix elements only ever see w_j^2 = a_j beta^j / alpha, so the square
root branch cannot matter; defining the second prep vector as the conjugate
of the first keeps that true entry by entry.  W is completed to a full
unitary by a Householder reflection carrying the first basis vector to w,
which is deterministic to machine precision.

V factors into log2(M) * log2(L) elementary controlled phases on the bit
pairs of (k, j) plus one k-dependent phase; v_diagonal_factored rebuilds it
that way so the direct construction can be cross-checked.
"""

from __future__ import annotations

import cmath
import math

from dataclasses import dataclass

import numpy as np

from .contour import _check_power_of_two
from .errors import SizeCap, ZeroFunction
from .numkernel import FunctionSpec

# Dense assembly guard for WeightingUnitary.matrix() (tests only need tiny sizes).
_DENSE_DIM_CAP = 4096


@dataclass(frozen=True)
class CoeffTable:
    """Truncated coefficients with their weight normalization.

    coeffs: a_0 .. a_{L-1}; beta: evaluation circle radius;
    alpha = sum |a_j| beta^j; ctilde = 1/alpha.
    """

    coeffs: tuple
    beta: float
    alpha: float

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def ctilde(self) -> float:
        return 1.0 / self.alpha

    def scaled_terms(self) -> list:
        """The products a_j beta^j (zero coefficients skipped exactly)."""
        out = []
        for j, c in enumerate(self.coeffs):
            out.append(0j if c == 0 else c * self.beta**j)
        return out


def truncate(fs: FunctionSpec, order: int, beta: float) -> CoeffTable:
    """Keep coefficients below `order` and precompute alpha = sum |a_j| beta^j."""
    _check_power_of_two(order, "truncation L")
    if not (0.0 < beta < fs.radius):
        raise ValueError(
            "need 0 < beta < radius, got beta=%r radius=%r" % (beta, fs.radius)
        )
    coeffs = tuple(fs.coeff(j) for j in range(order))
    if all(c == 0 for c in coeffs):
        raise ZeroFunction("all %d retained coefficients are zero" % order)
    alpha = 0.0
    for j, c in enumerate(coeffs):
        if c != 0:
            alpha += abs(c) * beta**j
    return CoeffTable(coeffs, float(beta), float(alpha))


def weight(table: CoeffTable, k: int, m_nodes: int) -> complex:
    """Truncated weight g~_k = f~_L(beta e^{i theta_k}) e^{i theta_k}."""
    if not 0 <= k < m_nodes:
        raise ValueError("node index %d outside [0, %d)" % (k, m_nodes))
    theta = 2.0 * math.pi * k / m_nodes
    z = table.beta * cmath.exp(1j * theta)
    acc = 0j
    zp = 1.0 + 0j
    for c in table.coeffs:
        if c != 0:
            acc += c * zp
        zp *= z
    return acc * cmath.exp(1j * theta)


def _householder_to(target: np.ndarray) -> np.ndarray:
    """Unitary whose first column is `target` (a unit vector).

    Phase-align the target so its first entry is real nonnegative, reflect
    e_0 onto it, then undo the phase globally.
    """
    n = target.shape[0]
    t0 = complex(target[0])
    phase = t0 / abs(t0) if abs(t0) > 0 else 1.0 + 0j
    aligned = target / phase
    v = np.zeros(n, dtype=np.complex128)
    v[0] = 1.0
    v = v - aligned
    nv2 = float(np.vdot(v, v).real)
    if nv2 < 1e-30:
        return phase * np.eye(n, dtype=np.complex128)
    h = np.eye(n, dtype=np.complex128) - 2.0 * np.outer(v, v.conj()) / nv2
    return phase * h


def v_diagonal(m_nodes: int, order: int) -> np.ndarray:
    """Phases e^{i theta_k (j+1)} as an (M, L) array (direct construction)."""
    _check_power_of_two(m_nodes, "nodes M")
    _check_power_of_two(order, "truncation L")
    k = np.arange(m_nodes).reshape(-1, 1)
    j = np.arange(order).reshape(1, -1)
    return np.exp(2j * math.pi * k * (j + 1) / m_nodes)


def v_diagonal_factored(m_nodes: int, order: int) -> np.ndarray:
    """The same phases rebuilt from the bitwise factorization.

    e^{i theta_k j} = prod_{s,t} exp(i 2 pi k_s j_t 2^{s+t} / M) over the
    bits k_s of k and j_t of j, times the extra e^{i theta_k}; each factor
    is one two-bit controlled phase gate.
    """
    _check_power_of_two(m_nodes, "nodes M")
    _check_power_of_two(order, "truncation L")
    mbits = m_nodes.bit_length() - 1
    lbits = order.bit_length() - 1
    out = np.ones((m_nodes, order), dtype=np.complex128)
    for s in range(mbits):
        for t in range(lbits):
            factor = np.ones((m_nodes, order), dtype=np.complex128)
            for k in range(m_nodes):
                if not (k >> s) & 1:
                    continue
                for j in range(order):
                    if (j >> t) & 1:
                        factor[k, j] = cmath.exp(
                            2j * math.pi * (1 << (s + t)) / m_nodes
                        )
            out = out * factor
    for k in range(m_nodes):
        out[k, :] *= cmath.exp(2j * math.pi * k / m_nodes)
    return out


@dataclass(frozen=True)
class WeightingUnitary:
    """U = (I (x) Wc^H) V (I (x) W), stored in factored form.

    prep is the L x L completion of w; the conjugate completion is its
    elementwise conjugate, so the closing factor Wc^H equals prep.T.
    phases holds the V diagonal as an (M, L) array.
    """

    m_nodes: int
    order: int
    w: np.ndarray
    prep: np.ndarray
    phases: np.ndarray
    table: CoeffTable

    @property
    def dim(self) -> int:
        return self.m_nodes * self.order

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Apply to a register shaped (M, N, L) (ancilla axis last)."""
        if state.ndim != 3 or state.shape[0] != self.m_nodes or state.shape[2] != self.order:
            raise ValueError("state shape %r does not match (M, *, L)" % (state.shape,))
        out = state @ self.prep.T
        out = out * self.phases[:, None, :]
        return out @ self.prep

    def matrix(self) -> np.ndarray:
        """Dense (M L) x (M L) matrix; block-diagonal over the node index."""
        if self.dim > _DENSE_DIM_CAP:
            raise SizeCap("dense weighting unitary of dim %d over cap" % self.dim)
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        wt = self.prep.T
        for k in range(self.m_nodes):
            block = wt @ (self.phases[k][:, None] * self.prep)
            out[k * self.order : (k + 1) * self.order,
                k * self.order : (k + 1) * self.order] = block
        return out


def build_unitary(table: CoeffTable, m_nodes: int) -> WeightingUnitary:
    """Construct the weighting unitary for the given table and node count."""
    _check_power_of_two(m_nodes, "nodes M")
    terms = table.scaled_terms()
    w = np.array(
        [cmath.sqrt(t) / math.sqrt(table.alpha) for t in terms], dtype=np.complex128
    )
    prep = _householder_to(w)
    phases = v_diagonal(m_nodes, table.order)
    return WeightingUnitary(m_nodes, table.order, w, prep, phases, table)


def gate_count_estimate(m_nodes: int, order: int) -> int:
    """Reported two-qubit-gate estimate: 2 L + log2(M) log2(L).

    The constant 2 covers the two state preparations (each linear in L);
    the cross term counts the controlled phases of the factored V.  This is
    bookkeeping for reports, not a verified circuit cost.
    """
    _check_power_of_two(m_nodes, "nodes M")
    _check_power_of_two(order, "truncation L")
    mbits = m_nodes.bit_length() - 1
    lbits = order.bit_length() - 1
    return 2 * order + mbits * lbits
