"""End-to-end simulation of the state-preparation pipeline.

Stages, executed on exact statevectors:

1. Solve the scaled block system (A'/c) x' = |b'> through the oracle
   interface and normalize; then replace the solver stage's output with a
   state at exactly the budgeted distance eps' (inject_error), standing in
   for an approximate quantum linear-system solver whose only contracted
   property is that distance.
2. Adjoin an L-dimensional ancilla in |0...0> and apply the weighting
   unitary, which places amplitude C~ g~_k on the surviving ancilla branch.
3. Hadamard-average the node register.
4. Project on the all-zero node register and ancilla; the squared norm is
   the success probability p~ and the normalized projection is the output
   state |f~>.

select_parameters realizes the sufficient settings

    eps' = F eps / 8,
    M >= gamma ln(8/(F eps) + 1),       gamma = max(kappa', 1/(1-r)),
    L >= (1/(1-r)) ln(8 / ((1-r) F eps)),

rounded up to powers of two (natural logarithm: the underlying inequalities
1/ln(beta) < kappa' and 1/ln(1/r) < 1/(1-r) hold in that base), where
F = ||f(A)|b>|| (1 - 1/beta) / B.  Under these settings the output obeys

    || |f> - |f~> || <= (2/F) [ b1/(1-b1) + r^M/(1-r^M) + eps'
                               + r^L/(1-r) ],   b1 = beta^{-M},

(error_bound) which is at most eps, and the success probability obeys
p~ >= (3 F (1-r) / 4)^2 (success_lower_bound), with about
(4/3) / (F (1-r)) amplitude-amplification rounds to boost it to constant.

run_algorithm is deterministic given (inputs, seed); sweeps may run
invocations in parallel since each builds its own oracles.
"""

from __future__ import annotations

import json
import math

from dataclasses import dataclass

import numpy as np

from . import lcu
from .blocksys import BlockOracle, SparseOracle, scale_system, size_cap
from .contour import ContourPlan, node_weights, truncation_bound
from .errors import (
    DegenerateBound,
    InfeasibleTarget,
    NormTooLarge,
    NullImage,
    NullProjection,
    SizeCap,
)
from .numkernel import FunctionSpec, as_matrix, as_vector, lu_solve, normalize, spectral_norm, taylor_apply
from .rng import SplitMix64

# select_parameters refuses quadrature or truncation sizes above this.
PARAMETER_CAP = 2**16
# Full register cap (node x data x ancilla amplitudes), memory guard only.
_REGISTER_CAP = 2**22
# Reference-state series tolerance, one order tighter than any compared bound.
_REF_TOL = 1e-13

DEFAULT_SCALE_C = 2.0


@dataclass(frozen=True)
class ParameterPlan:
    """Accuracy budget split across the pipeline stages.

    epsilon: overall target (None when M/L/eps' were set by hand).
    f_scale: the instance constant F = ||f(A)|b>|| (1 - 1/beta) / B.
    eps_prime: solver-stage distance budget.
    nodes, order: quadrature size M and series truncation L (powers of two).
    gamma: max(kappa', 1/(1-r)).
    aa_repetitions: ceil((4/3) / (F (1-r))) amplitude-amplification rounds.
    """

    epsilon: float | None
    f_scale: float
    eps_prime: float
    nodes: int
    order: int
    gamma: float
    aa_repetitions: int


@dataclass(frozen=True)
class RunInternals:
    """Exact intermediate quantities kept for invariant verification."""

    xprime_state: np.ndarray      # unit solution state, no injected error
    xtilde_state: np.ndarray      # state after error injection
    block_norms: np.ndarray       # p_k = ||x_k|| / ||x'||
    raw_solution_norm: float      # ||A'^{-1} b'|| for b' = (1,..,1) (x) b
    weights_exact: np.ndarray     # g_k from the certified series
    weights_truncated: np.ndarray # g~_k from the coefficient table
    ctilde: float


@dataclass(frozen=True)
class RunReport:
    """Every measured quantity of one pipeline execution."""

    success_prob: float
    success_lower_bound: float
    error_measured: float
    error_bound: float
    trunc_bound: float
    f_scale: float
    beta: float
    r: float
    nodes: int
    order: int
    eps_prime: float
    aa_repetitions: int
    gate_estimate: int
    query_counts: dict
    seed: int
    post_state: np.ndarray
    ref_state: np.ndarray
    internals: RunInternals | None = None

    def to_json_dict(self) -> dict:
        return {
            "success_prob": self.success_prob,
            "success_lower_bound": self.success_lower_bound,
            "error_measured": self.error_measured,
            "error_bound": self.error_bound,
            "trunc_bound": self.trunc_bound,
            "F": self.f_scale,
            "beta": self.beta,
            "r": self.r,
            "M": self.nodes,
            "L": self.order,
            "eps_prime": self.eps_prime,
            "aa_repetitions": self.aa_repetitions,
            "gate_estimate": self.gate_estimate,
            "query_counts": {
                "oa": self.query_counts["oa"],
                "onu": self.query_counts["onu"],
                "pb": self.query_counts["pb"],
            },
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def compute_F(fs: FunctionSpec, a, b, beta: float, norm_a=None) -> float:
    """The instance scale F = ||f(A)|b>|| (1 - 1/beta) / B; b must be unit."""
    a = as_matrix(a)
    b = as_vector(b)
    if abs(float(np.linalg.norm(b)) - 1.0) > 1e-9:
        raise ValueError("b must be a unit-norm state")
    if not beta > 1.0:
        raise ValueError("beta must exceed 1")
    image = taylor_apply(fs, a, b, _REF_TOL, norm_a=norm_a)
    nimg = float(np.linalg.norm(image))
    if nimg < 1e-12:
        raise NullImage("f(A) b has norm %g; the target state is undefined" % nimg)
    return nimg * (1.0 - 1.0 / beta) / fs.disk_max


def _next_pow2(x: float, minimum: int = 2) -> int:
    p = minimum
    while p < x:
        p *= 2
    return p


def select_parameters(
    fs: FunctionSpec, beta: float, f_scale: float, epsilon: float
) -> ParameterPlan:
    """Smallest power-of-two M and L meeting the sufficient inequalities."""
    if not (0.0 < epsilon <= 0.5):
        raise ValueError("epsilon must lie in (0, 1/2]")
    if f_scale <= 0.0:
        raise ValueError("F must be positive")
    if not (1.0 < beta < fs.radius):
        raise ValueError("need 1 < beta < radius")
    r = beta / fs.radius
    kappa_prime = 1.0 / (1.0 - 1.0 / beta)
    gamma = max(kappa_prime, 1.0 / (1.0 - r))
    eps_prime = f_scale * epsilon / 8.0
    m_req = gamma * math.log(8.0 / (f_scale * epsilon) + 1.0)
    l_req = (1.0 / (1.0 - r)) * math.log(8.0 / ((1.0 - r) * f_scale * epsilon))
    m_nodes = _next_pow2(m_req)
    order = _next_pow2(l_req)
    if m_nodes > PARAMETER_CAP or order > PARAMETER_CAP:
        raise InfeasibleTarget(
            "required M=%d or L=%d exceeds the cap %d"
            % (m_nodes, order, PARAMETER_CAP)
        )
    aa_repetitions = math.ceil((4.0 / 3.0) / (f_scale * (1.0 - r)))
    return ParameterPlan(
        epsilon=epsilon,
        f_scale=f_scale,
        eps_prime=eps_prime,
        nodes=m_nodes,
        order=order,
        gamma=gamma,
        aa_repetitions=aa_repetitions,
    )


def manual_plan(
    fs: FunctionSpec, beta: float, f_scale: float, nodes: int, order: int,
    eps_prime: float,
) -> ParameterPlan:
    """A plan with explicitly chosen M, L and eps' (no epsilon target)."""
    r = beta / fs.radius
    kappa_prime = 1.0 / (1.0 - 1.0 / beta)
    gamma = max(kappa_prime, 1.0 / (1.0 - r))
    aa_repetitions = math.ceil((4.0 / 3.0) / (f_scale * (1.0 - r)))
    plan = ParameterPlan(
        epsilon=None,
        f_scale=f_scale,
        eps_prime=float(eps_prime),
        nodes=int(nodes),
        order=int(order),
        gamma=gamma,
        aa_repetitions=aa_repetitions,
    )
    # Reuse the contour plan validation (powers of two, beta range).
    ContourPlan(beta, plan.nodes, plan.order, plan.eps_prime, fs.radius)
    return plan


def build_xprime_state(aprime_scaled, bprime, m_nodes: int):
    """Exact normalized solution of the (scaled) block system.

    Returns (state, p, raw_norm): the unit solution state, the block-norm
    fractions p_k = ||x_k|| / ||x'|| with sum p_k^2 = 1, and the norm of
    the unnormalized solution of the system as given.
    """
    x = lu_solve(aprime_scaled, bprime)
    raw = float(np.linalg.norm(x))
    state = normalize(x)
    blocks = state.reshape(m_nodes, -1)
    p = np.linalg.norm(blocks, axis=1)
    return state, p, raw


def inject_error(state, eps_prime: float, seed: int) -> np.ndarray:
    """A unit state at distance exactly eps_prime from `state`.

    Rotates by phi = 2 arcsin(eps'/2) toward a seeded random direction that
    has been orthogonalized against the input, so the returned state is
    unit-norm and || out - state || = eps' to machine precision.
    """
    state = as_vector(state)
    if not 0.0 <= eps_prime <= 2.0:
        raise ValueError("eps_prime must lie in [0, 2]")
    if eps_prime == 0.0:
        return state.copy()
    phi = 2.0 * math.asin(eps_prime / 2.0)
    n = state.shape[0]
    if n == 1:
        return state * complex(math.cos(phi), math.sin(phi))
    rng = SplitMix64(seed)
    while True:
        u = rng.unit_vector(n)
        u = u - np.vdot(state, u) * state
        nu = float(np.linalg.norm(u))
        if nu > 1e-12:
            break
    u = u / nu
    return math.cos(phi) * state + math.sin(phi) * u


def _hadamard_average(state: np.ndarray) -> np.ndarray:
    """Apply the tensor-power Hadamard on the leading (node) axis in place."""
    m = state.shape[0]
    inv = 1.0 / math.sqrt(2.0)
    h = 1
    while h < m:
        for start in range(0, m, 2 * h):
            top = state[start : start + h].copy()
            bot = state[start + h : start + 2 * h]
            state[start : start + h] = (top + bot) * inv
            state[start + h : start + 2 * h] = (top - bot) * inv
        h *= 2
    return state


def error_bound(
    f_scale: float, beta: float, r: float, nodes: int, order: int,
    eps_prime: float,
) -> float:
    """Certified bound on || |f> - |f~> || for the given stage budgets."""
    if f_scale <= 0.0:
        raise ValueError("F must be positive")
    b1 = beta ** (-float(nodes))
    rm = r ** float(nodes)
    if not (b1 < 1.0 and rm < 1.0):
        raise DegenerateBound("need beta > 1 and r < 1 for the bound")
    rl = r ** float(order)
    return (2.0 / f_scale) * (
        b1 / (1.0 - b1) + rm / (1.0 - rm) + eps_prime + rl / (1.0 - r)
    )


def success_lower_bound(f_scale: float, r: float) -> float:
    """(3 F (1-r) / 4)^2, the guaranteed post-selection probability."""
    return (0.75 * f_scale * (1.0 - r)) ** 2


def run_algorithm(
    fs: FunctionSpec, a, b, plan: ParameterPlan, beta: float, seed: int,
    scale_c: float = DEFAULT_SCALE_C, keep_internals: bool = True,
) -> RunReport:
    """Execute the four pipeline stages and measure everything.

    Preconditions: spectral norm of `a` at most one (NormTooLarge otherwise)
    and unit-norm `b`.  Deterministic given (inputs, seed).
    """
    a = as_matrix(a)
    b = as_vector(b)
    if abs(float(np.linalg.norm(b)) - 1.0) > 1e-9:
        raise ValueError("b must be a unit-norm state")
    norm_a = spectral_norm(a)
    if norm_a > 1.0 + 1e-9:
        raise NormTooLarge(
            "spectral norm %.12g exceeds 1; rescale the matrix first" % norm_a
        )
    n = a.shape[0]
    m_nodes, order = plan.nodes, plan.order
    if n * m_nodes > size_cap():
        raise SizeCap(
            "N*M = %d exceeds the size cap %d" % (n * m_nodes, size_cap())
        )
    if n * m_nodes * order > _REGISTER_CAP:
        raise SizeCap(
            "register of %d amplitudes exceeds the cap %d"
            % (n * m_nodes * order, _REGISTER_CAP)
        )

    # Stage 1: solve the scaled block system through the oracle interface.
    oracle = SparseOracle(a, b)
    block = BlockOracle(oracle, m_nodes, beta)
    aprime = block.to_dense()
    ascaled = scale_system(aprime, scale_c, beta)
    bstate = block.rhs_state()
    xstate, block_norms, raw = build_xprime_state(ascaled, bstate, m_nodes)
    # b' = (1,..,1) (x) b has norm sqrt(M), and the scaled solve returned
    # c * A'^{-1} b' / sqrt(M); undo both factors for the raw solution norm.
    raw_solution_norm = math.sqrt(m_nodes) * raw / scale_c
    xtilde = inject_error(xstate, plan.eps_prime, seed)

    # Stage 2: adjoin the ancilla and apply the weighting unitary.
    table = lcu.truncate(fs, order, beta)
    unitary = lcu.build_unitary(table, m_nodes)
    register = np.zeros((m_nodes, n, order), dtype=np.complex128)
    register[:, :, 0] = xtilde.reshape(m_nodes, n)
    register = unitary.apply(register)

    # Stage 3: Hadamard-average the node register.
    register = _hadamard_average(register)

    # Stage 4: post-select on the all-zero node register and ancilla.
    surviving = register[0, :, 0]
    p_tilde = float(np.vdot(surviving, surviving).real)
    if p_tilde < 1e-20:
        raise NullProjection("post-selection probability %g" % p_tilde)
    post_state = surviving / math.sqrt(p_tilde)

    ref_state = normalize(taylor_apply(fs, a, b, _REF_TOL, norm_a=norm_a))
    error_measured = float(np.linalg.norm(ref_state - post_state))
    r = beta / fs.radius
    contour_plan = ContourPlan(beta, m_nodes, order, plan.eps_prime, fs.radius)

    internals = None
    if keep_internals:
        internals = RunInternals(
            xprime_state=xstate,
            xtilde_state=xtilde,
            block_norms=block_norms,
            raw_solution_norm=raw_solution_norm,
            weights_exact=node_weights(fs, m_nodes, beta),
            weights_truncated=np.array(
                [lcu.weight(table, k, m_nodes) for k in range(m_nodes)],
                dtype=np.complex128,
            ),
            ctilde=table.ctilde,
        )

    return RunReport(
        success_prob=p_tilde,
        success_lower_bound=success_lower_bound(plan.f_scale, r),
        error_measured=error_measured,
        error_bound=error_bound(
            plan.f_scale, beta, r, m_nodes, order, plan.eps_prime
        ),
        trunc_bound=truncation_bound(fs, min(norm_a, 1.0), contour_plan),
        f_scale=plan.f_scale,
        beta=beta,
        r=r,
        nodes=m_nodes,
        order=order,
        eps_prime=plan.eps_prime,
        aa_repetitions=plan.aa_repetitions,
        gate_estimate=lcu.gate_count_estimate(m_nodes, order),
        query_counts=oracle.counts(),
        seed=seed,
        post_state=post_state,
        ref_state=ref_state,
        internals=internals,
    )


def saturated_order(fs: FunctionSpec, beta: float, f_scale: float,
                    tol: float = 1e-12) -> int:
    """Smallest power-of-two L whose weight-truncation error term is < tol."""
    r = beta / fs.radius
    order = 2
    while (2.0 / f_scale) * r**order / (1.0 - r) > tol:
        order *= 2
        if order > PARAMETER_CAP:
            raise InfeasibleTarget("saturated truncation order exceeds the cap")
    return order


def minimal_nodes_for_error(
    fs: FunctionSpec, a, b, beta: float, epsilon: float, f_scale: float,
    order=None,
):
    """Smallest power-of-two M with measured error <= epsilon (eps' = 0).

    Returns (nodes, report) for the first M that meets the target; raises
    InfeasibleTarget past the parameter cap.
    """
    if order is None:
        order = saturated_order(fs, beta, f_scale)
    m_nodes = 2
    while True:
        plan = manual_plan(fs, beta, f_scale, m_nodes, order, 0.0)
        report = run_algorithm(fs, a, b, plan, beta, seed=0, keep_internals=False)
        if report.error_measured <= epsilon:
            return m_nodes, report
        m_nodes *= 2
        if m_nodes > PARAMETER_CAP:
            raise InfeasibleTarget(
                "no power-of-two M at or below %d meets epsilon=%g"
                % (PARAMETER_CAP, epsilon)
            )
