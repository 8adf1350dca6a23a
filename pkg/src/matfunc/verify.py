"""Named invariant checks over seeded random instances.

Each check validates one proven property of the pipeline (a norm bound, an
amplitude law, an error or probability guarantee) on freshly generated
instances.  The CLI `verify` command runs them and prints one PASS/FAIL
line per check; everything is deterministic given the seed.

These are quick-running versions; the exhaustive parameter grids live in
the acceptance test suite.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from . import lcu, pipeline
from .blocksys import BlockOracle, SparseOracle, assemble_blockdiag, condition_bounds, hermitian_dilation, scale_system
from .contour import ContourPlan, contour_apply, contour_matrix, periodized_indicator, truncation_bound
from .numkernel import (
    FunctionSpec,
    lu_factor,
    lu_solve,
    normalize,
    normalized_distance,
    spectral_norm,
    taylor_apply,
    taylor_matrix,
)
from .rng import SplitMix64


class CheckFailure(AssertionError):
    pass


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _require(cond: bool, msg: str):
    if not cond:
        raise CheckFailure(msg)


def _unit_norm_matrix(rng: SplitMix64, n: int, hermitian: bool) -> np.ndarray:
    g = rng.hermitian_matrix(n) if hermitian else rng.complex_matrix(n)
    return g / spectral_norm(g)


def _function_set():
    return (
        FunctionSpec.exp(2.0),
        FunctionSpec.cos(2.0),
        FunctionSpec.geometric(3.0, 2.0),
    )


# -- numkernel ----------------------------------------------------------------


def check_lu_residual(rng):
    worst = 0.0
    for n in (4, 8, 16):
        a = rng.complex_matrix(n) + 3.0 * np.eye(n)
        b = rng.complex_vector(n)
        x = lu_solve(a, b)
        res = np.linalg.norm(a @ x - b) / np.linalg.norm(b)
        worst = max(worst, res)
        _require(res <= 1e-10, "relative residual %g at n=%d" % (res, n))
    return "max relative residual %.2e" % worst


def check_normalized_distance_bound(rng):
    for _ in range(1000):
        n = 2 + rng.next_u64() % 7
        v = rng.complex_vector(n)
        w = rng.complex_vector(n)
        nv = np.linalg.norm(v)
        if nv <= 1e-6 or np.linalg.norm(w) < 1e-300:
            continue
        lhs = normalized_distance(v, w)
        rhs = 2.0 * np.linalg.norm(v - w) / nv
        _require(lhs <= rhs + 1e-12, "distance %g above bound %g" % (lhs, rhs))
    return "1000 random pairs"


def check_cauchy_coefficient_bound(rng):
    specs = list(_function_set()) + [
        FunctionSpec.sin(2.0),
        FunctionSpec.polynomial([1.0, -0.5, 0.25j, 0.125], 2.0),
        FunctionSpec.custom([0.3, 0.0, 1.0j, -2.0], 1.5),
    ]
    for fs in specs:
        for j in range(65):
            bound = fs.disk_max / fs.radius**j
            _require(
                abs(fs.coeff(j)) <= bound + 1e-12,
                "kind=%s j=%d: |a_j|=%g above B/R^j=%g"
                % (fs.kind, j, abs(fs.coeff(j)), bound),
            )
    return "%d specs, j <= 64" % len(specs)


def check_series_tolerance_consistency(rng):
    fs = FunctionSpec.exp(2.0)
    a = _unit_norm_matrix(rng, 6, hermitian=False)
    b = rng.unit_vector(6)
    for tol in (1e-6, 1e-8, 1e-10):
        v1 = taylor_apply(fs, a, b, tol)
        v2 = taylor_apply(fs, a, b, tol / 2.0)
        gap = np.linalg.norm(v1 - v2)
        _require(gap <= tol + tol / 2.0, "tol halving moved output by %g" % gap)
    return "tolerances 1e-6 .. 1e-10"


def check_norm_homogeneity(rng):
    for n in (4, 8):
        a = rng.complex_matrix(n)
        base = spectral_norm(a)
        for alpha in (0.5, -2.0, 1.5j):
            scaled = spectral_norm(alpha * a)
            _require(
                abs(scaled - abs(alpha) * base) <= 1e-9 * max(1.0, base),
                "norm(alpha A) = %g vs |alpha| norm(A) = %g"
                % (scaled, abs(alpha) * base),
            )
    return "n in {4, 8}, three scalars"


# -- contour ------------------------------------------------------------------


def check_indicator_divisibility(rng):
    for m in (2, 4, 8, 16):
        for y in range(-64, 65):
            want = 1.0 if y % m == 0 else 0.0
            got = periodized_indicator(m, y)
            _require(got == want, "S_%d(%d) = %g" % (m, y, got))
    return "M in {2,4,8,16}, y in [-64, 64]"


def check_trapezoid_error_bound(rng):
    count = 0
    for idx in range(6):
        n = (4, 8, 16)[idx % 3]
        a = _unit_norm_matrix(rng, n, hermitian=idx < 3)
        for fs in _function_set():
            exact = taylor_matrix(fs, a, 1e-13, norm_a=1.0)
            for beta in (1.2, 1.5):
                for m in (4, 16):
                    plan = ContourPlan(beta, m, 2, 0.0, fs.radius)
                    approx = contour_matrix(fs, a, plan)
                    err = spectral_norm(exact - approx)
                    bound = truncation_bound(fs, 1.0, plan)
                    _require(
                        err <= bound + 1e-9,
                        "err %g above bound %g (n=%d %s beta=%g M=%d)"
                        % (err, bound, n, fs.kind, beta, m),
                    )
                    count += 1
    return "%d cases" % count


def check_geometric_decay(rng):
    a = _unit_norm_matrix(rng, 8, hermitian=False)
    fs = FunctionSpec.exp(2.0)
    for beta in (1.2, 1.5):
        r = beta / fs.radius
        rate = max(1.0 / beta, r)
        exact = taylor_matrix(fs, a, 1e-13, norm_a=1.0)
        for m in (4, 8, 16):
            e1 = spectral_norm(exact - contour_matrix(fs, a, ContourPlan(beta, m, 2, 0.0, fs.radius)))
            e2 = spectral_norm(exact - contour_matrix(fs, a, ContourPlan(beta, 2 * m, 2, 0.0, fs.radius)))
            _require(
                e2 <= e1 * (rate**m + 1e-9) * 2.0,
                "error(%d)=%g vs error(%d)=%g decays slower than rate %g"
                % (2 * m, e2, m, e1, rate),
            )
    return "beta in {1.2, 1.5}, M in {4, 8, 16}"


def check_columnwise_consistency(rng):
    fs = FunctionSpec.cos(2.0)
    a = _unit_norm_matrix(rng, 6, hermitian=False)
    b = rng.unit_vector(6)
    plan = ContourPlan(1.4, 8, 2, 0.0, fs.radius)
    via_vec = contour_apply(fs, a, b, plan)
    via_mat = contour_matrix(fs, a, plan) @ b
    gap = np.linalg.norm(via_vec - via_mat)
    _require(gap <= 1e-10, "apply vs matrix-times-b gap %g" % gap)
    return "gap %.2e" % gap


# -- blocksys -----------------------------------------------------------------


def check_block_norm_bounds(rng):
    for idx in range(4):
        n = (4, 8)[idx % 2]
        a = _unit_norm_matrix(rng, n, hermitian=idx < 2)
        for beta in (1.2, 1.5, 2.0):
            bound_fwd, bound_inv, bound_cond = condition_bounds(beta)
            for m in (2, 4, 8):
                ap = assemble_blockdiag(a, beta, m)
                fwd = spectral_norm(ap)
                inv = spectral_norm(lu_factor(ap).solve(np.eye(n * m, dtype=np.complex128)))
                _require(fwd <= bound_fwd + 1e-9, "||A'|| = %g > %g" % (fwd, bound_fwd))
                _require(inv <= bound_inv + 1e-9, "||A'^-1|| = %g > %g" % (inv, bound_inv))
                _require(
                    fwd * inv < bound_cond + 1e-9,
                    "condition %g not below %g" % (fwd * inv, bound_cond),
                )
    return "4 matrices x 3 betas x 3 block counts"


def check_oracle_matches_dense(rng):
    for n in (2, 4):
        a = rng.complex_matrix(n)
        a[0, -1] = 0  # give the pattern a structural hole
        b = rng.unit_vector(n)
        for m in (1, 2, 4):
            dense = assemble_blockdiag(a, 1.3, m)
            block = BlockOracle(SparseOracle(a, b), m, 1.3)
            for kk in range(m):
                for kp in range(m):
                    for i in range(n):
                        for j in range(n):
                            got = block.entry((kk, i), (kp, j))
                            want = dense[kk * n + i, kp * n + j]
                            _require(
                                got == want,
                                "entry mismatch at %r" % (((kk, i), (kp, j)),),
                            )
    return "exhaustive N <= 4, M <= 4"


def check_oracle_query_accounting(rng):
    a = rng.complex_matrix(4)
    b = rng.unit_vector(4)
    base = SparseOracle(a, b)
    block = BlockOracle(base, 4, 1.5)
    for kk in range(4):
        for i in range(4):
            for j in range(4):
                before = base.entry_queries
                block.entry((kk, i), (kk, j))
                _require(
                    base.entry_queries == before + 1,
                    "diagonal-block query cost %d base queries"
                    % (base.entry_queries - before),
                )
                before = base.entry_queries
                block.entry((kk, i), ((kk + 1) % 4, j))
                _require(
                    base.entry_queries == before,
                    "off-diagonal query touched the base oracle",
                )
    return "4^3 diagonal and off-diagonal probes"


def check_oracle_pattern(rng):
    a = rng.complex_matrix(4)
    a[1, 2] = 0
    a[3, 0] = 0
    a[2, 2] = 0  # structurally kept: diagonal
    b = rng.unit_vector(4)
    base = SparseOracle(a, b)
    block = BlockOracle(base, 2, 1.5)
    n = 4
    expected = set()
    for i in range(n):
        for j in range(n):
            if a[i, j] != 0 or i == j:
                for k in range(2):
                    expected.add((k * n + i, k * n + j))
    got = set()
    for k in range(2):
        for j in range(n):
            for ell in range(base.column_nnz(j)):
                kk, i = block.position((k, j), ell)
                got.add((kk * n + i, k * n + j))
    _require(got == expected, "pattern mismatch: %r vs %r" % (got, expected))
    return "%d structural nonzeros" % len(expected)


def check_dilation_solve(rng):
    for _ in range(5):
        n = 6
        a = rng.complex_matrix(n) + 3.0 * np.eye(n)
        b = rng.complex_vector(n)
        dil, rhs = hermitian_dilation(a, b)
        _require(np.array_equal(dil, dil.conj().T), "dilation is not Hermitian")
        full = lu_solve(dil, rhs)
        direct = lu_solve(a, b)
        _require(
            np.linalg.norm(full[n:] - direct) <= 1e-9,
            "dilated lower block differs by %g" % np.linalg.norm(full[n:] - direct),
        )
        _require(
            np.linalg.norm(full[:n]) <= 1e-9,
            "dilated upper block has norm %g" % np.linalg.norm(full[:n]),
        )
    return "5 random systems"


def check_scaled_solution_invariance(rng):
    a = _unit_norm_matrix(rng, 4, hermitian=False)
    b = rng.unit_vector(4)
    beta = 1.5
    ap = assemble_blockdiag(a, beta, 4)
    rhs = np.tile(b, 4)
    x1 = normalize(lu_solve(ap, rhs))
    x2 = normalize(lu_solve(scale_system(ap, 2.0, beta), rhs))
    gap = np.linalg.norm(x1 - x2)
    _require(gap <= 1e-10, "scaled and unscaled states differ by %g" % gap)
    return "gap %.2e" % gap


# -- lcu ----------------------------------------------------------------------


def _lcu_cases():
    return (
        (FunctionSpec.exp(2.0), 1.2),
        (FunctionSpec.cos(2.0), 1.4),
        (FunctionSpec.sin(2.0), 1.4),
        (FunctionSpec.geometric(3.0, 2.0), 1.2),
    )


def check_lcu_unitarity(rng):
    for fs, beta in _lcu_cases():
        for m in (2, 8):
            for order in (4, 16):
                u = lcu.build_unitary(lcu.truncate(fs, order, beta), m).matrix()
                gap = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))
                _require(gap <= 1e-10, "||U^H U - I||_F = %g (%s)" % (gap, fs.kind))
    return "4 functions x 2 M x 2 L (Frobenius bound)"


def check_lcu_amplitude_law(rng):
    for fs, beta in _lcu_cases():
        for m in (2, 4, 8):
            order = 8
            table = lcu.truncate(fs, order, beta)
            u = lcu.build_unitary(table, m).matrix()
            for k in range(m):
                got = u[k * order, k * order]
                want = table.ctilde * lcu.weight(table, k, m)
                _require(
                    abs(got - want) <= 1e-10,
                    "amplitude at k=%d: %r vs %r (%s)" % (k, got, want, fs.kind),
                )
    return "all k at M in {2,4,8}, L=8"


def check_lcu_residual_norm_law(rng):
    fs, beta = FunctionSpec.exp(2.0), 1.3
    m, order = 4, 8
    table = lcu.truncate(fs, order, beta)
    u = lcu.build_unitary(table, m).matrix()
    for k in range(m):
        col = u[:, k * order]
        amp = col[k * order]
        residual = float(np.linalg.norm(col) ** 2 - abs(amp) ** 2)
        want = 1.0 - abs(table.ctilde * lcu.weight(table, k, m)) ** 2
        _require(
            abs(residual - want) <= 1e-10,
            "leak norm at k=%d: %g vs %g" % (k, residual, want),
        )
    return "orthogonal leakage matches 1 - |C~ g~_k|^2"


def check_lcu_weight_truncation(rng):
    from .contour import node_weights

    for fs, beta in _lcu_cases():
        r = beta / fs.radius
        for order in (8, 16):
            table = lcu.truncate(fs, order, beta)
            m = 8
            exact = node_weights(fs, m, beta)
            bound = fs.disk_max * r**order / (1.0 - r)
            for k in range(m):
                gap = abs(exact[k] - lcu.weight(table, k, m))
                _require(
                    gap <= bound + 1e-12,
                    "|g - g~| = %g above %g (%s L=%d)" % (gap, bound, fs.kind, order),
                )
    return "4 functions, L in {8, 16}"


def check_lcu_phase_factorization(rng):
    for m in (2, 4, 16):
        for order in (2, 8, 16):
            direct = lcu.v_diagonal(m, order)
            factored = lcu.v_diagonal_factored(m, order)
            gap = float(np.max(np.abs(direct - factored)))
            _require(gap <= 1e-10, "factorization gap %g at M=%d L=%d" % (gap, m, order))
    return "M, L in {2, 8/4, 16}"


# -- pipeline -----------------------------------------------------------------


def _pipeline_instance(rng, n=4, hermitian=True, fs=None, beta=None):
    fs = fs or FunctionSpec.exp(2.0)
    beta = beta or math.sqrt(fs.radius)
    a = _unit_norm_matrix(rng, n, hermitian=hermitian)
    b = rng.unit_vector(n)
    f_scale = pipeline.compute_F(fs, a, b, beta)
    return fs, a, b, beta, f_scale


def check_pipeline_error_within_target(rng):
    fs, a, b, beta, f = _pipeline_instance(rng, n=4, hermitian=False)
    for eps in (0.25, 0.05):
        plan = pipeline.select_parameters(fs, beta, f, eps)
        for seed in (1, 2):
            rep = pipeline.run_algorithm(fs, a, b, plan, beta, seed)
            _require(
                rep.error_measured <= eps,
                "measured error %g above target %g" % (rep.error_measured, eps),
            )
    return "eps in {0.25, 0.05}, two seeds"


def check_pipeline_error_bound(rng):
    fs, a, b, beta, f = _pipeline_instance(rng, n=4, hermitian=True, fs=FunctionSpec.cos(2.0))
    plan = pipeline.select_parameters(fs, beta, f, 0.1)
    rep = pipeline.run_algorithm(fs, a, b, plan, beta, seed=9)
    _require(
        rep.error_measured <= rep.error_bound + 1e-9,
        "error %g above bound %g" % (rep.error_measured, rep.error_bound),
    )
    return "error %.2e <= bound %.2e" % (rep.error_measured, rep.error_bound)


def check_pipeline_success_probability(rng):
    fs, a, b, beta, f = _pipeline_instance(rng, n=4, hermitian=True)
    plan = pipeline.select_parameters(fs, beta, f, 0.2)
    rep = pipeline.run_algorithm(fs, a, b, plan, beta, seed=5)
    _require(
        rep.success_prob >= rep.success_lower_bound - 1e-9,
        "p~ = %g below %g" % (rep.success_prob, rep.success_lower_bound),
    )
    return "p~ %.3e >= %.3e" % (rep.success_prob, rep.success_lower_bound)


def check_pipeline_projection_identity(rng):
    fs, a, b, beta, f = _pipeline_instance(rng, n=4, hermitian=False)
    plan = pipeline.select_parameters(fs, beta, f, 0.1)
    rep = pipeline.run_algorithm(fs, a, b, plan, beta, seed=12)
    ins = rep.internals
    blocks = ins.xtilde_state.reshape(plan.nodes, -1)
    fvec = (ins.weights_truncated[:, None] * blocks).sum(axis=0)
    want = ins.ctilde**2 * float(np.linalg.norm(fvec)) ** 2 / plan.nodes
    _require(
        abs(rep.success_prob - want) <= 1e-10,
        "p~ = %.15g but C~^2 ||f~_M||^2 / M = %.15g" % (rep.success_prob, want),
    )
    return "identity to %.1e" % abs(rep.success_prob - want)


def check_pipeline_weighted_sum_gap(rng):
    fs, a, b, beta, f = _pipeline_instance(rng, n=4, hermitian=True)
    plan = pipeline.select_parameters(fs, beta, f, 0.1)
    rep = pipeline.run_algorithm(fs, a, b, plan, beta, seed=21)
    ins = rep.internals
    m = plan.nodes
    exact_blocks = ins.xprime_state.reshape(m, -1)
    tilde_blocks = ins.xtilde_state.reshape(m, -1)
    fm = (ins.weights_exact[:, None] * exact_blocks).sum(axis=0)
    ftilde = (ins.weights_truncated[:, None] * tilde_blocks).sum(axis=0)
    gap = float(np.linalg.norm(fm - ftilde))
    r = beta / fs.radius
    bound = math.sqrt(m) * fs.disk_max * (plan.eps_prime + r**plan.order / (1.0 - r))
    _require(gap <= bound + 1e-9, "weighted-sum gap %g above %g" % (gap, bound))
    return "gap %.2e <= %.2e" % (gap, bound)


def check_pipeline_node_average_gap(rng):
    fs, a, b, beta, f = _pipeline_instance(rng, n=4, hermitian=False)
    plan = pipeline.select_parameters(fs, beta, f, 0.1)
    rep = pipeline.run_algorithm(fs, a, b, plan, beta, seed=33)
    ins = rep.internals
    m = plan.nodes
    s = ins.raw_solution_norm
    fvec = (m / s) * taylor_apply(fs, a, b, 1e-13)
    # Unit-state blocks scaled by s are the raw solution blocks x_k.
    raw_blocks = ins.xprime_state.reshape(m, -1) * s
    fmvec = (ins.weights_exact[:, None] * raw_blocks).sum(axis=0) / s
    plan_c = ContourPlan(beta, m, plan.order, plan.eps_prime, fs.radius)
    bound = (m / s) * truncation_bound(fs, 1.0, plan_c)  # ||b|| = 1
    gap = float(np.linalg.norm(fvec - fmvec))
    _require(gap <= bound + 1e-9, "node-average gap %g above %g" % (gap, bound))
    return "gap %.2e <= %.2e" % (gap, bound)


def check_pipeline_exactness_collapse(rng):
    fs, a, b, beta, f = _pipeline_instance(rng, n=4, hermitian=True)
    order = pipeline.saturated_order(fs, beta, f, tol=1e-13)
    plan = pipeline.manual_plan(fs, beta, f, 16, order, 0.0)
    rep = pipeline.run_algorithm(fs, a, b, plan, beta, seed=0)
    plan_c = ContourPlan(beta, 16, order, 0.0, fs.radius)
    want = normalize(contour_apply(fs, a, b, plan_c))
    gap = float(np.linalg.norm(rep.post_state - want))
    _require(gap <= 1e-10, "collapse to quadrature state off by %g" % gap)
    plan2 = pipeline.manual_plan(fs, beta, f, 256, order, 0.0)
    rep2 = pipeline.run_algorithm(fs, a, b, plan2, beta, seed=0)
    _require(
        rep2.error_measured <= 1e-9,
        "large-M run still %g from the reference" % rep2.error_measured,
    )
    return "quadrature gap %.1e; large-M error %.1e" % (gap, rep2.error_measured)


def check_pipeline_injection_distance(rng):
    state = rng.unit_vector(12)
    for eps in (0.0, 0.05, 0.7, 2.0):
        out = pipeline.inject_error(state, eps, 42)
        dist = float(np.linalg.norm(out - state))
        _require(abs(dist - eps) <= 1e-12, "distance %.15g for eps'=%g" % (dist, eps))
        _require(abs(float(np.linalg.norm(out)) - 1.0) <= 1e-12, "output not unit")
    return "eps' in {0, 0.05, 0.7, 2}"


def check_pipeline_nodes_scaling(rng):
    fs, a, b, beta, f = _pipeline_instance(rng, n=4, hermitian=True)
    prev = 0
    for eps in (2.0**-2, 2.0**-6, 2.0**-10):
        m_min, _ = pipeline.minimal_nodes_for_error(fs, a, b, beta, eps, f)
        theory = pipeline.select_parameters(fs, beta, f, eps).nodes
        _require(m_min >= prev, "minimal M not monotone")
        _require(m_min <= theory, "minimal M=%d above theory M=%d" % (m_min, theory))
        prev = m_min
    return "eps in {2^-2, 2^-6, 2^-10}"


_CHECKS = (
    ("numkernel:lu-residual", check_lu_residual),
    ("numkernel:normalized-distance-bound", check_normalized_distance_bound),
    ("numkernel:cauchy-coefficient-bound", check_cauchy_coefficient_bound),
    ("numkernel:series-tolerance-consistency", check_series_tolerance_consistency),
    ("numkernel:norm-homogeneity", check_norm_homogeneity),
    ("contour:indicator-divisibility", check_indicator_divisibility),
    ("contour:trapezoid-error-bound", check_trapezoid_error_bound),
    ("contour:geometric-decay", check_geometric_decay),
    ("contour:columnwise-consistency", check_columnwise_consistency),
    ("blocksys:norm-bounds", check_block_norm_bounds),
    ("blocksys:oracle-matches-dense", check_oracle_matches_dense),
    ("blocksys:oracle-query-accounting", check_oracle_query_accounting),
    ("blocksys:oracle-pattern", check_oracle_pattern),
    ("blocksys:dilation-solve", check_dilation_solve),
    ("blocksys:scaled-solution-invariance", check_scaled_solution_invariance),
    ("lcu:unitarity", check_lcu_unitarity),
    ("lcu:amplitude-law", check_lcu_amplitude_law),
    ("lcu:residual-norm-law", check_lcu_residual_norm_law),
    ("lcu:weight-truncation", check_lcu_weight_truncation),
    ("lcu:phase-factorization", check_lcu_phase_factorization),
    ("pipeline:error-within-target", check_pipeline_error_within_target),
    ("pipeline:error-bound", check_pipeline_error_bound),
    ("pipeline:success-probability", check_pipeline_success_probability),
    ("pipeline:projection-identity", check_pipeline_projection_identity),
    ("pipeline:weighted-sum-gap", check_pipeline_weighted_sum_gap),
    ("pipeline:node-average-gap", check_pipeline_node_average_gap),
    ("pipeline:exactness-collapse", check_pipeline_exactness_collapse),
    ("pipeline:injection-distance", check_pipeline_injection_distance),
    ("pipeline:nodes-scaling", check_pipeline_nodes_scaling),
)


def available_groups() -> tuple:
    return tuple(sorted({name.split(":", 1)[0] for name, _ in _CHECKS}))


def run_checks(seed: int, only: str | None = None) -> list:
    """Run the registry (optionally one module group) and collect results."""
    if only is not None and only not in available_groups():
        raise KeyError(only)
    results = []
    for offset, (name, fn) in enumerate(_CHECKS):
        if only is not None and not name.startswith(only + ":"):
            continue
        rng = SplitMix64((seed << 8) ^ offset)
        try:
            detail = fn(rng)
            results.append(CheckResult(name, True, detail or ""))
        except CheckFailure as exc:
            results.append(CheckResult(name, False, str(exc)))
    return results
