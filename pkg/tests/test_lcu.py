import cmath
import math

import numpy as np
import pytest

from matfunc.contour import node_weights
from matfunc.errors import BadM, ZeroFunction
from matfunc.lcu import (
    build_unitary,
    gate_count_estimate,
    truncate,
    v_diagonal,
    v_diagonal_factored,
    weight,
)
from matfunc.numkernel import FunctionSpec

from conftest import catalog_functions


class TestTruncate:
    def test_linear_function(self):
        fs = FunctionSpec.polynomial([0.0, 1.0], 2.0)
        table = truncate(fs, 2, 1.5)
        assert table.coeffs == (0j, 1 + 0j)
        assert table.alpha == pytest.approx(1.5)
        assert table.ctilde == pytest.approx(2.0 / 3.0)

    def test_exp_alpha_is_eight_thirds(self):
        table = truncate(FunctionSpec.exp(2.0), 4, 1.0)
        assert table.alpha == pytest.approx(8.0 / 3.0, abs=1e-15)

    def test_geometric_alpha_oracle(self):
        # Oracle: direct summation of (beta/3)^j for j < 8.
        table = truncate(FunctionSpec.geometric(3.0, 2.0), 8, 1.2)
        want = sum((1.2 / 3.0) ** j for j in range(8))
        assert table.alpha == pytest.approx(want, rel=1e-15)

    def test_zero_function(self):
        # sin keeps no nonzero coefficient below order 1
        with pytest.raises(ZeroFunction):
            truncate(FunctionSpec.sin(2.0), 1, 1.2)

    def test_power_of_two_enforced(self):
        with pytest.raises(BadM):
            truncate(FunctionSpec.exp(2.0), 3, 1.2)

    def test_beta_below_radius_enforced(self):
        with pytest.raises(ValueError):
            truncate(FunctionSpec.exp(2.0), 4, 2.5)

    def test_alpha_cauchy_bound(self):
        for fs in catalog_functions():
            for beta in (1.2, 1.5):
                for order in (4, 16, 64):
                    try:
                        table = truncate(fs, order, beta)
                    except ZeroFunction:
                        continue
                    r = beta / fs.radius
                    assert table.alpha <= fs.disk_max / (1.0 - r) + 1e-9


class TestWeight:
    def test_linear_at_zero_angle(self):
        fs = FunctionSpec.polynomial([0.0, 1.0], 2.0)
        table = truncate(fs, 2, 1.5)
        assert weight(table, 0, 4) == pytest.approx(1.5)

    def test_linear_unit_scaled_magnitude(self):
        fs = FunctionSpec.polynomial([0.0, 1.0], 2.0)
        table = truncate(fs, 2, 1.5)
        for m in (2, 4, 8):
            for k in range(m):
                assert abs(table.ctilde * weight(table, k, m)) == pytest.approx(1.0, abs=1e-14)

    def test_exp_at_pi(self):
        table = truncate(FunctionSpec.exp(2.0), 8, 1.0)
        want = -sum((-1.0) ** j / math.factorial(j) for j in range(8))
        assert weight(table, 4, 8) == pytest.approx(want, abs=1e-15)

    def test_scaled_magnitude_at_most_one(self):
        for fs in catalog_functions():
            table = truncate(fs, 16, 1.3)
            for k in range(8):
                assert abs(table.ctilde * weight(table, k, 8)) <= 1.0 + 1e-12

    def test_index_range(self):
        table = truncate(FunctionSpec.exp(2.0), 4, 1.2)
        with pytest.raises(ValueError):
            weight(table, 4, 4)


class TestBuildUnitary:
    def test_prep_vector_unit_and_first_column(self):
        for fs in catalog_functions():
            u = build_unitary(truncate(fs, 8, 1.3), 4)
            assert np.linalg.norm(u.w) == pytest.approx(1.0, abs=1e-12)
            assert np.allclose(u.prep[:, 0], u.w, atol=1e-14)
            eye = np.eye(8)
            assert np.linalg.norm(u.prep.conj().T @ u.prep - eye) <= 1e-12

    def test_constant_function_amplitudes(self):
        fs = FunctionSpec.polynomial([1.0], 2.0)
        m, order = 4, 2
        u = build_unitary(truncate(fs, order, 1.5), m)
        mat = u.matrix()
        for k in range(m):
            amp = mat[k * order, k * order]
            assert amp == pytest.approx(cmath.exp(2j * math.pi * k / m), abs=1e-12)
            assert abs(amp) == pytest.approx(1.0, abs=1e-12)

    def test_linear_function_amplitudes(self):
        fs = FunctionSpec.polynomial([0.0, 1.0], 2.0)
        m, order = 8, 2
        u = build_unitary(truncate(fs, order, 1.5), m)
        mat = u.matrix()
        for k in range(m):
            amp = mat[k * order, k * order]
            assert amp == pytest.approx(cmath.exp(4j * math.pi * k / m), abs=1e-12)
            assert abs(amp) == pytest.approx(1.0, abs=1e-12)

    def test_exp_amplitudes_against_weight_and_closed_form(self):
        fs = FunctionSpec.exp(2.0)
        m, order, beta = 4, 4, 1.2
        table = truncate(fs, order, beta)
        mat = build_unitary(table, m).matrix()
        for k in range(m):
            amp = mat[k * order, k * order]
            # weight() is the oracle, itself cross-checked against the
            # truncated closed form below.
            want = table.ctilde * weight(table, k, m)
            assert amp == pytest.approx(want, abs=1e-10)
            theta = 2.0 * math.pi * k / m
            z = beta * cmath.exp(1j * theta)
            closed = sum(z**j / math.factorial(j) for j in range(order))
            assert want == pytest.approx(
                table.ctilde * closed * cmath.exp(1j * theta), abs=1e-12
            )

    def test_unitarity_grid(self):
        for fs in catalog_functions():
            for m in (2, 16):
                for order in (2, 16):
                    try:
                        table = truncate(fs, order, 1.3)
                    except ZeroFunction:
                        continue
                    mat = build_unitary(table, m).matrix()
                    gap = np.linalg.norm(mat.conj().T @ mat - np.eye(mat.shape[0]))
                    assert gap <= 1e-10

    def test_block_diagonal_over_nodes(self):
        table = truncate(FunctionSpec.exp(2.0), 4, 1.2)
        mat = build_unitary(table, 4).matrix()
        for k in range(4):
            for kp in range(4):
                if k == kp:
                    continue
                blk = mat[k * 4 : (k + 1) * 4, kp * 4 : (kp + 1) * 4]
                assert np.all(blk == 0)

    def test_residual_norm_law(self):
        fs = FunctionSpec.exp(2.0)
        m, order = 4, 8
        table = truncate(fs, order, 1.3)
        mat = build_unitary(table, m).matrix()
        for k in range(m):
            col = mat[:, k * order]
            amp = col[k * order]
            leak = float(np.linalg.norm(col) ** 2 - abs(amp) ** 2)
            want = 1.0 - abs(table.ctilde * weight(table, k, m)) ** 2
            assert leak == pytest.approx(want, abs=1e-10)

    def test_weight_truncation_law(self):
        # |g_k - g~_k| <= B r^L / (1 - r), with g_k from the certified series.
        for fs in catalog_functions():
            beta = 1.3
            r = beta / fs.radius
            exact = node_weights(fs, 8, beta)
            for order in (8, 16, 32):
                table = truncate(fs, order, beta)
                bound = fs.disk_max * r**order / (1.0 - r)
                for k in range(8):
                    assert abs(exact[k] - weight(table, k, 8)) <= bound + 1e-12

    def test_apply_matches_dense_matrix(self):
        rng_state = np.random.default_rng(5)
        m, n, order = 4, 3, 4
        table = truncate(FunctionSpec.exp(2.0), order, 1.2)
        u = build_unitary(table, m)
        state = rng_state.normal(size=(m, n, order)) + 1j * rng_state.normal(size=(m, n, order))
        dense = u.matrix()
        got = u.apply(state)
        for i in range(n):
            vec = state[:, i, :].reshape(m * order)
            want = dense @ vec
            assert np.allclose(got[:, i, :].reshape(m * order), want, atol=1e-12)


class TestPhaseFactorization:
    def test_direct_equals_factored(self):
        for m in (2, 4, 16):
            for order in (2, 8, 16):
                gap = np.max(np.abs(v_diagonal(m, order) - v_diagonal_factored(m, order)))
                assert gap <= 1e-10

    def test_diagonal_values(self):
        d = v_diagonal(4, 4)
        for k in range(4):
            for j in range(4):
                want = cmath.exp(2j * math.pi * k * (j + 1) / 4)
                assert d[k, j] == pytest.approx(want, abs=1e-15)


class TestGateCountEstimate:
    def test_small_cases(self):
        assert gate_count_estimate(2, 2) == 5
        assert gate_count_estimate(16, 8) == 28

    def test_roughly_linear_in_order(self):
        base = gate_count_estimate(16, 256)
        double = gate_count_estimate(16, 512)
        assert 1.8 <= double / base <= 2.2

    def test_power_of_two_enforced(self):
        with pytest.raises(BadM):
            gate_count_estimate(3, 4)
