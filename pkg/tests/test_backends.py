"""Agreement between the compiled kernels and the pure-Python fallback."""

import subprocess
import sys

import numpy as np
import pytest

from matfunc.backend import available, pykernels
from matfunc.rng import SplitMix64

compiled = available().get("cython")
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


@needs_compiled
class TestBackendParity:
    def test_lu_factor_identical(self):
        rng = SplitMix64(229)
        for n in (3, 8, 24):
            a = rng.complex_matrix(n)
            lu1, piv1, f1 = pykernels.lu_factor(a)
            lu2, piv2, f2 = compiled.lu_factor(a)
            assert f1 == f2 == -1
            assert np.array_equal(piv1, piv2)
            assert np.allclose(lu1, lu2, rtol=1e-13, atol=1e-15)

    def test_solve_agreement(self):
        rng = SplitMix64(233)
        for n in (4, 16):
            a = rng.complex_matrix(n)
            b = rng.complex_vector(n)
            x1 = pykernels.lu_solve_factored(*pykernels.lu_factor(a)[:2], b)
            x2 = compiled.lu_solve_factored(*compiled.lu_factor(a)[:2], b)
            assert np.allclose(x1, x2, rtol=1e-12, atol=1e-14)
            assert np.linalg.norm(a @ x2 - b) <= 1e-10 * np.linalg.norm(b)

    def test_multi_rhs_agreement(self):
        rng = SplitMix64(239)
        a = rng.complex_matrix(6)
        rhs = np.column_stack([rng.complex_vector(6) for _ in range(3)])
        x1 = pykernels.lu_solve_factored(*pykernels.lu_factor(a)[:2], rhs)
        x2 = compiled.lu_solve_factored(*compiled.lu_factor(a)[:2], rhs)
        assert x1.shape == x2.shape == (6, 3)
        assert np.allclose(x1, x2, rtol=1e-12, atol=1e-14)

    def test_singular_detection_agreement(self):
        a = np.zeros((3, 3), dtype=complex)
        a[0, 0] = 1.0
        assert pykernels.lu_factor(a)[2] == compiled.lu_factor(a)[2]

    def test_power_sigma_agreement(self):
        rng = SplitMix64(241)
        for n in (4, 12):
            a = rng.complex_matrix(n)
            s1, _, ok1 = pykernels.power_sigma(a, 1e-10, 10000)
            s2, _, ok2 = compiled.power_sigma(a, 1e-10, 10000)
            assert ok1 and ok2
            assert s1 == pytest.approx(s2, rel=1e-12)

    def test_power_sigma_zero_matrix(self):
        z = np.zeros((4, 4), dtype=complex)
        assert pykernels.power_sigma(z)[0] == compiled.power_sigma(z)[0] == 0.0


def test_python_backend_selectable_via_env():
    code = (
        "from matfunc.backend import BACKEND; "
        "import matfunc, numpy as np; "
        "x = matfunc.lu_solve(2*np.eye(2), np.array([1.0, 0.0])); "
        "print(BACKEND, x[0].real)"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"MATFUNC_BACKEND": "python", "PATH": "/usr/bin:/bin"},
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.split() == ["python", "0.5"]


def test_unknown_backend_rejected():
    proc = subprocess.run(
        [sys.executable, "-c", "import matfunc.backend"],
        capture_output=True,
        text=True,
        env={"MATFUNC_BACKEND": "fortran", "PATH": "/usr/bin:/bin"},
    )
    assert proc.returncode != 0
