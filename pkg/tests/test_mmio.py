import numpy as np
import pytest

from matfunc import mmio
from matfunc.rng import SplitMix64


def test_roundtrip_general_complex(tmp_path):
    rng = SplitMix64(107)
    a = rng.complex_matrix(5)
    a[0, 3] = 0.0
    path = tmp_path / "a.mtx"
    mmio.save_matrix_market(path, a)
    assert np.array_equal(mmio.load_matrix_market(path), a)


def test_symmetric_expansion(tmp_path):
    path = tmp_path / "s.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate complex symmetric\n"
        "% comment line\n"
        "2 2 2\n"
        "1 1 1.0 0.0\n"
        "2 1 2.0 3.0\n"
    )
    a = mmio.load_matrix_market(path)
    assert a[1, 0] == 2.0 + 3.0j
    assert a[0, 1] == 2.0 + 3.0j


def test_hermitian_expansion(tmp_path):
    path = tmp_path / "h.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate complex hermitian\n"
        "2 2 2\n"
        "1 1 1.0 0.0\n"
        "2 1 2.0 3.0\n"
    )
    a = mmio.load_matrix_market(path)
    assert a[1, 0] == 2.0 + 3.0j
    assert a[0, 1] == 2.0 - 3.0j
    assert np.array_equal(a, a.conj().T)


def test_real_field(tmp_path):
    path = tmp_path / "r.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real general\n"
        "2 2 2\n"
        "1 1 1.5\n"
        "2 2 -2.5\n"
    )
    a = mmio.load_matrix_market(path)
    assert a[0, 0] == 1.5 and a[1, 1] == -2.5


def test_one_based_indexing(tmp_path):
    path = tmp_path / "i.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate complex general\n"
        "3 3 1\n"
        "3 1 7.0 0.0\n"
    )
    a = mmio.load_matrix_market(path)
    assert a[2, 0] == 7.0


@pytest.mark.parametrize(
    "text",
    [
        "not a header\n1 1 1\n1 1 1.0 0.0\n",
        "%%MatrixMarket matrix array complex general\n1 1\n1.0 0.0\n",
        "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n",
        "%%MatrixMarket matrix coordinate complex skew-symmetric\n1 1 1\n1 1 1.0 0.0\n",
        "%%MatrixMarket matrix coordinate complex general\n2 3 1\n1 1 1.0 0.0\n",
        "%%MatrixMarket matrix coordinate complex general\n2 2 2\n1 1 1.0 0.0\n",
        "%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 1 1.0\n",
        "%%MatrixMarket matrix coordinate complex general\n2 2 1\n5 1 1.0 0.0\n",
    ],
)
def test_malformed_matrix_rejected(tmp_path, text):
    path = tmp_path / "bad.mtx"
    path.write_text(text)
    with pytest.raises(ValueError):
        mmio.load_matrix_market(path)


def test_vector_roundtrip(tmp_path):
    rng = SplitMix64(109)
    v = rng.complex_vector(7)
    path = tmp_path / "v.vec"
    mmio.save_vector(path, v)
    assert np.array_equal(mmio.load_vector(path), v)


def test_vector_comments_and_blanks(tmp_path):
    path = tmp_path / "v.vec"
    path.write_text("# comment\n\n1.0 2.0\n% other comment\n3.0 -4.0\n")
    assert np.array_equal(mmio.load_vector(path), np.array([1 + 2j, 3 - 4j]))


def test_vector_malformed(tmp_path):
    path = tmp_path / "v.vec"
    path.write_text("1.0\n")
    with pytest.raises(ValueError):
        mmio.load_vector(path)
    path.write_text("")
    with pytest.raises(ValueError):
        mmio.load_vector(path)
