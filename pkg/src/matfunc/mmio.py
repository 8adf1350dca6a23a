"""Matrix Market coordinate files and plain two-column vector files.

Matrices: coordinate format, fields complex / real / integer, symmetry
general / symmetric / hermitian (expanded on load), 1-based indices,
complex entries as "i j re im".  Vectors: one entry per line, "re im".
"""

from __future__ import annotations

import numpy as np

_FIELDS = ("complex", "real", "integer")
_SYMMETRIES = ("general", "symmetric", "hermitian")


def load_matrix_market(path) -> np.ndarray:
    """Parse a Matrix Market coordinate file into a dense complex matrix."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split()
        if len(header) != 5 or header[0] != "%%MatrixMarket":
            raise ValueError("%s: missing %%%%MatrixMarket header" % path)
        _, obj, fmt, field, symmetry = (t.lower() for t in header)
        if obj != "matrix" or fmt != "coordinate":
            raise ValueError("%s: only 'matrix coordinate' files are supported" % path)
        if field not in _FIELDS:
            raise ValueError("%s: unsupported field %r" % (path, field))
        if symmetry not in _SYMMETRIES:
            raise ValueError("%s: unsupported symmetry %r" % (path, symmetry))

        size_line = None
        for line in fh:
            line = line.strip()
            if line and not line.startswith("%"):
                size_line = line
                break
        if size_line is None:
            raise ValueError("%s: missing size line" % path)
        parts = size_line.split()
        if len(parts) != 3:
            raise ValueError("%s: malformed size line %r" % (path, size_line))
        rows, cols, nnz = (int(p) for p in parts)
        if rows != cols:
            raise ValueError("%s: matrix must be square, got %dx%d" % (path, rows, cols))

        out = np.zeros((rows, cols), dtype=np.complex128)
        seen = 0
        for line in fh:
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            parts = line.split()
            want = 4 if field == "complex" else 3
            if len(parts) != want:
                raise ValueError("%s: malformed entry line %r" % (path, line))
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError("%s: index out of range in %r" % (path, line))
            if field == "complex":
                v = complex(float(parts[2]), float(parts[3]))
            else:
                v = complex(float(parts[2]))
            out[i, j] += v
            if symmetry != "general" and i != j:
                out[j, i] += v.conjugate() if symmetry == "hermitian" else v
            seen += 1
        if seen != nnz:
            raise ValueError("%s: expected %d entries, found %d" % (path, nnz, seen))
    return out


def save_matrix_market(path, a) -> None:
    """Write a dense matrix as general complex coordinate Matrix Market."""
    a = np.asarray(a, dtype=np.complex128)
    rows, cols = a.shape
    idx = np.argwhere(a != 0)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix coordinate complex general\n")
        fh.write("%d %d %d\n" % (rows, cols, len(idx)))
        for i, j in idx:
            v = a[i, j]
            fh.write("%d %d %.17g %.17g\n" % (i + 1, j + 1, v.real, v.imag))


def load_vector(path) -> np.ndarray:
    """Read a vector file: one "re im" pair per line ('%'/'#' comments ok)."""
    entries = []
    with open(path, "r", encoding="ascii") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith(("%", "#")):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError("%s:%d: expected 're im', got %r" % (path, ln, line))
            entries.append(complex(float(parts[0]), float(parts[1])))
    if not entries:
        raise ValueError("%s: empty vector file" % path)
    return np.array(entries, dtype=np.complex128)


def save_vector(path, v) -> None:
    v = np.asarray(v, dtype=np.complex128)
    with open(path, "w", encoding="ascii") as fh:
        for z in v:
            fh.write("%.17g %.17g\n" % (z.real, z.imag))
