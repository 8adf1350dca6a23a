"""Complex dense linear algebra and the reference series oracle for f(A)b.

Everything downstream (quadrature, block systems, the full pipeline) is
checked against the two primitives here: a deterministic LU solver with
partial pivoting and a tail-certified power-series evaluator.  All
functions are pure, never mutate their arguments, and the value types are
frozen, so concurrent use needs no locking.

A function is described by a FunctionSpec: a coefficient stream a_j for
f(z) = sum_j a_j z^j, the radius of a disk |z| <= R on which f is analytic,
and an upper bound B for |f| on that disk.  Cauchy's estimate
|a_j| <= B / R^j then certifies every series truncation used below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DivergentSeries, NoConvergence, SingularMatrix, ZeroVector

# Kinds whose disk maximum B is known in closed form.
_CATALOG = ("exp", "cos", "sin", "geometric")
# Number of boundary samples used to estimate B for coefficient-list kinds.
_DISK_SAMPLES = 4096
# 1/j! underflows to an exact 0.0 beyond this index.
_FACTORIAL_CUTOFF = 170

_NORM_FLOOR = 1e-300


def _inv_factorial(j: int) -> float:
    if j > _FACTORIAL_CUTOFF:
        return 0.0
    return 1.0 / math.factorial(j)


def _sampled_disk_max(coeffs, radius: float) -> float:
    """Max of |f| over the circle |z| = radius at _DISK_SAMPLES points.

    By the maximum principle this is the disk maximum.  Exact for monomials
    (the modulus is constant on the circle); a dense-sampling estimate
    otherwise.
    """
    best = 0.0
    for t in range(_DISK_SAMPLES):
        z = radius * cmath.exp(2j * math.pi * t / _DISK_SAMPLES)
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * z + c
        if abs(acc) > best:
            best = abs(acc)
    return best


@dataclass(frozen=True)
class FunctionSpec:
    """An analytic function as a coefficient stream plus disk data.

    kind: one of exp, cos, sin, geometric, polynomial, custom.
    radius: disk radius R > 1 on which the series is certified.
    disk_max: upper bound B for |f(z)| on |z| <= R.  Analytic for the
        catalog kinds (cosh R is used for sin as well as cos; it overshoots
        the true maximum sinh R but any upper bound keeps the estimates
        valid).  Sampled on the boundary circle for coefficient lists, with
        a 1.01 safety factor for the custom kind.
    """

    kind: str
    radius: float
    disk_max: float
    coeffs: tuple = ()
    pole: complex = 0j

    def __post_init__(self):
        if self.radius <= 1.0:
            raise ValueError("radius must exceed 1, got %r" % (self.radius,))
        if self.kind == "geometric" and self.radius >= abs(self.pole):
            raise ValueError("geometric kind needs radius < |pole|")

    # -- constructors ------------------------------------------------------

    @classmethod
    def exp(cls, radius: float = 2.0) -> "FunctionSpec":
        return cls("exp", radius, math.exp(radius))

    @classmethod
    def cos(cls, radius: float = 2.0) -> "FunctionSpec":
        return cls("cos", radius, math.cosh(radius))

    @classmethod
    def sin(cls, radius: float = 2.0) -> "FunctionSpec":
        return cls("sin", radius, math.cosh(radius))

    @classmethod
    def geometric(cls, pole: complex, radius: float = 2.0) -> "FunctionSpec":
        """f(z) = 1 / (1 - z/pole), analytic for |z| < |pole|."""
        pole = complex(pole)
        if radius >= abs(pole):
            raise ValueError("geometric kind needs radius < |pole|")
        b = 1.0 / (1.0 - radius / abs(pole))
        return cls("geometric", radius, b, pole=pole)

    @classmethod
    def polynomial(cls, coeffs, radius: float = 2.0) -> "FunctionSpec":
        coeffs = tuple(complex(c) for c in coeffs)
        return cls("polynomial", radius, _sampled_disk_max(coeffs, radius), coeffs=coeffs)

    @classmethod
    def custom(cls, coeffs, radius: float = 2.0) -> "FunctionSpec":
        coeffs = tuple(complex(c) for c in coeffs)
        b = 1.01 * _sampled_disk_max(coeffs, radius)
        return cls("custom", radius, b, coeffs=coeffs)

    # -- series access -----------------------------------------------------

    def coeff(self, j: int) -> complex:
        """Series coefficient a_j, defined for every j >= 0."""
        if j < 0:
            raise ValueError("coefficient index must be nonnegative")
        if self.kind == "exp":
            return complex(_inv_factorial(j))
        if self.kind == "cos":
            if j % 2:
                return 0j
            return complex((-1) ** (j // 2) * _inv_factorial(j))
        if self.kind == "sin":
            if j % 2 == 0:
                return 0j
            return complex((-1) ** ((j - 1) // 2) * _inv_factorial(j))
        if self.kind == "geometric":
            try:
                return (1.0 / self.pole) ** j
            except OverflowError:
                return 0j
        return self.coeffs[j] if j < len(self.coeffs) else 0j

    @property
    def series_cutoff(self):
        """Index past which every coefficient is zero, or None."""
        if self.kind in ("polynomial", "custom"):
            return len(self.coeffs)
        return None

    def value(self, z: complex, tol: float = 1e-14) -> complex:
        """f(z) summed term by term, stopped by the Cauchy tail bound.

        Requires |z| < radius; the remainder after J terms is at most
        B q^J / (1 - q) with q = |z|/R, which is driven below tol.
        """
        z = complex(z)
        q = abs(z) / self.radius
        if q >= 1.0:
            raise DivergentSeries(
                "cannot certify the series tail: |z| = %g >= radius %g"
                % (abs(z), self.radius)
            )
        cutoff = self.series_cutoff
        if cutoff is not None:
            acc = 0j
            zp = 1.0 + 0j
            for j in range(cutoff):
                acc += self.coeffs[j] * zp
                zp *= z
            return acc
        acc = self.coeff(0) + 0j
        zp = 1.0 + 0j
        j = 0
        while self.disk_max * q ** (j + 1) / (1.0 - q) > tol:
            j += 1
            zp *= z
            c = self.coeff(j)
            if c != 0:
                acc += c * zp
        return acc


# -- value validation -------------------------------------------------------


def as_matrix(a) -> np.ndarray:
    """Validate and convert to a finite square complex128 matrix."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError("expected a square matrix, got shape %r" % (a.shape,))
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def as_vector(v) -> np.ndarray:
    """Validate and convert to a finite complex128 vector."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] == 0:
        raise ValueError("expected a vector, got shape %r" % (v.shape,))
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def as_state(v) -> np.ndarray:
    """Validate a unit-norm amplitude vector (tolerance 1e-12)."""
    v = as_vector(v)
    if abs(float(np.linalg.norm(v)) - 1.0) > 1e-12:
        raise ValueError("amplitude vector is not unit norm")
    return v


def normalize(v) -> np.ndarray:
    """v / ||v||, rejecting vectors with norm below 1e-300."""
    v = as_vector(v)
    nv = float(np.linalg.norm(v))
    if nv < _NORM_FLOOR:
        raise ZeroVector("cannot normalize a zero vector")
    return v / nv


# -- operations --------------------------------------------------------------


@dataclass(frozen=True)
class LUFactorization:
    """Reusable LU factors; solve() accepts one RHS vector or a matrix."""

    lu: np.ndarray
    piv: np.ndarray

    def solve(self, b) -> np.ndarray:
        return backend.lu_solve_factored(self.lu, self.piv, b)


def lu_factor(a) -> LUFactorization:
    a = as_matrix(a)
    lu, piv, fail = backend.lu_factor(a)
    if fail >= 0:
        raise SingularMatrix(
            "pivot magnitude below %g * max|entry| at column %d"
            % (backend.pykernels.REL_PIVOT_TOL, fail)
        )
    return LUFactorization(lu, piv)


def lu_solve(a, b) -> np.ndarray:
    """Solve A x = b by dense LU with partial pivoting (deterministic)."""
    a = as_matrix(a)
    b = as_vector(b)
    if b.shape[0] != a.shape[0]:
        raise ValueError("dimension mismatch: %d vs %d" % (a.shape[0], b.shape[0]))
    return lu_factor(a).solve(b)


def spectral_norm(a, rtol: float = 1e-10, maxiter: int = 10000) -> float:
    """Largest singular value via power iteration on A^H A.

    The start vector is the normalized all-ones vector with 1e-3 added to
    entry 0 (fixed, no RNG).  Estimates increase monotonically; iteration
    stops when successive estimates agree to rtol.
    """
    a = as_matrix(a)
    sigma, _, converged = backend.power_sigma(a, rtol, maxiter)
    if not converged:
        raise NoConvergence(
            "power iteration did not reach rtol=%g within %d iterations"
            % (rtol, maxiter)
        )
    return float(sigma)


def _series_terms(fs: FunctionSpec, q: float, scale: float, tol: float):
    """Yield term indices 0, 1, ... until the tail bound drops below tol."""
    cutoff = fs.series_cutoff
    j = 0
    yield 0
    while fs.disk_max * q ** (j + 1) / (1.0 - q) * scale > tol:
        j += 1
        if cutoff is not None and j >= cutoff:
            return
        yield j


def taylor_apply(fs: FunctionSpec, a, b, tol: float, norm_a=None) -> np.ndarray:
    """Reference oracle for f(A) b by certified partial sums.

    Stops once the analytic tail bound B (||A||/R)^J / (1 - ||A||/R) ||b||
    falls below tol, so the result is within tol of f(A) b.  norm_a may be
    supplied to reuse an already computed spectral norm.
    """
    a = as_matrix(a)
    b = as_vector(b)
    if tol <= 0:
        raise ValueError("tol must be positive")
    na = spectral_norm(a) if norm_a is None else float(norm_a)
    q = na / fs.radius
    if q >= 1.0:
        raise DivergentSeries(
            "cannot certify the series tail: ||A|| = %g >= radius %g"
            % (na, fs.radius)
        )
    nb = float(np.linalg.norm(b))
    acc = fs.coeff(0) * b
    p = b
    for j in _series_terms(fs, q, nb, tol):
        if j == 0:
            continue
        p = a @ p
        c = fs.coeff(j)
        if c != 0:
            acc = acc + c * p
    return acc


def taylor_matrix(fs: FunctionSpec, a, tol: float, norm_a=None) -> np.ndarray:
    """Dense f(A) by the same certified series (operator-norm tail)."""
    a = as_matrix(a)
    if tol <= 0:
        raise ValueError("tol must be positive")
    na = spectral_norm(a) if norm_a is None else float(norm_a)
    q = na / fs.radius
    if q >= 1.0:
        raise DivergentSeries(
            "cannot certify the series tail: ||A|| = %g >= radius %g"
            % (na, fs.radius)
        )
    n = a.shape[0]
    acc = fs.coeff(0) * np.eye(n, dtype=np.complex128)
    p = np.eye(n, dtype=np.complex128)
    for j in _series_terms(fs, q, 1.0, tol):
        if j == 0:
            continue
        p = a @ p
        c = fs.coeff(j)
        if c != 0:
            acc = acc + c * p
    return acc


def normalized_distance(u, v) -> float:
    """|| u/||u|| - v/||v|| ||, always in [0, 2]."""
    u = as_vector(u)
    v = as_vector(v)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < _NORM_FLOOR or nv < _NORM_FLOOR:
        raise ZeroVector("normalized_distance needs nonzero vectors")
    return float(np.linalg.norm(u / nu - v / nv))
