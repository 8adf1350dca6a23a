"""Trapezoidal quadrature of the Cauchy integral representation of f(A).

On a circle of radius beta (1 < beta < R, centered at the origin) with M
equispaced nodes theta_k = 2 pi k / M, the matrix function is approximated
by

    f_M(A) = (1/M) sum_k f(beta e^{i theta_k}) e^{i theta_k}
                          (e^{i theta_k} I - A/beta)^{-1},

a weighted average of resolvent solves at the nodes.  Because the integrand
is analytic in an annulus around the circle, the quadrature error decays
geometrically in M; truncation_bound evaluates the certified rate

    ||f(A) - f_M(A)|| <= B/(1 - ||A||/R) * [ q1^M/(1 - q1^M)
                                           + q2^M/(1 - q2^M) ],
    q1 = ||A||/beta,  q2 = beta/R.

The discrete mechanism behind the bound is the periodizing indicator
S_M(y) = (1/M) sum_k e^{2 pi i y k / M}, which is 1 when M | y and 0
otherwise: the node sum reproduces the series of f exactly except that
coefficients alias in steps of M.

Callers guarantee spectral_norm(A) <= 1; inputs with larger norm are
rejected upstream.  All node loops reduce over k in fixed ascending order,
so results are bitwise deterministic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadM, DegenerateBound
from .numkernel import FunctionSpec, as_matrix, as_vector, lu_factor


def is_power_of_two(n: int) -> bool:
    return isinstance(n, int) and n >= 1 and (n & (n - 1)) == 0


def _check_power_of_two(n, what: str):
    if not is_power_of_two(n):
        raise BadM("%s must be a power of two, got %r" % (what, n))


@dataclass(frozen=True)
class ContourPlan:
    """Quadrature and truncation parameters for one instance.

    beta: circle radius, 1 < beta < radius.
    nodes: M = 2^m quadrature nodes.
    truncation: L = 2^l series order kept by the weighting stage.
    hhl_error: distance budget for the solver stage state.
    radius: analyticity radius R of the function in use.

    Derived: r = beta/radius, kappa_prime = 1/(1 - 1/beta), and
    gamma = max(kappa_prime, 1/(1 - r)).
    """

    beta: float
    nodes: int
    truncation: int
    hhl_error: float
    radius: float

    def __post_init__(self):
        _check_power_of_two(self.nodes, "nodes M")
        _check_power_of_two(self.truncation, "truncation L")
        if not (1.0 < self.beta < self.radius):
            raise ValueError(
                "need 1 < beta < radius, got beta=%r radius=%r"
                % (self.beta, self.radius)
            )
        if self.hhl_error < 0:
            raise ValueError("hhl_error must be nonnegative")

    @property
    def r(self) -> float:
        return self.beta / self.radius

    @property
    def kappa_prime(self) -> float:
        return 1.0 / (1.0 - 1.0 / self.beta)

    @property
    def gamma(self) -> float:
        return max(self.kappa_prime, 1.0 / (1.0 - self.r))


@dataclass(frozen=True)
class QuadratureNodes:
    """Equispaced angles theta_k = 2 pi k / M and points beta e^{i theta_k}."""

    angles: np.ndarray
    points: np.ndarray

    @property
    def count(self) -> int:
        return len(self.angles)


def make_nodes(m_nodes: int, beta: float) -> QuadratureNodes:
    """The M-point equispaced quadrature rule on the circle of radius beta.

    beta only scales the points; any positive value is accepted here (plans
    enforce beta > 1 where the resolvent bounds need it).
    """
    _check_power_of_two(m_nodes, "nodes M")
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError("beta must be positive and finite")
    angles = np.array(
        [2.0 * math.pi * k / m_nodes for k in range(m_nodes)], dtype=np.float64
    )
    points = beta * np.exp(1j * angles)
    return QuadratureNodes(angles, points)


def periodized_indicator(m_nodes: int, y: int) -> float:
    """S_M(y) = (1/M) sum_k e^{2 pi i y k / M}: 1 if M divides y, else 0.

    Evaluated by direct summation and rounded; the pre-rounding error is
    asserted below 1e-10 (it is at most M ulps).
    """
    _check_power_of_two(m_nodes, "nodes M")
    acc = 0j
    for k in range(m_nodes):
        acc += cmath.exp(2j * math.pi * y * k / m_nodes)
    val = acc.real / m_nodes
    nearest = round(val)
    assert abs(val - nearest) < 1e-10 and abs(acc.imag) / m_nodes < 1e-10
    return float(nearest)


def node_weights(fs: FunctionSpec, m_nodes: int, beta: float, tol: float = 1e-14):
    """Exact weights g_k = f(beta e^{i theta_k}) e^{i theta_k}.

    f is evaluated by the certified series (FunctionSpec.value), so custom
    coefficient functions take the same code path as the catalog.
    """
    nodes = make_nodes(m_nodes, beta)
    return np.array(
        [
            fs.value(complex(nodes.points[k]), tol) * cmath.exp(1j * float(nodes.angles[k]))
            for k in range(m_nodes)
        ],
        dtype=np.complex128,
    )


def _shifted_factorizations(a, beta: float, m_nodes: int):
    a = as_matrix(a)
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    scaled = a * (1.0 / beta)
    nodes = make_nodes(m_nodes, beta)
    for k in range(m_nodes):
        phase = cmath.exp(1j * float(nodes.angles[k]))
        yield k, lu_factor(phase * eye - scaled)


def contour_apply(fs: FunctionSpec, a, b, plan: ContourPlan) -> np.ndarray:
    """f_M(A) b = (1/M) sum_k g_k (e^{i theta_k} I - A/beta)^{-1} b."""
    a = as_matrix(a)
    b = as_vector(b)
    if b.shape[0] != a.shape[0]:
        raise ValueError("dimension mismatch")
    g = node_weights(fs, plan.nodes, plan.beta)
    acc = np.zeros_like(b)
    for k, fact in _shifted_factorizations(a, plan.beta, plan.nodes):
        acc = acc + g[k] * fact.solve(b)
    return acc / plan.nodes


def contour_matrix(fs: FunctionSpec, a, plan: ContourPlan) -> np.ndarray:
    """Dense f_M(A): contour_apply columnwise against the identity."""
    a = as_matrix(a)
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    g = node_weights(fs, plan.nodes, plan.beta)
    acc = np.zeros((n, n), dtype=np.complex128)
    for k, fact in _shifted_factorizations(a, plan.beta, plan.nodes):
        acc = acc + g[k] * fact.solve(eye)
    return acc / plan.nodes


def truncation_bound(fs: FunctionSpec, norm_a: float, plan: ContourPlan) -> float:
    """Certified quadrature error bound on ||f(A) - f_M(A)||.

    Valid whenever norm_a < beta < R, i.e. both geometric ratios are below
    one; DegenerateBound otherwise.
    """
    norm_a = float(norm_a)
    beta, radius, m = plan.beta, plan.radius, plan.nodes
    if not (0.0 <= norm_a < beta < radius):
        raise DegenerateBound(
            "need 0 <= ||A|| < beta < R, got ||A||=%g beta=%g R=%g"
            % (norm_a, beta, radius)
        )
    q1 = (norm_a / beta) ** m
    q2 = (beta / radius) ** m
    if q1 >= 1.0 or q2 >= 1.0:
        raise DegenerateBound("geometric ratio at or above one")
    lead = fs.disk_max / (1.0 - norm_a / radius)
    return lead * (q1 / (1.0 - q1) + q2 / (1.0 - q2))
