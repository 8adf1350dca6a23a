"""matfunc: exact desk-scale simulation of a matrix-function state pipeline.

Given a square matrix A with spectral norm at most one, a unit state b, and
an analytic function f, the pipeline prepares the normalized state
proportional to f(A) b by: trapezoidal quadrature of the Cauchy integral on
a circle (contour), one block-diagonal linear solve over all quadrature
nodes (blocksys), a weighting unitary over an ancilla register (lcu),
Hadamard averaging and post-selection (pipeline).  Every stage carries a
certified error bound, and the verify suite checks each bound on random
instances.
"""

from .backend import BACKEND
from .blocksys import (
    BlockOracle,
    SparseOracle,
    assemble_blockdiag,
    assemble_rhs,
    condition_bounds,
    hermitian_dilation,
    scale_system,
    size_cap,
)
from .contour import (
    ContourPlan,
    QuadratureNodes,
    contour_apply,
    contour_matrix,
    make_nodes,
    node_weights,
    periodized_indicator,
    truncation_bound,
)
from .errors import (
    BadM,
    BadScale,
    DegenerateBound,
    DivergentSeries,
    InfeasibleTarget,
    MatfuncError,
    NoConvergence,
    NormTooLarge,
    NullImage,
    NullProjection,
    SingularMatrix,
    SizeCap,
    ZeroFunction,
    ZeroVector,
)
from .lcu import (
    CoeffTable,
    WeightingUnitary,
    build_unitary,
    gate_count_estimate,
    truncate,
    weight,
)
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
from .pipeline import (
    ParameterPlan,
    RunReport,
    build_xprime_state,
    compute_F,
    error_bound,
    inject_error,
    manual_plan,
    minimal_nodes_for_error,
    run_algorithm,
    saturated_order,
    select_parameters,
    success_lower_bound,
)

__version__ = "0.1.0"
