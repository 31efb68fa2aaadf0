"""Optimal recovery of transfer functions from frequency samples.

Identification in the Hardy space H2 from samples inside the disc, and
point-value estimation in the disc algebra from samples on the torus, both
with exactly computable worst-case-optimal constants.
"""

from .core import (
    ModelSetParams,
    PointConfiguration,
    PointScheme,
    TaylorSeries,
    cauchy_kernel,
    cauchy_kernel_series,
    eval_series,
    h2_inner,
    monomial_row,
    sample_model_function,
)
from .disc import (
    EstimationWeights,
    build_estimation_problem,
    estimate,
    identification_indicator_da,
    kappa_shape_sweep,
    optimal_weights,
)
from .h2 import (
    GramPair,
    RecoveryElement,
    build_gram_pair,
    compatibility_indicator,
    equispaced_circulant_eig,
    equispaced_mu_closed_form,
    gram_product,
    h2_error,
    interpolate_equispaced,
    optimal_identify,
)
from .l1 import ComplexL1Problem, L1Solution, SolveStatus, SolverConfig, check_certificate, solve
from .oracle import (
    FiniteRecoveryInstance,
    constrained_min_dist,
    extremal_pair,
    finite_mu,
    local_radius,
    sample_feasible,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
