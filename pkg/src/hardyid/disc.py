"""Optimal point-value estimation on the torus via complex l1 minimization.

For samples at distinct torus points and an estimation point zeta_0 strictly
between them, the worst-case-optimal linear estimator has weights a* solving

    min sum_k |a_k|   subject to   sum_k a_k zeta_k**j = zeta_0**j,  j < n,

and its optimal constant over the model set is mu = 1 + sum_k |a*_k|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .core import TWO_PI, PointConfiguration, PointScheme, monomial_row
from .errors import SolverConvergenceError
from .l1 import ComplexL1Problem, L1Solution, SolveStatus, SolverConfig, solve_batch

_TORUS_TOL = 1e-12


@dataclass(frozen=True)
class EstimationWeights:
    """Optimal estimation weights with their certificate."""

    a: np.ndarray
    mu: float
    zeta0: complex
    config: PointConfiguration
    n: int
    certificate: L1Solution


@dataclass(frozen=True)
class GridIndicatorResult:
    mu_sup: float
    argmax_zeta0: complex
    gap_max: float


@dataclass(frozen=True)
class KappaRow:
    n: int
    mu_sup: float
    kappa: float
    reference: float


def _require_torus(config: PointConfiguration):
    if not config.on_torus:
        raise ValueError("estimation requires sample points on the torus |zeta| = 1")


def _require_valid_zeta0(config: PointConfiguration, zeta0: complex):
    if abs(abs(zeta0) - 1.0) > _TORUS_TOL:
        raise ValueError(f"zeta0 must lie on the torus, got |zeta0| = {abs(zeta0):.12f}")
    if np.min(np.abs(config.points - zeta0)) < _TORUS_TOL:
        raise ValueError("zeta0 coincides with a sample point; the trivial estimator is exact there")


def _constraint_matrix(config: PointConfiguration, n: int) -> np.ndarray:
    """Rows j = 0..n-1 of zeta_k**j (transposed Vandermonde)."""
    cols = [monomial_row(z, n) for z in config.points]
    return np.column_stack(cols)


def build_estimation_problem(config: PointConfiguration, zeta0: complex, n: int) -> ComplexL1Problem:
    """Assemble the l1 program for estimating F(zeta0) from torus samples."""
    _require_torus(config)
    _require_valid_zeta0(config, zeta0)
    if not 1 <= n <= config.m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={config.m}")
    return ComplexL1Problem(_constraint_matrix(config, n), monomial_row(zeta0, n))


def optimal_weights(
    config: PointConfiguration,
    zeta0: complex,
    n: int,
    solver_config: Optional[SolverConfig] = None,
) -> EstimationWeights:
    """Solve for a* and return mu = 1 + sum|a*_k| with the solver certificate."""
    problem = build_estimation_problem(config, zeta0, n)
    solution = solve_batch(problem.matrix, problem.rhs[:, None], solver_config)[0]
    if solution.status is not SolveStatus.OPTIMAL:
        raise SolverConvergenceError(
            f"l1 solve did not certify optimality (status={solution.status.value})", zeta0=complex(zeta0)
        )
    return EstimationWeights(
        a=solution.a,
        mu=1.0 + solution.objective,
        zeta0=complex(zeta0),
        config=config,
        n=n,
        certificate=solution,
    )


def estimate(weights: EstimationWeights, y: np.ndarray) -> complex:
    """Linear estimate sum_k a_k y_k of F(zeta0) from samples y_k = F(zeta_k)."""
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (weights.config.m,):
        raise ValueError(f"data must have shape ({weights.config.m},)")
    return complex(np.sum(weights.a * y))


def _grid_zeta0(config: PointConfiguration, grid_size: int) -> np.ndarray:
    """Half-cell-offset uniform grid on the torus, excluding sample points."""
    theta = TWO_PI * (np.arange(grid_size) + 0.5) / grid_size
    grid = np.exp(1j * theta)
    keep = np.min(np.abs(grid[:, None] - config.points[None, :]), axis=1) >= _TORUS_TOL
    return grid[keep]


def identification_indicator_da(
    config: PointConfiguration,
    n: int,
    grid_size: int,
    solver_config: Optional[SolverConfig] = None,
) -> GridIndicatorResult:
    """Grid evaluation of sup over zeta0 of the estimation indicator.

    The returned maximum is a lower bound for the true supremum over the
    torus, certified up to the per-solve duality gaps (gap_max).

    Equispaced sample sets are invariant under rotation by 2 pi / m, and the
    indicator is invariant under simultaneous rotation of zeta0 and the
    samples, so mu over the full half-cell-offset grid equals mu over the
    grid_size/m offsets inside one cell.  Only those are solved.
    """
    _require_torus(config)
    if not 1 <= n <= config.m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={config.m}")
    if grid_size < 8 * config.m:
        raise ValueError(f"grid_size must be >= 8 m = {8 * config.m} to resolve inter-node peaks")
    if config.scheme is PointScheme.EQUISPACED_TORUS and grid_size % config.m == 0:
        per_cell = grid_size // config.m
        grid = np.exp(1j * TWO_PI * (np.arange(per_cell) + 0.5) / grid_size)
    else:
        grid = _grid_zeta0(config, grid_size)
    M = _constraint_matrix(config, n)
    B = np.column_stack([monomial_row(z, n) for z in grid])
    solutions = solve_batch(M, B, solver_config)
    for z, sol in zip(grid, solutions):
        if sol.status is not SolveStatus.OPTIMAL:
            raise SolverConvergenceError(
                f"grid solve failed at zeta0 = {z} (status={sol.status.value})", zeta0=complex(z)
            )
    mu = 1.0 + np.array([sol.objective for sol in solutions])
    best = int(np.argmax(mu))
    gap_max = float(max(sol.duality_gap for sol in solutions))
    return GridIndicatorResult(mu_sup=float(mu[best]), argmax_zeta0=complex(grid[best]), gap_max=gap_max)


def kappa_shape_sweep(
    m: int,
    n_list: Sequence[int],
    grid_size: int,
    solver_config: Optional[SolverConfig] = None,
) -> List[KappaRow]:
    """Sweep of mu_sup over n for equispaced torus points.

    Emits kappa = mu_sup - 2 next to the reference shape ln(m / (m - n + 1));
    no fitting is performed here.
    """
    config = PointConfiguration.equispaced_torus(m)
    rows = []
    for n in n_list:
        result = identification_indicator_da(config, n, grid_size, solver_config)
        # mu >= 2 whenever constants lie in the polynomial space (the constraint
        # sum a_k = 1 forces objective >= 1); negative dust is rounding.
        rows.append(
            KappaRow(
                n=int(n),
                mu_sup=result.mu_sup,
                kappa=max(result.mu_sup - 2.0, 0.0),
                reference=math.log(m / (m - n + 1)),
            )
        )
    return rows
