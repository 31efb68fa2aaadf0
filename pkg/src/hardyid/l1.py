"""Equality-constrained complex l1 minimization with optimality certificates.

Solves min sum_k |a_k| subject to M a = b over complex vectors by ADMM on the
real embedding: each complex entry is a 2-vector (Re, Im), the objective is
the group norm with groups of size 2, and the iteration alternates an affine
projection onto {M a = b} (one cached factorization of M M*) with per-entry
block soft-thresholding.  In complex arithmetic both steps read exactly as
written below.

Certificates: a dual vector lam with ||M* lam||_inf <= 1 yields the weak
duality bound sum|a_k| >= Re<b, lam>, so gap = objective - Re<b, lam> bounds
the suboptimality of any feasible iterate.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np
import scipy.linalg

# Rhs columns are normalized to unit norm internally; iterates then live at
# scale O(1) and the objective is exactly homogeneous in ||b||.
_CHECK_EVERY = 25
_ADAPT_EVERY = 50
_SUPPORT_EVERY = 100
_RHO_BOUNDS = (1e-6, 1e6)


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    MAX_ITER = "max_iter"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class ComplexL1Problem:
    """Constraint map (n x m, full row rank, n <= m) and right-hand side."""

    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        rhs = np.asarray(self.rhs, dtype=np.complex128)
        if mat.ndim != 2:
            raise ValueError("matrix must be 2-d")
        n, m = mat.shape
        if n > m:
            raise ValueError(f"need n <= m, got {n} x {m}")
        if rhs.shape != (n,):
            raise ValueError(f"rhs must have shape ({n},)")
        if not (np.all(np.isfinite(mat.real)) and np.all(np.isfinite(mat.imag))):
            raise ValueError("matrix entries must be finite")
        if not (np.all(np.isfinite(rhs.real)) and np.all(np.isfinite(rhs.imag))):
            raise ValueError("rhs entries must be finite")
        svals = scipy.linalg.svdvals(mat)
        if svals[-1] <= 1e-10 * svals[0]:
            raise ValueError(
                f"matrix is rank deficient (sigma_min/sigma_max = {svals[-1] / svals[0]:.3e})"
            )
        mat = mat.copy()
        rhs = rhs.copy()
        mat.setflags(write=False)
        rhs.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "rhs", rhs)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class SolverConfig:
    tol_feas: float = 1e-9
    tol_gap: float = 1e-8
    max_iter: int = 50_000
    rho_admm: float = 1.0

    def __post_init__(self):
        if min(self.tol_feas, self.tol_gap, self.rho_admm) <= 0 or self.max_iter <= 0:
            raise ValueError("solver parameters must be positive")


@dataclass(frozen=True)
class L1Solution:
    a: np.ndarray
    objective: float
    dual: np.ndarray
    primal_residual: float
    duality_gap: float
    iterations: int
    status: SolveStatus


@dataclass(frozen=True)
class CertificateReport:
    feasibility: float
    gap: float
    block_dual_norm: float


def check_certificate(problem: ComplexL1Problem, solution: L1Solution) -> CertificateReport:
    """Recompute all certificate quantities from scratch.

    Independent of the solver's internal accounting: feasibility is the
    constraint residual of `a`, block_dual_norm the dual-feasibility norm of
    `dual`, and gap the primal-minus-dual objective difference.
    """
    a, lam = solution.a, solution.dual
    feas = float(np.linalg.norm(problem.matrix @ a - problem.rhs))
    block = float(np.max(np.abs(problem.matrix.conj().T @ lam))) if problem.m else 0.0
    gap = float(np.sum(np.abs(a)) - np.real(np.vdot(lam, problem.rhs)))
    return CertificateReport(feasibility=feas, gap=gap, block_dual_norm=block)


def _soft_threshold(V: np.ndarray, thresh: np.ndarray) -> np.ndarray:
    mag = np.abs(V)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(mag > 0.0, np.maximum(0.0, 1.0 - thresh / np.where(mag > 0.0, mag, 1.0)), 0.0)
    return V * scale


def _scaled_dual_gap(A, Bhat, lam, obj):
    """Scale dual candidates into feasibility and return their certified gaps."""
    dual_norm = np.max(np.abs(A.conj().T @ lam), axis=0)
    lam = lam / np.maximum(1.0, dual_norm)[None, :]
    dual_obj = np.real(np.sum(np.conj(lam) * Bhat, axis=0))
    return lam, np.maximum(obj - dual_obj, 0.0)


def _support_dual(A, bhat, z, cho):
    """Least-squares dual fit on the detected support: M*_S lam ~ phases of a_S."""
    mag = np.abs(z)
    peak = float(mag.max()) if mag.size else 0.0
    if peak <= 0.0:
        return None
    support = mag > max(1e-12, 1e-8 * peak)
    if not np.any(support):
        return None
    phases = z[support] / mag[support]
    rows = A.conj().T[support]
    lam, *_ = np.linalg.lstsq(rows, phases, rcond=None)
    return lam


def solve_batch(matrix: np.ndarray, rhs_columns: np.ndarray, config: Optional[SolverConfig] = None) -> List[L1Solution]:
    """ADMM over many right-hand sides sharing one constraint matrix.

    Deterministic: zero initialization, fixed iteration order.  Columns are
    certified independently; finished columns simply keep iterating (the
    iteration is a fixed point there), so results match single solves to
    rounding.
    """
    config = config or SolverConfig()
    A = np.asarray(matrix, dtype=np.complex128)
    B = np.asarray(rhs_columns, dtype=np.complex128)
    if B.ndim != 2 or B.shape[0] != A.shape[0]:
        raise ValueError("rhs_columns must have shape (n, K)")
    n, m = A.shape
    K = B.shape[1]

    gram = A @ A.conj().T
    try:
        cho = scipy.linalg.cho_factor(gram, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise ValueError("constraint Gramian M M* is numerically singular") from exc

    scale = np.linalg.norm(B, axis=0)
    nonzero = scale > 0.0
    Bhat = np.zeros_like(B)
    Bhat[:, nonzero] = B[:, nonzero] / scale[nonzero][None, :]

    # Thresholds in normalized coordinates, equivalent to
    # ||M a - b|| <= tol_feas (1 + ||b||) and gap <= tol_gap (1 + objective).
    with np.errstate(divide="ignore"):
        feas_thresh = np.where(nonzero, config.tol_feas * (1.0 + scale) / np.where(nonzero, scale, 1.0), np.inf)
    inv_scale = np.where(nonzero, 1.0 / np.where(nonzero, scale, 1.0), 0.0)

    # Unreachable rhs guard: with the Cholesky factor available the least-norm
    # residual floor is one projection away.
    X0 = A.conj().T @ scipy.linalg.cho_solve(cho, Bhat)
    floor = np.linalg.norm(A @ X0 - Bhat, axis=0)
    infeasible = nonzero & (floor > np.maximum(feas_thresh, 1e-6))

    Z = np.zeros((m, K), dtype=np.complex128)
    U = np.zeros((m, K), dtype=np.complex128)
    X = np.zeros((m, K), dtype=np.complex128)
    rho = np.full(K, config.rho_admm)

    converged = ~nonzero | infeasible
    iterations = np.zeros(K, dtype=np.int64)
    best_gap = np.full(K, np.inf)
    best_feas = np.full(K, np.inf)
    best_X = np.zeros((m, K), dtype=np.complex128)
    best_dual = np.zeros((n, K), dtype=np.complex128)

    def certify(it: int, with_support: bool):
        nonlocal best_gap, best_feas
        active = ~converged
        if not np.any(active):
            return
        obj = np.sum(np.abs(X), axis=0)
        feas = np.linalg.norm(A @ X - Bhat, axis=0)
        lam_raw = scipy.linalg.cho_solve(cho, A @ (rho[None, :] * U))
        lam, gap = _scaled_dual_gap(A, Bhat, lam_raw, obj)
        if with_support:
            for col in np.nonzero(active)[0]:
                lam_s = _support_dual(A, Bhat[:, col], Z[:, col], cho)
                if lam_s is None:
                    continue
                lam_s2, gap_s = _scaled_dual_gap(A, Bhat[:, [col]], lam_s[:, None], obj[[col]])
                if gap_s[0] < gap[col]:
                    gap[col] = gap_s[0]
                    lam[:, col] = lam_s2[:, 0]
        better = active & (gap + 1e3 * feas < best_gap + 1e3 * best_feas)
        best_gap = np.where(better, gap, best_gap)
        best_feas = np.where(better, feas, best_feas)
        best_X[:, better] = X[:, better]
        best_dual[:, better] = lam[:, better]
        gap_thresh = config.tol_gap * (inv_scale + obj)
        done = active & (gap <= gap_thresh) & (feas <= feas_thresh)
        iterations[done & (iterations == 0)] = it
        converged[done] = True

    it = 0
    for it in range(1, config.max_iter + 1):
        X = (Z - U) - A.conj().T @ scipy.linalg.cho_solve(cho, A @ (Z - U) - Bhat)
        V = X + U
        Z_new = _soft_threshold(V, (1.0 / rho)[None, :])
        U = U + X - Z_new
        if it % _ADAPT_EVERY == 0:
            prim = np.linalg.norm(X - Z_new, axis=0)
            dual = rho * np.linalg.norm(Z_new - Z, axis=0)
            grow = prim > 10.0 * dual
            shrink = dual > 10.0 * prim
            rho = np.clip(np.where(grow, 2.0 * rho, np.where(shrink, 0.5 * rho, rho)), *_RHO_BOUNDS)
            U = np.where(grow, 0.5, 1.0)[None, :] * np.where(shrink, 2.0, 1.0)[None, :] * U
        Z = Z_new
        if it % _CHECK_EVERY == 0:
            certify(it, with_support=(it % _SUPPORT_EVERY == 0))
            if np.all(converged):
                break
    if not np.all(converged):
        certify(it, with_support=True)

    solutions: List[L1Solution] = []
    for col in range(K):
        if not nonzero[col]:
            solutions.append(
                L1Solution(
                    a=np.zeros(m, dtype=np.complex128),
                    objective=0.0,
                    dual=np.zeros(n, dtype=np.complex128),
                    primal_residual=0.0,
                    duality_gap=0.0,
                    iterations=0,
                    status=SolveStatus.OPTIMAL,
                )
            )
            continue
        if infeasible[col]:
            a = scale[col] * X0[:, col]
            solutions.append(
                L1Solution(
                    a=a,
                    objective=float(np.sum(np.abs(a))),
                    dual=np.zeros(n, dtype=np.complex128),
                    primal_residual=float(scale[col] * floor[col]),
                    duality_gap=np.inf,
                    iterations=0,
                    status=SolveStatus.INFEASIBLE,
                )
            )
            continue
        certified = iterations[col] > 0
        a = scale[col] * best_X[:, col]
        solutions.append(
            L1Solution(
                a=a,
                objective=float(np.sum(np.abs(a))),
                dual=best_dual[:, col].copy(),
                primal_residual=float(scale[col] * best_feas[col]),
                duality_gap=float(scale[col] * best_gap[col]),
                iterations=int(iterations[col]) if certified else int(it),
                status=SolveStatus.OPTIMAL if certified else SolveStatus.MAX_ITER,
            )
        )
    return solutions


def solve(problem: ComplexL1Problem, config: Optional[SolverConfig] = None) -> L1Solution:
    """Solve one instance; see solve_batch for the algorithm."""
    return solve_batch(problem.matrix, problem.rhs[:, None], config)[0]
