"""Finite-dimensional Hilbert-space recovery testbed.

Works entirely in C^d: a subspace V with orthonormal basis columns, an
observation map L with full row rank, data y, and a tolerance epsilon
describing the set K = {f : dist(f, V) <= epsilon}.  Everything the optimal
recovery theory promises is computable exactly here - the compatibility
constant, the constrained minimizer, the radius of the data-consistent model
set, and the extremal pair attaining it - which makes this module the
brute-force oracle for the H2 machinery under truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .errors import EmptyFeasibleSetError, InconsistentDataError

_RANK_TOL = 1e-10
_FEAS_SLACK = 1e-9


@dataclass(frozen=True)
class FiniteRecoveryInstance:
    """Instance (V, L, y, epsilon) on C^d with orthonormal V columns."""

    v_basis: np.ndarray
    l_map: np.ndarray
    data: np.ndarray
    epsilon: float

    def __post_init__(self):
        V = np.asarray(self.v_basis, dtype=np.complex128)
        L = np.asarray(self.l_map, dtype=np.complex128)
        y = np.asarray(self.data, dtype=np.complex128)
        if V.ndim != 2 or L.ndim != 2 or y.ndim != 1:
            raise ValueError("v_basis and l_map must be 2-d, data 1-d")
        d = V.shape[0]
        if L.shape[1] != d:
            raise ValueError("l_map and v_basis disagree on the ambient dimension")
        if y.shape[0] != L.shape[0]:
            raise ValueError("data length must match the number of observation rows")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if V.shape[1] > 0:
            gram = V.conj().T @ V
            if np.max(np.abs(gram - np.eye(V.shape[1]))) > 1e-12:
                raise ValueError("v_basis columns must be orthonormal (within 1e-12)")
        svals = scipy.linalg.svdvals(L)
        if svals[-1] <= _RANK_TOL * max(svals[0], 1.0):
            raise ValueError("l_map must have full row rank")
        for arr, name in ((V, "v_basis"), (L, "l_map"), (y, "data")):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return int(self.v_basis.shape[0])

    @property
    def n_obs(self) -> int:
        return int(self.l_map.shape[0])

    @property
    def n_subspace(self) -> int:
        return int(self.v_basis.shape[1])

    @classmethod
    def from_raw(cls, v_raw: np.ndarray, l_map: np.ndarray, data: np.ndarray, epsilon: float) -> "FiniteRecoveryInstance":
        """Orthonormalize the given spanning set for V and build the instance."""
        v_raw = np.asarray(v_raw, dtype=np.complex128)
        if v_raw.size == 0:
            basis = np.zeros((np.asarray(l_map).shape[1], 0), dtype=np.complex128)
        else:
            basis = scipy.linalg.orth(v_raw)
        return cls(basis, l_map, data, epsilon)


def _kernel_basis(inst: FiniteRecoveryInstance) -> np.ndarray:
    return scipy.linalg.null_space(inst.l_map)


def _project_out_v(inst: FiniteRecoveryInstance, vectors: np.ndarray) -> np.ndarray:
    V = inst.v_basis
    if V.shape[1] == 0:
        return vectors
    return vectors - V @ (V.conj().T @ vectors)


def finite_mu(inst: FiniteRecoveryInstance) -> float:
    """sup over ker(L) of norm / distance-to-V.

    Returns 0 for a trivial kernel (empty supremum) and +inf when the kernel
    meets V nontrivially.
    """
    N = _kernel_basis(inst)
    if N.shape[1] == 0:
        return 0.0
    B = _project_out_v(inst, N)
    sigma_min = float(scipy.linalg.svdvals(B)[-1])
    if sigma_min < _RANK_TOL:
        return math.inf
    return 1.0 / sigma_min


def constrained_min_dist(inst: FiniteRecoveryInstance) -> np.ndarray:
    """f* = argmin ||f - P_V f|| subject to L f = y.

    The residual f* - P_V f* is orthogonal to both V and ker(L).
    """
    f_part, *_ = np.linalg.lstsq(inst.l_map, inst.data, rcond=None)
    resid = float(np.linalg.norm(inst.l_map @ f_part - inst.data))
    if resid > _FEAS_SLACK * (1.0 + float(np.linalg.norm(inst.data))):
        raise InconsistentDataError(f"data outside the range of L (residual {resid:.3e})")
    N = _kernel_basis(inst)
    if N.shape[1] == 0:
        return f_part
    B = _project_out_v(inst, N)
    r0 = _project_out_v(inst, f_part)
    w, *_ = np.linalg.lstsq(B, -r0, rcond=None)
    return f_part + N @ w


def _min_dist_value(inst: FiniteRecoveryInstance, f_star: Optional[np.ndarray] = None) -> float:
    f_star = constrained_min_dist(inst) if f_star is None else f_star
    return float(np.linalg.norm(_project_out_v(inst, f_star)))


def local_radius(inst: FiniteRecoveryInstance) -> float:
    """Worst-case radius mu sqrt(epsilon^2 - ||f* - P_V f*||^2) of K cap L^{-1}(y)."""
    v_min = _min_dist_value(inst)
    slack_sq = inst.epsilon**2 - v_min**2
    if slack_sq < -_FEAS_SLACK * (1.0 + inst.epsilon**2):
        raise EmptyFeasibleSetError(
            f"epsilon = {inst.epsilon:.6e} below the minimal data-consistent distance {v_min:.6e}"
        )
    slack_sq = max(slack_sq, 0.0)
    mu = finite_mu(inst)
    if math.isinf(mu):
        return math.inf if slack_sq > 0.0 else 0.0
    return mu * math.sqrt(slack_sq)


def extremal_pair(inst: FiniteRecoveryInstance) -> Tuple[np.ndarray, np.ndarray]:
    """Pair f+- = f* +- u attaining the local radius.

    u is the worst-ratio kernel direction scaled so the model-set budget
    ||f* - P_V f*||^2 + ||u - P_V u||^2 = epsilon^2 is exhausted.
    """
    f_star = constrained_min_dist(inst)
    v_min = float(np.linalg.norm(_project_out_v(inst, f_star)))
    slack_sq = inst.epsilon**2 - v_min**2
    if slack_sq < -_FEAS_SLACK * (1.0 + inst.epsilon**2):
        raise EmptyFeasibleSetError("epsilon below the minimal data-consistent distance")
    slack_sq = max(slack_sq, 0.0)
    N = _kernel_basis(inst)
    if N.shape[1] == 0:
        raise ValueError("trivial kernel: the data determine f completely")
    B = _project_out_v(inst, N)
    _, svals, vh = scipy.linalg.svd(B, full_matrices=False)
    sigma_min = float(svals[-1])
    if sigma_min < _RANK_TOL:
        raise ValueError("kernel meets V nontrivially; the radius is infinite")
    w_min = vh[-1].conj()
    u = N @ (math.sqrt(slack_sq) / sigma_min * w_min)
    return f_star + u, f_star - u


def sample_feasible(inst: FiniteRecoveryInstance, count: int, seed: int) -> np.ndarray:
    """Rows are i.i.d. samples from K cap L^{-1}(y), uniform over kernel coordinates.

    Writes f = f* + N x and draws x uniformly in the ellipsoid
    {x : ||(I - P_V) N x|| <= sqrt(eps^2 - ||f* - P_V f*||^2)} by a uniform
    ball sample whose axes are rescaled by the singular values.
    """
    f_star = constrained_min_dist(inst)
    v_min = float(np.linalg.norm(_project_out_v(inst, f_star)))
    slack_sq = max(inst.epsilon**2 - v_min**2, 0.0)
    N = _kernel_basis(inst)
    q = N.shape[1]
    if q == 0:
        return np.tile(f_star, (count, 1))
    B = _project_out_v(inst, N)
    _, svals, vh = scipy.linalg.svd(B, full_matrices=False)
    if svals[-1] < _RANK_TOL:
        raise ValueError("kernel meets V nontrivially; the feasible set is unbounded")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, q)) + 1j * rng.standard_normal((count, q))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radii = rng.uniform(0.0, 1.0, size=count) ** (1.0 / (2 * q))
    ball = g * radii[:, None]
    coords = math.sqrt(slack_sq) * ball / svals[None, :]
    x = coords @ np.conj(vh)
    return f_star[None, :] + (N @ x.T).T


def random_instance(d: int, m: int, n: int, seed: int, eps_slack: float = 0.5) -> FiniteRecoveryInstance:
    """Seeded random instance with consistent data and feasible epsilon."""
    if not (1 <= m <= d) or n < 0 or n > d:
        raise ValueError("need 1 <= m <= d and 0 <= n <= d")
    rng = np.random.default_rng(seed)

    def cgauss(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    v_raw = cgauss(d, n) if n else np.zeros((d, 0), dtype=np.complex128)
    basis = scipy.linalg.orth(v_raw) if n else v_raw
    l_map = cgauss(m, d)
    f_true = cgauss(d)
    y = l_map @ f_true
    probe = FiniteRecoveryInstance(basis, l_map, y, 0.0)
    # Feasible epsilon: minimal distance plus seeded slack.
    v_min = _min_dist_value(probe)
    epsilon = v_min + eps_slack * (0.1 + rng.uniform())
    return FiniteRecoveryInstance(basis, l_map, y, float(epsilon))
