"""Optimal identification in H2 from point samples inside the disc.

The recovery map interpolates the data with an element of
span{monomials} + span{Cauchy kernels at the sample points} and is worst-case
optimal over approximability model sets.  For equispaced points on an inner
circle the kernel Gramian is circulant; that structure is used directly, both
because it yields closed forms and because the Gramian's condition number
grows like r**(-2(m-1)) and defeats dense factorization long before the
closed forms stop being exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from .core import (
    PointConfiguration,
    PointScheme,
    TaylorSeries,
    cauchy_kernel,
    eval_series,
    monomial_row,
)
from .errors import IllConditionedConfigurationError

# Reciprocal-condition floor for the dense (non-equispaced) Gramian path.
RCOND_MIN = 1e-12


@dataclass(frozen=True)
class GramPair:
    """Sample matrices of the identification problem.

    G[k, j] = zeta_k**j is the cross-Gramian of the monomial basis against the
    point evaluations; H[k, j] = 1 / (1 - conj(zeta_j) zeta_k) is the Gramian
    of the Cauchy kernels (Hermitian positive definite).
    """

    G: np.ndarray
    H: np.ndarray
    config: PointConfiguration
    n: int


def build_gram_pair(config: PointConfiguration, n: int) -> GramPair:
    """Assemble G (m x n) and H (m x m) for points strictly inside the disc."""
    m = config.m
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
    if not config.inside_disc:
        raise ValueError("point evaluation in H2 requires |zeta| < 1; torus points rejected")
    pts = config.points
    G = np.empty((m, n), dtype=np.complex128)
    H = np.empty((m, m), dtype=np.complex128)
    for k in range(m):
        G[k] = monomial_row(pts[k], n)
        for j in range(m):
            H[k, j] = cauchy_kernel(pts[j], pts[k])
    G.setflags(write=False)
    H.setflags(write=False)
    return GramPair(G, H, config, n)


def _is_equispaced_circle(config: PointConfiguration) -> bool:
    return config.scheme is PointScheme.EQUISPACED_CIRCLE


def _circulant_eigenvalues(r: float, m: int) -> np.ndarray:
    """Eigenvalues d_k = m r**(2(k-1)) / (1 - r**(2m)) of the equispaced Gramian."""
    return m * r ** (2.0 * np.arange(m)) / (1.0 - r ** (2 * m))


def equispaced_circulant_eig(r: float, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition H = U diag(d) U* of the equispaced kernel Gramian.

    U is the unitary DFT matrix with columns (1/sqrt(m)) (1, w**k, ..., w**((m-1)k)),
    w = exp(2 pi i / m).
    """
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    if m < 1:
        raise ValueError("m must be >= 1")
    idx = np.arange(m)
    U = np.exp(2j * np.pi * np.outer(idx, idx) / m) / math.sqrt(m)
    return U, _circulant_eigenvalues(r, m)


def _check_conditioning(H: np.ndarray) -> np.ndarray:
    """Eigenvalues of H, raising when the reciprocal condition drops below RCOND_MIN."""
    w = np.linalg.eigvalsh(H)
    if w[0] <= 0.0 or w[0] / w[-1] < RCOND_MIN:
        raise IllConditionedConfigurationError(
            f"kernel Gramian reciprocal condition {w[0] / w[-1]:.3e} below {RCOND_MIN:.0e}"
        )
    return w


def _gram_product_dense(gram: GramPair) -> np.ndarray:
    """G* H^{-1} G by Cholesky solve; the generic route for arbitrary points."""
    _check_conditioning(gram.H)
    cho = scipy.linalg.cho_factor(gram.H, lower=True)
    X = scipy.linalg.cho_solve(cho, gram.G)
    A = gram.G.conj().T @ X
    return 0.5 * (A + A.conj().T)


def gram_product(gram: GramPair) -> np.ndarray:
    """The n x n Hermitian matrix G* H^{-1} G.

    Equispaced inner-circle configurations diagonalize in the DFT basis:
    U* G = sqrt(m) [diag(1, r, ..., r**(n-1)); 0], so the product is the
    diagonal matrix with entries m r**(2(j-1)) / d_j.  Computing it that way
    stays exact for any conditioning of H.
    """
    if _is_equispaced_circle(gram.config):
        m, n, r = gram.config.m, gram.n, gram.config.radius
        d = _circulant_eigenvalues(r, m)
        q = m * r ** (2.0 * np.arange(n)) / d[:n]
        return np.diag(q.astype(np.complex128))
    return _gram_product_dense(gram)


def compatibility_indicator(gram: GramPair) -> float:
    """mu = 1 / sqrt(lambda_min(G* H^{-1} G)), the optimal worst-case constant."""
    lam = np.linalg.eigvalsh(gram_product(gram))
    lam_min = float(lam[0])
    if lam_min <= 0.0:
        raise IllConditionedConfigurationError(
            f"Gram product numerically indefinite (lambda_min = {lam_min:.3e})"
        )
    return 1.0 / math.sqrt(lam_min)


def equispaced_mu_closed_form(r: float, m: int) -> float:
    """mu = 1 / sqrt(1 - r**(2m)) for m equispaced points on the circle |z| = r.

    Independent of the polynomial-space dimension n <= m.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    if m < 1:
        raise ValueError("m must be >= 1")
    return 1.0 / math.sqrt(1.0 - r ** (2 * m))


@dataclass(frozen=True)
class RecoveryElement:
    """Recovered element sum_j c_j z**j + sum_k d_k E_{zeta_k}."""

    c: np.ndarray
    d: np.ndarray
    gram: GramPair

    def evaluate(self, z: complex) -> complex:
        val = eval_series(TaylorSeries(self.c), z) if self.c.size else 0.0 + 0.0j
        pts = self.gram.config.points
        for k in range(pts.size):
            val += self.d[k] * cauchy_kernel(pts[k], z)
        return complex(val)

    def taylor_coefficients(self, length: int) -> np.ndarray:
        """First `length` Taylor coefficients; kernel parts decay like radius**j."""
        out = np.zeros(length, dtype=np.complex128)
        ncopy = min(length, self.c.size)
        out[:ncopy] = self.c[:ncopy]
        pts = self.gram.config.points
        # Row j of powmat holds conj(zeta_k)**j.
        powmat = np.ones((length, pts.size), dtype=np.complex128)
        base = np.conj(pts)
        for j in range(1, length):
            powmat[j] = powmat[j - 1] * base
        out += powmat @ self.d
        return out


def optimal_identify(gram: GramPair, y: np.ndarray) -> RecoveryElement:
    """Worst-case-optimal recovery from data y_k = F(zeta_k).

    c = (G* H^{-1} G)^{-1} G* H^{-1} y and d = H^{-1} (y - G c); the result
    interpolates the data.  Equispaced configurations are solved in the DFT
    eigenbasis of H, where the residual data y - G c vanishes exactly on the
    first n modes.
    """
    y = np.asarray(y, dtype=np.complex128)
    m, n = gram.config.m, gram.n
    if y.shape != (m,):
        raise ValueError(f"data must have shape ({m},)")

    if _is_equispaced_circle(gram.config):
        r = gram.config.radius
        # The closed forms keep mu exact at any conditioning, but inverting H
        # on *data* amplifies the float noise of y by d_max/d_min = r**-2(m-1);
        # past the same rcond floor as the dense path the recovery is garbage.
        rcond = r ** (2 * (m - 1))
        if rcond < RCOND_MIN:
            raise IllConditionedConfigurationError(
                f"equispaced kernel Gramian reciprocal condition {rcond:.3e} below "
                f"{RCOND_MIN:.0e}; data-dependent recovery is not meaningful in float64"
            )
        d_eig = _circulant_eigenvalues(r, m)
        ytil = np.fft.fft(y) / math.sqrt(m)
        c = ytil[:n] / (math.sqrt(m) * r ** np.arange(n))
        w = np.zeros(m, dtype=np.complex128)
        w[n:] = ytil[n:] / d_eig[n:]
        d = math.sqrt(m) * np.fft.ifft(w)
        return RecoveryElement(c, d, gram)

    _check_conditioning(gram.H)
    cho = scipy.linalg.cho_factor(gram.H, lower=True)
    Hinv_y = scipy.linalg.cho_solve(cho, y)
    Hinv_G = scipy.linalg.cho_solve(cho, gram.G)
    A = gram.G.conj().T @ Hinv_G
    A = 0.5 * (A + A.conj().T)
    c = np.linalg.solve(A, gram.G.conj().T @ Hinv_y)
    d = scipy.linalg.cho_solve(cho, y - gram.G @ c)
    return RecoveryElement(c, d, gram)


def h2_error(truth: TaylorSeries, rec: RecoveryElement) -> float:
    """H2 norm of truth minus recovery, via exact Gramian identities.

    Uses ||F - R||^2 = ||F||^2 + ||R||^2 - 2 Re<F, R> with
    ||R||^2 = ||c||^2 + d* H d + 2 Re(d* G c) and
    <F, R> = <b_{1:n}, c> + sum_k conj(d_k) F(zeta_k); no quadrature.
    """
    b = truth.coeffs
    c, d = rec.c, rec.d
    G, H = rec.gram.G, rec.gram.H
    pts = rec.gram.config.points

    norm_truth_sq = float(np.vdot(b, b).real)
    norm_rec_sq = (
        float(np.vdot(c, c).real)
        + float(np.vdot(d, H @ d).real)
        + 2.0 * float((np.conj(d) @ (G @ c)).real)
    )
    k = min(b.size, c.size)
    inner = np.vdot(c[:k], b[:k])
    samples = np.array([eval_series(truth, z) for z in pts])
    inner += np.vdot(d, samples)
    err_sq = norm_truth_sq + norm_rec_sq - 2.0 * inner.real
    return math.sqrt(max(err_sq, 0.0))


def recovery_error_coefficients(truth: TaylorSeries, rec: RecoveryElement, tail_tol: float = 1e-18) -> float:
    """Upper estimate of ||truth - recovery||_{H2} computed coefficient by coefficient.

    Independent of h2_error's Gramian identities: expands the kernel part of
    the recovery far enough that the neglected geometric tail is below
    tail_tol, then adds that tail bound.  Useful where the Gramian route
    cancels catastrophically (errors tiny relative to the norms involved).
    """
    radius = float(np.max(np.abs(rec.gram.config.points)))
    d_l1 = float(np.sum(np.abs(rec.d)))
    length = max(len(truth), rec.c.size)
    tail_bound = 0.0
    if d_l1 > 0.0 and radius > 0.0:
        while radius**length * d_l1 / (1.0 - radius) > tail_tol and length < 100_000:
            length += 32
        tail_bound = radius**length * d_l1 / (1.0 - radius)
    diff = rec.taylor_coefficients(length)
    diff[: len(truth)] -= truth.coeffs
    return float(np.linalg.norm(diff)) + tail_bound


def interpolate_equispaced(f: TaylorSeries, r: float, m: int) -> TaylorSeries:
    """Degree-(m-1) interpolant of f at the m equispaced points on |z| = r.

    Output coefficient l is sum_t f_{l+tm} r**(tm): interpolation folds every
    coefficient onto its residue class mod m with geometric weights.  Fixes
    polynomials of degree < m and contracts H2 norms up to 1/sqrt(1 - r**(2m)).
    """
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    if m < 1:
        raise ValueError("m must be >= 1")
    coeffs = f.coeffs
    blocks = -(-coeffs.size // m)
    padded = np.zeros(blocks * m, dtype=np.complex128)
    padded[: coeffs.size] = coeffs
    weights = (r**m) ** np.arange(blocks)
    out = padded.reshape(blocks, m).T @ weights
    return TaylorSeries(out)
