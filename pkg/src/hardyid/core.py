"""Truncated Hardy-space elements, sample-point configurations, model-set sampling.

Everything downstream works with finite Taylor expansions F(z) = sum_j f_j z^j
on the closed unit disc.  The H2 inner product is the Euclidean inner product
of coefficient vectors, and point evaluation at |zeta| < 1 is represented by
the Cauchy kernel E_zeta(z) = 1 / (1 - conj(zeta) z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateDenominatorError

TWO_PI = 2.0 * math.pi

# Minimum angular separation enforced when drawing random configurations;
# closer pairs make the kernel Gramian numerically singular.
MIN_ANGULAR_GAP = 1e-12


def _as_complex_vector(values, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a nonempty 1-d complex vector")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} must contain only finite entries")
    return arr


@dataclass(frozen=True)
class TaylorSeries:
    """Finite coefficient vector (f_0, ..., f_{N-1}) of a truncated H2 element."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _as_complex_vector(self.coeffs, "coeffs")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __len__(self) -> int:
        return int(self.coeffs.size)

    def h2_norm(self) -> float:
        """sqrt(sum |f_j|^2), the H2 norm of the truncated series."""
        return float(np.linalg.norm(self.coeffs))

    def tail_norm(self, n: int) -> float:
        """l2 norm of coefficients with index >= n.

        This is the exact H2 distance of the series to polynomials of
        degree < n.
        """
        if n < 0:
            raise ValueError("n must be >= 0")
        return float(np.linalg.norm(self.coeffs[n:]))

    def tail_l1(self, n: int) -> float:
        """l1 norm of coefficients with index >= n.

        Upper bound for the sup-norm distance of the series to polynomials of
        degree < n on the closed disc.
        """
        if n < 0:
            raise ValueError("n must be >= 0")
        return float(np.sum(np.abs(self.coeffs[n:])))


def monomial_row(zeta: complex, n: int) -> np.ndarray:
    """Row vector (1, zeta, ..., zeta^{n-1}) of the monomial basis at one point."""
    if n < 1:
        raise ValueError("n must be >= 1")
    row = np.empty(n, dtype=np.complex128)
    row[0] = 1.0
    if n > 1:
        row[1:] = np.cumprod(np.full(n - 1, complex(zeta), dtype=np.complex128))
    return row


def cauchy_kernel(zeta: complex, z: complex) -> complex:
    """Cauchy kernel value E_zeta(z) = 1 / (1 - conj(zeta) z)."""
    den = 1.0 - np.conj(zeta) * z
    if abs(den) < 1e-13:
        raise DegenerateDenominatorError(
            f"kernel denominator |1 - conj({zeta}) * {z}| = {abs(den):.3e} below threshold"
        )
    return complex(1.0 / den)


def cauchy_kernel_series(zeta: complex, length: int) -> TaylorSeries:
    """Truncated Taylor expansion of E_zeta: coefficient j equals conj(zeta)^j."""
    return TaylorSeries(monomial_row(np.conj(zeta), length))


def h2_inner(f: TaylorSeries, g: TaylorSeries) -> complex:
    """H2 inner product sum_j f_j conj(g_j); shorter series is zero-padded."""
    k = min(len(f), len(g))
    # vdot conjugates its first argument.
    return complex(np.vdot(g.coeffs[:k], f.coeffs[:k]))


def eval_series(f: TaylorSeries, z: complex) -> complex:
    """Horner evaluation of the truncated series at |z| <= 1."""
    if abs(z) > 1.0 + 1e-12:
        raise ValueError(f"evaluation point |z| = {abs(z):.6f} lies outside the closed disc")
    acc = 0.0 + 0.0j
    for coeff in f.coeffs[::-1]:
        acc = acc * z + coeff
    return complex(acc)


def eval_series_many(f: TaylorSeries, z: np.ndarray) -> np.ndarray:
    """Vectorized Horner evaluation at an array of points in the closed disc."""
    z = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise ValueError("evaluation points must lie in the closed unit disc")
    acc = np.zeros_like(z)
    for coeff in f.coeffs[::-1]:
        acc = acc * z + coeff
    return acc


def sup_norm_on_torus(f: TaylorSeries, grid_size: int = 4096) -> float:
    """Estimate of sup_{|z|=1} |f(z)| by dense sampling plus one parabolic refinement.

    Resolves polynomials of degree much smaller than grid_size; reported value
    is a lower estimate within O((deg/grid_size)^2) relative slack.
    """
    theta = TWO_PI * np.arange(grid_size) / grid_size
    vals = np.abs(eval_series_many(f, np.exp(1j * theta)))
    k = int(np.argmax(vals))
    # Parabolic fit through the discrete peak and its neighbours.
    ym, y0, yp = vals[(k - 1) % grid_size], vals[k], vals[(k + 1) % grid_size]
    denom = ym - 2.0 * y0 + yp
    if abs(denom) > 1e-300:
        shift = 0.5 * (ym - yp) / denom
        shift = float(np.clip(shift, -1.0, 1.0))
        refined = abs(eval_series(f, np.exp(1j * (theta[k] + shift * TWO_PI / grid_size))))
        return float(max(y0, refined))
    return float(y0)


class PointScheme(str, Enum):
    EQUISPACED_CIRCLE = "equispaced_circle"
    RANDOM_CIRCLE = "random_circle"
    EQUISPACED_TORUS = "equispaced_torus"
    RANDOM_TORUS = "random_torus"
    EXPLICIT = "explicit"

    @property
    def is_random(self) -> bool:
        return self in (PointScheme.RANDOM_CIRCLE, PointScheme.RANDOM_TORUS)

    @property
    def is_torus(self) -> bool:
        return self in (PointScheme.EQUISPACED_TORUS, PointScheme.RANDOM_TORUS)


def _distinct_angles(rng: np.random.Generator, m: int) -> np.ndarray:
    """Draw m i.i.d. uniform angles, resampling until pairwise separation holds."""
    for _ in range(64):
        theta = rng.uniform(0.0, TWO_PI, size=m)
        if m == 1:
            return theta
        srt = np.sort(theta)
        gaps = np.diff(srt, append=srt[0] + TWO_PI)
        if np.min(gaps) > MIN_ANGULAR_GAP:
            return theta
    raise RuntimeError("could not draw pairwise-distinct random angles")


@dataclass(frozen=True)
class PointConfiguration:
    """Evaluation points zeta_1..zeta_m with their generation scheme.

    Circle schemes place points on |z| = r with r < 1, torus schemes on
    |z| = 1.  A seed is stored exactly when the scheme is random.
    """

    points: np.ndarray
    scheme: PointScheme
    radius: float
    seed: Optional[int] = None

    def __post_init__(self):
        pts = _as_complex_vector(self.points, "points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.scheme.is_random != (self.seed is not None):
            raise ValueError("seed must be present exactly for random schemes")
        if not (0.0 < self.radius <= 1.0):
            raise ValueError("radius must lie in (0, 1]")
        if self.scheme.is_torus:
            if abs(self.radius - 1.0) > 0.0:
                raise ValueError("torus schemes require radius 1")
            if np.max(np.abs(np.abs(pts) - 1.0)) > 1e-12:
                raise ValueError("torus points must have |zeta| = 1")
        elif self.scheme is not PointScheme.EXPLICIT:
            if self.radius >= 1.0:
                raise ValueError("circle schemes require radius < 1")
            if np.max(np.abs(np.abs(pts) - self.radius)) > 1e-12:
                raise ValueError("circle points must have |zeta| = radius")
        if self.m > 1:
            diffs = np.abs(pts[:, None] - pts[None, :])
            np.fill_diagonal(diffs, np.inf)
            if np.min(diffs) == 0.0:
                raise ValueError("points must be pairwise distinct")

    @property
    def m(self) -> int:
        return int(self.points.size)

    @property
    def on_torus(self) -> bool:
        return bool(np.max(np.abs(np.abs(self.points) - 1.0)) <= 1e-12)

    @property
    def inside_disc(self) -> bool:
        return bool(np.max(np.abs(self.points)) < 1.0)

    @classmethod
    def equispaced_circle(cls, m: int, r: float) -> "PointConfiguration":
        """zeta_k = r exp(i 2 pi (k-1) / m), k = 1..m."""
        if m < 1:
            raise ValueError("m must be >= 1")
        pts = r * np.exp(1j * TWO_PI * np.arange(m) / m)
        return cls(pts, PointScheme.EQUISPACED_CIRCLE, float(r))

    @classmethod
    def random_circle(cls, m: int, r: float, seed: int) -> "PointConfiguration":
        if m < 1:
            raise ValueError("m must be >= 1")
        theta = _distinct_angles(np.random.default_rng(seed), m)
        return cls(r * np.exp(1j * theta), PointScheme.RANDOM_CIRCLE, float(r), seed)

    @classmethod
    def equispaced_torus(cls, m: int) -> "PointConfiguration":
        if m < 1:
            raise ValueError("m must be >= 1")
        pts = np.exp(1j * TWO_PI * np.arange(m) / m)
        return cls(pts, PointScheme.EQUISPACED_TORUS, 1.0)

    @classmethod
    def random_torus(cls, m: int, seed: int) -> "PointConfiguration":
        if m < 1:
            raise ValueError("m must be >= 1")
        theta = _distinct_angles(np.random.default_rng(seed), m)
        return cls(np.exp(1j * theta), PointScheme.RANDOM_TORUS, 1.0, seed)

    @classmethod
    def explicit(cls, points: Sequence[complex]) -> "PointConfiguration":
        pts = _as_complex_vector(points, "points")
        radius = float(max(np.max(np.abs(pts)), 1e-300))
        return cls(pts, PointScheme.EXPLICIT, min(radius, 1.0))


@dataclass(frozen=True)
class ModelSetParams:
    """Approximability model: functions within eps_n of polynomials of degree < n.

    The coefficient-decay form uses eps_n = scale * rho**(-n) with rho > 1.
    """

    n: int
    epsilon: float = 0.0
    rho: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if not self.rho > 1.0:
            raise ValueError("rho must be > 1")
        if not self.scale > 0.0:
            raise ValueError("scale must be > 0")

    def eps_n(self, n: Optional[int] = None) -> float:
        """Decay-model tolerance scale * rho**(-n)."""
        k = self.n if n is None else n
        return self.scale * self.rho ** (-k)

    def effective_eps(self, n: Optional[int] = None) -> float:
        """Guaranteed H2 distance bound for functions drawn by sample_model_function.

        Coefficients |f_j| <= scale * rho**(-j) give
        dist(F, P_n) <= scale * rho**(-n) / sqrt(1 - rho**(-2)).
        """
        k = self.n if n is None else n
        return self.scale * self.rho ** (-k) / math.sqrt(1.0 - self.rho ** (-2))

    def default_truncation(self) -> int:
        """Smallest N with rho**(-N) < 1e-14, so truncation sits below test tolerances."""
        return int(math.ceil(14.0 / math.log10(self.rho))) + 1


def _uniform_disc(rng: np.random.Generator, count: int) -> np.ndarray:
    """i.i.d. points uniform on the closed unit disc, by rejection from the square."""
    out = np.empty(count, dtype=np.complex128)
    filled = 0
    while filled < count:
        need = count - filled
        cand = rng.uniform(-1.0, 1.0, size=(2 * need + 8, 2))
        keep = cand[cand[:, 0] ** 2 + cand[:, 1] ** 2 <= 1.0]
        take = min(len(keep), need)
        out[filled : filled + take] = keep[:take, 0] + 1j * keep[:take, 1]
        filled += take
    return out


def sample_model_function(params: ModelSetParams, length: int, seed: int) -> TaylorSeries:
    """Draw F with f_j = scale * rho**(-j) * u_j, u_j i.i.d. uniform on the unit disc.

    Deterministic in (params, length, seed).  Every draw satisfies
    dist(F, P_n) <= params.effective_eps(n) for all n.
    """
    if length < params.n:
        raise ValueError("length must be >= params.n")
    rng = np.random.default_rng(seed)
    u = _uniform_disc(rng, length)
    envelope = params.scale * params.rho ** (-np.arange(length, dtype=np.float64))
    return TaylorSeries(envelope * u)
