"""Frames in C^m: synthesis operators, bounds, kernels, and operator orbits.

A :class:`FrameSystem` is a finite section of an (in general infinite)
system.  For an orbit ``f_n = T^n phi`` of a diagonal ``T = diag(lambda)``
the synthesis operator evaluates ``V(c)`` at the eigenvalues:
``(U c)_k = phi_k * sum_n c_n lambda_k^n``.  Its kernel is therefore the
set of polynomials of degree < N vanishing on the spectrum, which is the
section of ``B H^2`` for the Blaschke product ``B`` with those zeros.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .hardy import CoefficientSequence
from .numerics import DEFAULT_TOL, Subspace, as_matrix, least_squares, null_space
from .shiftspace import invariance_report

EXACTNESS_TOL = 1e-8
EXHAUSTIVE_LIMIT = 20
RESIDUAL_BOUNDED = 1e-6
RESIDUAL_UNBOUNDED = 0.1
NORM_STABLE = 0.05
NORM_GROWTH_LIMIT = 2.0

__all__ = [
    "FrameSystem",
    "FrameBounds",
    "OrbitSpec",
    "OrbitFrame",
    "RieszFrameReport",
    "ExcessReport",
    "RecoveredOperator",
    "ProbeReport",
    "synthesis_apply",
    "frame_bounds",
    "kernel",
    "riesz_basis_check",
    "riesz_frame_check",
    "carleson_separation",
    "exponential_schedule",
    "balanced_seed",
    "build_orbit_frame",
    "excess_test",
    "recover_operator",
    "boundedness_probe",
    "adjoint_orbit_identity_check",
]


@dataclass(frozen=True, eq=False)
class FrameSystem:
    """Ordered vectors in C^m stored as the columns of the synthesis matrix."""

    synthesis: np.ndarray
    orbit: Optional["OrbitSpec"] = None

    def __post_init__(self):
        u = as_matrix(self.synthesis, "synthesis").copy()
        u.setflags(write=False)
        object.__setattr__(self, "synthesis", u)

    @classmethod
    def from_vectors(cls, vectors):
        return cls(np.column_stack([np.asarray(v, dtype=complex) for v in vectors]))

    @property
    def ambient_dim(self):
        return self.synthesis.shape[0]

    @property
    def count(self):
        return self.synthesis.shape[1]

    @property
    def vectors(self):
        return [self.synthesis[:, j] for j in range(self.count)]

    def without(self, index):
        return FrameSystem(np.delete(self.synthesis, index, axis=1))

    def subfamily(self, indices):
        return FrameSystem(self.synthesis[:, list(indices)])


def synthesis_apply(fs, c):
    """``sum c_n f_n``; shorter coefficient sequences are zero-padded."""
    x = np.asarray(getattr(c, "coeffs", c), dtype=complex).reshape(-1)
    if x.shape[0] > fs.count:
        raise ValueError(f"{x.shape[0]} coefficients for {fs.count} vectors")
    return fs.synthesis[:, : x.shape[0]] @ x


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper * (1 + 1e-12):
            raise ValueError(f"invalid frame bounds ({self.lower}, {self.upper})")

    def is_frame(self, tol=DEFAULT_TOL):
        return self.lower > (tol**2) * self.upper and self.upper > 0


def _singular_values(u):
    if u.size == 0:
        return np.zeros(0)
    return np.linalg.svd(u, compute_uv=False)


def frame_bounds(fs):
    """Extreme eigenvalues of the frame operator ``U U^H``."""
    if fs.count == 0:
        raise ValueError("empty system")
    s = _singular_values(fs.synthesis)
    lower = s[fs.ambient_dim - 1] ** 2 if fs.count >= fs.ambient_dim else 0.0
    return FrameBounds(float(lower), float(s[0] ** 2))


def kernel(fs, tol=DEFAULT_TOL):
    return null_space(fs.synthesis, tol)


@dataclass(frozen=True)
class RieszBasisReport:
    is_riesz_basis: bool
    bounds: FrameBounds


def riesz_basis_check(fs, tol=DEFAULT_TOL):
    bounds = frame_bounds(fs)
    ok = fs.count == fs.ambient_dim and bounds.is_frame(tol)
    return RieszBasisReport(bool(ok), bounds)


def _sequence_bounds(u, tol):
    # bounds of a family as a frame for its own span
    s = _singular_values(u)
    if s.size == 0 or s[0] == 0:
        return 0.0, 0.0
    nz = s[s > tol * s[0]]
    return float(nz[-1] ** 2), float(nz[0] ** 2)


@dataclass(frozen=True)
class RieszFrameReport:
    bounds: FrameBounds
    lower_witness: tuple
    upper_witness: tuple
    subsets_checked: int
    total_subsets: int
    exhaustive: bool
    seed: Optional[int] = None

    @property
    def coverage(self):
        return self.subsets_checked / self.total_subsets


def _random_subsets(n, count, rng):
    seen = set()
    while len(seen) < count:
        mask = rng.integers(0, 2, size=n).astype(bool)
        if mask.any():
            seen.add(tuple(np.flatnonzero(mask)))
    return sorted(seen, key=lambda t: (len(t), t))


def riesz_frame_check(fs, max_subsets=None, seed=0, tol=DEFAULT_TOL):
    """Uniform frame-sequence bounds over nonempty subfamilies.

    Exhaustive for up to 20 vectors.  Larger systems need ``max_subsets``,
    in which case that many distinct subfamilies are drawn uniformly with
    the given seed and the coverage is reported.
    """
    n = fs.count
    total = 2**n - 1
    if max_subsets is None or max_subsets >= total:
        if n > EXHAUSTIVE_LIMIT:
            raise ValueError(f"{n} vectors is too many to enumerate; pass max_subsets to sample")
        subsets = (
            c for k in range(1, n + 1) for c in itertools.combinations(range(n), k)
        )
        exhaustive, seed = True, None
    else:
        subsets = _random_subsets(n, int(max_subsets), np.random.default_rng(seed))
        exhaustive = False
    lo, hi = np.inf, -np.inf
    lo_w = hi_w = ()
    checked = 0
    u = fs.synthesis
    for sub in subsets:
        a, b = _sequence_bounds(u[:, sub], tol)
        checked += 1
        if a < lo:
            lo, lo_w = a, sub
        if b > hi:
            hi, hi_w = b, sub
    return RieszFrameReport(FrameBounds(lo, hi), lo_w, hi_w, checked, total, exhaustive, seed)


def carleson_separation(eigenvalues):
    """``min_k prod_{j != k} |lambda_j - lambda_k| / |1 - conj(lambda_j) lambda_k|``."""
    lam = np.asarray(eigenvalues, dtype=complex).reshape(-1)
    if lam.size == 0:
        raise ValueError("no points")
    if np.any(np.abs(lam) >= 1):
        raise ValueError("points must lie strictly inside the unit disk")
    if np.unique(lam).size != lam.size:
        raise ValueError("repeated points have separation 0")
    rho = np.abs(lam[:, None] - lam[None, :]) / np.abs(1 - np.conj(lam[:, None]) * lam[None, :])
    np.fill_diagonal(rho, 1.0)
    return float(np.min(np.prod(rho, axis=0)))


def exponential_schedule(k):
    """``1 - 2^-(j+1)`` for ``j = 0..k-1``."""
    return 1.0 - 2.0 ** -(np.arange(k) + 1.0)


def balanced_seed(eigenvalues):
    """Seed components ``sqrt(1 - |lambda_k|^2)``."""
    return np.sqrt(1.0 - np.abs(np.asarray(eigenvalues)) ** 2)


@dataclass(frozen=True, eq=False)
class OrbitSpec:
    eigenvalues: tuple
    seed: tuple
    orbit_length: int

    def __post_init__(self):
        lam = tuple(complex(x) for x in np.asarray(self.eigenvalues).reshape(-1))
        seed = tuple(complex(x) for x in np.asarray(self.seed).reshape(-1))
        if len(seed) != len(lam):
            raise ValueError("seed and eigenvalue counts differ")
        if any(abs(x) >= 1 for x in lam):
            raise ValueError("eigenvalues must lie strictly inside the unit disk")
        if not all(np.isfinite(seed)):
            raise ValueError("seed components must be finite")
        if self.orbit_length < len(lam):
            raise ValueError("orbit length shorter than the number of eigenvalues")
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "orbit_length", int(self.orbit_length))

    def with_length(self, n):
        return OrbitSpec(self.eigenvalues, self.seed, n)


@dataclass(frozen=True, eq=False)
class OrbitFrame:
    system: FrameSystem
    operator: np.ndarray
    separation: float
    ratio_min: float
    ratio_max: float
    unreachable: tuple = ()


def build_orbit_frame(spec):
    """Vectors ``T^n phi``, ``0 <= n < N``, for ``T = diag(eigenvalues)``.

    Diagnostics carry the separation constant and the range of
    ``|phi_k| / sqrt(1 - |lambda_k|^2)``.
    """
    lam = np.array(spec.eigenvalues)
    phi = np.array(spec.seed)
    delta = carleson_separation(lam)
    powers = lam[:, None] ** np.arange(spec.orbit_length)[None, :]
    u = phi[:, None] * powers
    ratio = np.abs(phi) / np.sqrt(1.0 - np.abs(lam) ** 2)
    dead = tuple(int(k) for k in np.flatnonzero(phi == 0))
    if dead:
        warnings.warn(f"seed vanishes on coordinates {dead}; they are never reached", stacklevel=2)
    return OrbitFrame(
        FrameSystem(u, orbit=spec),
        np.diag(lam),
        delta,
        float(ratio.min()),
        float(ratio.max()),
        dead,
    )


@dataclass(frozen=True)
class ExcessReport:
    survives: tuple
    sigma_min_after: tuple
    threshold: float

    @property
    def all_survive(self):
        return all(self.survives)

    @property
    def exact(self):
        return not any(self.survives)


def excess_test(fs, tol=EXACTNESS_TOL):
    """Delete each vector in turn and check the rest still spans C^m."""
    u = fs.synthesis
    m = fs.ambient_dim
    s = _singular_values(u)
    if not frame_bounds(fs).is_frame():
        raise ValueError("system does not span the ambient space")
    threshold = tol * s[0]
    sig = []
    for j in range(fs.count):
        rest = np.delete(u, j, axis=1)
        sr = _singular_values(rest)
        sig.append(float(sr[m - 1]) if rest.shape[1] >= m else 0.0)
    return ExcessReport(tuple(x > threshold for x in sig), tuple(sig), float(threshold))


@dataclass(frozen=True, eq=False)
class RecoveredOperator:
    operator: np.ndarray
    residual: float
    norm: float


def recover_operator(fs, tol=DEFAULT_TOL):
    """Least-squares ``T`` with ``T f_n = f_{n+1}`` for consecutive pairs.

    ``residual`` is ``||T F_0 - F_1||_F / ||F_1||_F``.
    """
    u = fs.synthesis
    m, n = u.shape
    if n < m + 1:
        raise ValueError(f"need at least {m + 1} vectors, got {n}")
    if not frame_bounds(fs).is_frame(tol):
        raise ValueError("vectors do not span the ambient space")
    f0, f1 = u[:, :-1], u[:, 1:]
    t = least_squares(f0.T, f1.T, tol).T
    fit = np.linalg.norm(t @ f0 - f1) / max(np.linalg.norm(f1), np.finfo(float).tiny)
    return RecoveredOperator(t, float(fit), float(np.linalg.norm(t, 2)))


@dataclass(frozen=True)
class ProbeReport:
    verdict: str
    kernel_dim: int
    kernel_invariance_residual: float
    operator_norm_estimate: Optional[float]
    refined_norm_estimate: Optional[float]
    growth: Optional[float]
    branch: str = ""


def boundedness_probe(fs, refined=None, tol=DEFAULT_TOL):
    """Couple kernel shift-invariance with the growth of the recovered operator norm.

    ``refined`` is the same system at twice the orbit length; orbit frames
    build it themselves.  Without it only the residual side can decide, so a
    small residual alone gives ``INCONCLUSIVE``.
    """
    ker = kernel(fs, tol)
    if ker.dim == 0:
        norm = None
        if fs.count > fs.ambient_dim and frame_bounds(fs).is_frame(tol):
            norm = recover_operator(fs, tol).norm
        return ProbeReport("BOUNDED-CONSISTENT", 0, 0.0, norm, None, None, "trivial kernel")
    residual = invariance_report(ker).residual
    try:
        norm = recover_operator(fs, tol).norm
    except ValueError:
        norm = None
    if refined is None and fs.orbit is not None:
        refined = build_orbit_frame(fs.orbit.with_length(2 * fs.count)).system
    refined_norm = growth = None
    if refined is not None and norm:
        try:
            refined_norm = recover_operator(refined, tol).norm
            growth = refined_norm / norm
        except ValueError:
            pass
    if residual > RESIDUAL_UNBOUNDED or (growth is not None and growth > NORM_GROWTH_LIMIT):
        verdict = "UNBOUNDED-SUSPECT"
    elif residual < RESIDUAL_BOUNDED and growth is not None and growth < 1 + NORM_STABLE:
        verdict = "BOUNDED-CONSISTENT"
    else:
        verdict = "INCONCLUSIVE"
    return ProbeReport(verdict, ker.dim, residual, norm, refined_norm, growth, "shift-invariant kernel test")


def adjoint_orbit_identity_check(a, f, g, n_max):
    """``max_n |<a^n f, g> - <f, (a^H)^n g>|`` over ``0 <= n <= n_max``."""
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise ValueError("operator must be square")
    f = np.asarray(f, dtype=complex).reshape(-1)
    g = np.asarray(g, dtype=complex).reshape(-1)
    if f.shape[0] != a.shape[0] or g.shape[0] != a.shape[0]:
        raise ValueError("vector length does not match the operator")
    ah = a.conj().T
    x, y = f, g
    worst = 0.0
    for n in range(n_max + 1):
        if n:
            x, y = a @ x, ah @ y
        worst = max(worst, abs(np.vdot(g, x) - np.vdot(y, f)))
    return float(worst)
