"""Dense complex linear algebra shared by the rest of the package.

Every rank decision uses the same relative convention: a singular value
counts as zero when it is at most ``tol * sigma_max``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "SvdResult",
    "Subspace",
    "as_matrix",
    "svd",
    "numerical_rank",
    "null_space",
    "orth",
    "least_squares",
    "principal_angle_distance",
]


def as_matrix(m, name="matrix"):
    """Return ``m`` as a finite 2-D complex array, rejecting anything else."""
    a = np.asarray(m, dtype=complex)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        bad = int(np.count_nonzero(~np.isfinite(a)))
        raise ValueError(f"{name} has {bad} non-finite entries")
    return a


@dataclass(frozen=True, eq=False)
class SvdResult:
    singular_values: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def reconstruct(self):
        return (self.left_basis * self.singular_values) @ self.right_basis.conj().T


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of C^ambient stored as a matrix with orthonormal columns."""

    ambient: int
    basis: np.ndarray
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b[:, None]
        if b.size == 0:
            b = np.zeros((self.ambient, 0), dtype=complex)
        if b.ndim != 2 or b.shape[0] != self.ambient:
            raise ValueError(f"basis shape {b.shape} does not match ambient {self.ambient}")
        if b.shape[1] > self.ambient:
            raise ValueError("more basis columns than the ambient dimension")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self):
        return self.basis.shape[1]

    @classmethod
    def trivial(cls, ambient):
        return cls(ambient, np.zeros((ambient, 0), dtype=complex))

    @classmethod
    def full(cls, ambient):
        return cls(ambient, np.eye(ambient, dtype=complex))

    @classmethod
    def span(cls, vectors, tol=DEFAULT_TOL):
        """Orthonormalize the columns of ``vectors`` (dependent columns dropped)."""
        a = as_matrix(vectors, "vectors")
        return cls(a.shape[0], orth(a, tol))

    def projector(self):
        return self.basis @ self.basis.conj().T

    def project(self, x):
        return self.basis @ (self.basis.conj().T @ x)

    def complement(self):
        if self.dim == 0:
            return Subspace.full(self.ambient)
        if self.dim == self.ambient:
            return Subspace.trivial(self.ambient)
        # left singular vectors beyond the rank span the complement
        u, _, _ = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(self.ambient, u[:, self.dim:])

    def orthonormality_defect(self):
        g = self.basis.conj().T @ self.basis
        return float(np.max(np.abs(g - np.eye(self.dim)), initial=0.0))


def svd(m):
    """Thin SVD with singular values in descending order."""
    a = as_matrix(m)
    if a.size == 0:
        raise ValueError("matrix must be non-empty")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return SvdResult(s, u, vh.conj().T)


def numerical_rank(s, tol=DEFAULT_TOL):
    s = np.asarray(s, dtype=float)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def null_space(m, tol=DEFAULT_TOL):
    """Orthonormal basis of the right singular vectors with sigma <= tol * sigma_max.

    An all-zero matrix has the whole domain as its kernel.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = as_matrix(m)
    n = a.shape[1]
    if a.shape[0] == 0:
        return Subspace.full(n)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    r = numerical_rank(s, tol)
    return Subspace(n, vh[r:].conj().T)


def orth(m, tol=DEFAULT_TOL):
    """Orthonormal basis for the column space of ``m`` (left singular vectors)."""
    a = as_matrix(m)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    return u[:, : numerical_rank(s, tol)]


def least_squares(a, b, tol=DEFAULT_TOL):
    """Minimum-Frobenius-norm ``X`` minimizing ``||a X - b||_F``."""
    a = as_matrix(a, "a")
    b_arr = np.asarray(b, dtype=complex)
    vector_rhs = b_arr.ndim == 1
    b = as_matrix(b_arr, "b")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: a has {a.shape[0]} rows, b has {b.shape[0]}")
    x, *_ = np.linalg.lstsq(a, b, rcond=tol)
    return x[:, 0] if vector_rhs else x


def _sin_largest_angle(p, q):
    # sine of the largest angle between a direction of p and the subspace q
    if p.dim == 0:
        return 0.0
    if q.dim == 0:
        return 1.0
    r = p.basis - q.project(p.basis)
    return float(min(1.0, np.linalg.norm(r, 2)))


def principal_angle_distance(p, q):
    """Sine of the largest principal angle between ``p`` and ``q``.

    Taken in both directions, so a proper inclusion counts as distance 1.
    """
    if p.ambient != q.ambient:
        raise ValueError(f"ambient mismatch: {p.ambient} vs {q.ambient}")
    return max(_sin_largest_angle(p, q), _sin_largest_angle(q, p))
