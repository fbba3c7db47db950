"""Subspaces of truncated l2(N_0) under the right shift.

At truncation N the shift is nilpotent: it pushes the last coordinate out
of the space. Invariance is therefore tested on the part of a subspace that
the shift does not push across that edge, ``W_edge = {w in W : w[N-1] = 0}``.
If ``M`` is a shift-invariant subspace of l2, its section ``M ∩ C^N`` passes
this test exactly, which is the property the frame kernels in this package
have.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hardy import (
    LOSS_THRESHOLD,
    CoefficientSequence,
    blaschke_numerator,
    shift_coefficients,
)
from .numerics import DEFAULT_TOL, Subspace, null_space, orth, principal_angle_distance

INVARIANCE_GATE = 1e-6
WANDERING_SPLIT = 1e-6
PHASE_FLOOR = 1e-10

__all__ = [
    "Subspace",
    "InvarianceReport",
    "BeurlingResult",
    "NotInvariantError",
    "WanderingDimensionError",
    "right_shift",
    "shift_columns",
    "edge_subspace",
    "invariance_report",
    "invariance_residual",
    "reducing_residual",
    "cyclic_span",
    "inner_section",
    "beurling_extract",
    "overlap",
]


class NotInvariantError(ValueError):
    def __init__(self, residual, gate):
        super().__init__(f"invariance residual {residual:.3e} exceeds gate {gate:.1e}")
        self.residual = residual
        self.gate = gate


class WanderingDimensionError(ValueError):
    """The wandering subspace W ⊖ SW is not one-dimensional."""

    def __init__(self, dimension, singular_values):
        super().__init__(f"wandering subspace has numerical dimension {dimension}, expected 1")
        self.dimension = dimension
        self.singular_values = singular_values


def right_shift(c):
    coeffs, lost = shift_coefficients(c.coeffs)
    return CoefficientSequence(coeffs, lost)


def shift_columns(x):
    out = np.zeros_like(x)
    out[1:] = x[:-1]
    return out


def edge_subspace(w):
    """``W_edge`` and the number of basis directions removed to form it (0 or 1)."""
    if w.dim == 0:
        return w, 0
    top = w.basis[-1, :]
    if np.linalg.norm(top) <= LOSS_THRESHOLD:
        return w, 0
    inner = null_space(top[None, :])
    return Subspace(w.ambient, w.basis @ inner.basis), w.dim - inner.dim


@dataclass(frozen=True)
class InvarianceReport:
    residual: float
    checked: int
    excluded_edge: int
    excluded_small: int
    note: str = ""


def invariance_report(w, apply=None, edge_aware=True):
    """Max over an orthonormal basis b of W_edge of ``||(I - P_W) A b|| / ||A b||``.

    ``apply`` maps a block of column vectors through the operator; the
    default is the truncated right shift. With ``edge_aware=False`` the
    whole of W is tested, so any subspace touching the last coordinate
    picks up a residual from the cut.
    """
    apply = apply or shift_columns
    if w.dim == 0:
        return InvarianceReport(0.0, 0, 0, 0, "trivial subspace")
    edge, n_edge = edge_subspace(w) if edge_aware else (w, 0)
    if edge.dim == 0:
        return InvarianceReport(0.0, 0, n_edge, 0, "no direction clear of the truncation edge")
    sb = apply(edge.basis)
    norms = np.linalg.norm(sb, axis=0)
    keep = norms >= 1e-14
    if not np.any(keep):
        return InvarianceReport(0.0, 0, n_edge, int(edge.dim), "operator annihilates W_edge")
    sb = sb[:, keep]
    r = np.linalg.norm(sb - w.project(sb), axis=0) / norms[keep]
    return InvarianceReport(float(r.max()), int(keep.sum()), n_edge, int((~keep).sum()))


def invariance_residual(w, apply=None, edge_aware=True):
    return invariance_report(w, apply, edge_aware).residual


def reducing_residual(w):
    return max(invariance_residual(w), invariance_residual(w.complement()))


def cyclic_span(c, depth, tol=DEFAULT_TOL):
    """Orthonormalized span of ``S^n c`` for ``0 <= n < depth``.

    ``info`` records how many iterates were dropped as numerically dependent
    and whether any iterate lost mass at the truncation edge.
    """
    x = np.asarray(c.coeffs, dtype=complex)
    n = x.shape[0]
    if not np.any(x):
        raise ValueError("cyclic span of the zero vector")
    if not 1 <= depth <= n:
        raise ValueError(f"depth must be in [1, {n}], got {depth}")
    iterates = np.zeros((n, depth), dtype=complex)
    lost = False
    cur = x
    for k in range(depth):
        iterates[:, k] = cur
        if k + 1 < depth:
            cur, dropped = shift_coefficients(cur)
            lost = lost or dropped
    basis = orth(iterates, tol)
    info = {"depth": depth, "dropped": depth - basis.shape[1], "truncation_loss": lost}
    return Subspace(n, basis, info)


def inner_section(spec, truncation):
    """The polynomials of degree < N inside ``psi H^2`` for a finite Blaschke ``psi``.

    Built as the cyclic span of the numerator ``z^r prod (rho_j - z)``,
    which reaches exactly to the truncation edge.
    """
    if not spec.is_finite:
        raise ValueError("section is only available for finite Blaschke products")
    p = blaschke_numerator(spec)
    n = int(truncation)
    if p.shape[0] > n:
        raise ValueError("truncation shorter than the numerator degree")
    c = np.zeros(n, dtype=complex)
    c[: p.shape[0]] = p
    return cyclic_span(CoefficientSequence(c), n - spec.degree)


def overlap(a, b):
    """``|<a, b>| / (||a|| ||b||)`` for two coefficient sequences or arrays."""
    a = np.asarray(getattr(a, "coeffs", a))
    b = np.asarray(getattr(b, "coeffs", b))
    return float(abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b)))


@dataclass(frozen=True, eq=False)
class BeurlingResult:
    generator: CoefficientSequence
    wandering_dim: int
    invariance: InvarianceReport
    cyclic_distance: float
    singular_values: np.ndarray


def _fix_phase(g):
    idx = np.flatnonzero(np.abs(g) > PHASE_FLOOR)
    if idx.size:
        a = g[idx[0]]
        g = g * (np.conj(a) / abs(a))
    return g


def beurling_extract(w, gate=INVARIANCE_GATE, split=WANDERING_SPLIT):
    """Unit generator of the wandering subspace ``W ⊖ S W_edge``.

    Raises :class:`NotInvariantError` when ``w`` fails the invariance gate
    and :class:`WanderingDimensionError` when the wandering subspace is not
    a line.
    """
    if w.dim == 0:
        raise ValueError("Beurling extraction needs a nontrivial subspace")
    inv = invariance_report(w)
    if inv.residual > gate:
        raise NotInvariantError(inv.residual, gate)
    edge, _ = edge_subspace(w)
    q = w.basis
    if edge.dim:
        qs = orth(shift_columns(edge.basis))
        m = q - qs @ (qs.conj().T @ q)
    else:
        m = q
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    dim = int(np.count_nonzero(s > split))
    if dim != 1:
        raise WanderingDimensionError(dim, s)
    g = q @ vh[0].conj()
    g = _fix_phase(g / np.linalg.norm(g))
    gen = CoefficientSequence(g)
    dist = principal_angle_distance(w, cyclic_span(gen, w.dim))
    return BeurlingResult(gen, dim, inv, dist, s)
