"""The Hardy space side: coefficient sequences, power series, Blaschke products.

``v_map`` identifies a truncated sequence ``(c_0, ..., c_{N-1})`` with the
polynomial ``sum c_n z**n``.  The two wrapper types carry the same storage;
they only keep the sequence-side and function-side APIs apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .numerics import DEFAULT_TOL, numerical_rank

LOSS_THRESHOLD = 1e-12
TAIL_TOL = 1e-6
DEFAULT_TRUNCATION = 256

__all__ = [
    "CoefficientSequence",
    "HardyFunction",
    "BlaschkeSpec",
    "BlaschkeSeries",
    "InnerCertificate",
    "v_map",
    "v_inverse",
    "multiply_by_z",
    "evaluate",
    "blaschke_eval",
    "blaschke_to_hardy",
    "blaschke_numerator",
    "finite_blaschke",
    "truncate_zero_sequence",
    "is_inner",
    "model_space_dimension",
]


def _coeff_array(coeffs):
    c = np.array(coeffs, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    c.setflags(write=False)
    return c


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """A truncated element of l2(N_0)."""

    coeffs: np.ndarray
    truncation_loss: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coeff_array(self.coeffs))

    @property
    def truncation(self):
        return self.coeffs.shape[0]

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    @classmethod
    def basis_vector(cls, k, truncation):
        c = np.zeros(truncation, dtype=complex)
        c[k] = 1.0
        return cls(c)


@dataclass(frozen=True, eq=False)
class HardyFunction:
    """Power series ``sum c_n z**n`` truncated at degree N-1."""

    coeffs: np.ndarray
    truncation_loss: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coeff_array(self.coeffs))

    @property
    def truncation(self):
        return self.coeffs.shape[0]

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def __call__(self, z):
        return evaluate(self, z)


def v_map(c):
    return HardyFunction(c.coeffs, c.truncation_loss)


def v_inverse(f):
    return CoefficientSequence(f.coeffs, f.truncation_loss)


def shift_coefficients(c):
    """Shift one slot toward higher index, dropping the top entry.

    Returns the shifted array and whether the dropped entry exceeded
    ``LOSS_THRESHOLD`` in modulus.
    """
    c = np.asarray(c)
    out = np.zeros_like(c)
    out[1:] = c[:-1]
    lost = bool(c.shape[0] and abs(c[-1]) > LOSS_THRESHOLD)
    return out, lost


def multiply_by_z(f):
    coeffs, lost = shift_coefficients(f.coeffs)
    return HardyFunction(coeffs, lost)


def _check_disk(z, slack=1e-12):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + slack):
        raise ValueError("evaluation point outside the closed unit disk")
    return z


def _horner(coeffs, z):
    out = np.zeros_like(z)
    for a in coeffs[::-1]:
        out = out * z + a
    return out


def evaluate(f, z):
    """Horner evaluation of the stored series at ``z`` (scalar or array), |z| <= 1."""
    z = _check_disk(z)
    out = _horner(f.coeffs, z)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BlaschkeSpec:
    """``d * z**r * prod (conj(rho)/|rho|) (rho - z) / (1 - conj(rho) z)``.

    ``tail_sum`` declares the value of ``sum (1 - |rho_j|)`` over zeros left
    out of ``zeros`` when the list is a truncation of an infinite sequence.
    Zeros at the origin belong in ``r``.
    """

    d: complex = 1.0
    r: int = 0
    zeros: tuple = ()
    tail_sum: float = 0.0

    def __post_init__(self):
        d = complex(self.d)
        if abs(abs(d) - 1.0) > 1e-12:
            raise ValueError(f"|d| must be 1, got {abs(d)!r}")
        if int(self.r) != self.r or self.r < 0:
            raise ValueError("r must be a non-negative integer")
        zeros = tuple(complex(z) for z in self.zeros)
        for rho in zeros:
            if rho == 0:
                raise ValueError("zero at the origin must be expressed through r")
            if not abs(rho) < 1:
                raise ValueError(f"zero {rho!r} is not inside the unit disk")
        if not (self.tail_sum >= 0 and math.isfinite(self.tail_sum)):
            raise ValueError("tail_sum must be finite and non-negative")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "zeros", zeros)

    @property
    def degree(self):
        return self.r + len(self.zeros)

    @property
    def is_finite(self):
        return self.tail_sum == 0.0

    def partial_sum(self):
        return float(sum(1.0 - abs(rho) for rho in self.zeros))


def finite_blaschke(lambdas, d=1.0):
    """Spec for ``d * prod (lambda_j - z) / (1 - conj(lambda_j) z)``.

    The unnormalized finite form differs from the normalized one by the
    unimodular constant ``prod lambda_j / |lambda_j|``; zeros at the origin
    contribute a factor ``-z`` each.
    """
    d = complex(d)
    r = 0
    zeros = []
    for lam in lambdas:
        lam = complex(lam)
        if lam == 0:
            r += 1
            d = -d
        else:
            d *= lam / abs(lam)
            zeros.append(lam)
    return BlaschkeSpec(d=d, r=r, zeros=tuple(zeros))


def truncate_zero_sequence(zeros, d=1.0, r=0, tail_tol=TAIL_TOL, bound=1e6):
    """Keep the shortest prefix of ``zeros`` whose neglected ``sum (1-|rho|)`` is below ``tail_tol``."""
    zeros = [complex(z) for z in zeros]
    defects = np.array([1.0 - abs(z) for z in zeros])
    total = float(defects.sum())
    if total > bound:
        raise ValueError(f"sum (1 - |rho|) = {total:.6g} exceeds bound {bound:g}; Blaschke condition violated")
    # tails[j] = sum over zeros[j:]
    tails = np.concatenate([np.cumsum(defects[::-1])[::-1], [0.0]])
    keep = int(np.argmax(tails < tail_tol))
    return BlaschkeSpec(d=d, r=r, zeros=tuple(zeros[:keep]), tail_sum=float(tails[keep]))


def blaschke_eval(spec, z):
    z = _check_disk(z)
    out = spec.d * z**spec.r
    for rho in spec.zeros:
        out = out * (np.conj(rho) / abs(rho)) * (rho - z) / (1 - np.conj(rho) * z)
    return complex(out) if np.ndim(out) == 0 else out


class BlaschkeSeries(NamedTuple):
    function: HardyFunction
    tail_mass: float
    neglected_zero_sum: float


def _factor_series(rho, n):
    # (conj(rho)/|rho|) (rho - z) sum_k (conj(rho) z)^k, first n coefficients
    u = np.conj(rho) / abs(rho)
    f = np.empty(n, dtype=complex)
    f[0] = rho
    if n > 1:
        f[1:] = np.conj(rho) ** np.arange(n - 1) * (abs(rho) ** 2 - 1)
    return u * f


def blaschke_to_hardy(spec, truncation=DEFAULT_TRUNCATION, tail_tol=TAIL_TOL, bound=1e6):
    """Power-series coefficients of the product up to degree ``truncation - 1``.

    ``tail_mass`` is the l2 mass of the coefficients beyond the truncation.
    """
    n = int(truncation)
    if n < 1:
        raise ValueError("truncation must be positive")
    total = spec.partial_sum() + spec.tail_sum
    if total > bound:
        raise ValueError(f"sum (1 - |rho|) = {total:.6g} exceeds bound {bound:g}; Blaschke condition violated")
    if spec.tail_sum > tail_tol:
        raise ValueError(f"declared tail {spec.tail_sum:.3g} exceeds tail tolerance {tail_tol:.3g}")
    # expand to 4N so the reported tail is a direct sum, not 1 - ||c||^2
    ext = 4 * n
    c = np.zeros(ext, dtype=complex)
    if spec.r < ext:
        c[spec.r] = spec.d
    for rho in spec.zeros:
        c = np.convolve(c, _factor_series(rho, ext))[:ext]
    tail2 = float(np.vdot(c[n:], c[n:]).real)
    beyond = 1.0 - float(np.vdot(c, c).real)
    if beyond > 1e-10:
        tail2 += beyond
    return BlaschkeSeries(HardyFunction(c[:n]), math.sqrt(tail2), spec.tail_sum)


def blaschke_numerator(spec):
    """Polynomial ``d z^r prod (conj(rho)/|rho|)(rho - z)`` as a coefficient array.

    Its cyclic subspace under the shift is the polynomial part of ``psi H^2``.
    """
    p = np.zeros(spec.r + 1, dtype=complex)
    p[spec.r] = spec.d
    for rho in spec.zeros:
        u = np.conj(rho) / abs(rho)
        p = np.convolve(p, [u * rho, -u])
    return p


@dataclass(frozen=True)
class InnerCertificate:
    inner: bool
    max_deviation: float
    norm: float
    radius: float
    interior_deviation: float
    samples: int
    tol: float = field(default=1e-6)


def radial_limit(f, samples, truncation=None):
    """Estimate boundary values from samples at radii ``1 - j/(2N)``, j = 1..4.

    The truncated series is evaluated on four concentric circles just inside
    the boundary and extrapolated to radius 1 by the cubic through those
    radii. Returns (angles, extrapolated values, values at the outermost circle).
    """
    n = truncation or f.truncation
    theta = 2 * np.pi * np.arange(samples) / samples
    zeta = np.exp(1j * theta)
    t = np.arange(1, 5) / (2.0 * n)
    w = np.array([np.prod([-t[i] / (t[j] - t[i]) for i in range(4) if i != j]) for j in range(4)])
    vals = np.array([_horner(f.coeffs, (1 - tj) * zeta) for tj in t])
    return theta, w @ vals, vals[0]


def is_inner(f, samples=1024, tol=1e-6):
    """Sampled certification that ``|f| = 1`` on the circle and ``||f|| <= 1``.

    A negative answer is a result, not an error; ``max_deviation`` is always
    reported.
    """
    if samples < 64:
        raise ValueError("need at least 64 boundary samples")
    n = f.truncation
    _, limit, interior = radial_limit(f, samples)
    dev = float(np.max(np.abs(np.abs(limit) - 1.0)))
    interior_dev = float(np.max(np.abs(np.abs(interior) - 1.0)))
    norm = f.norm()
    ok = dev <= tol and norm <= 1.0 + tol
    return InnerCertificate(bool(ok), dev, norm, 1.0 - 1.0 / (2 * n), interior_dev, int(samples), tol)


def model_space_dimension(spec, truncation=DEFAULT_TRUNCATION, tol=DEFAULT_TOL):
    """Numerical dimension of the complement of ``span{z^n phi}`` in the truncated space."""
    if not spec.is_finite:
        raise ValueError("model space dimension needs a finite Blaschke product")
    deg = spec.degree
    n = int(truncation)
    if n < 4 * deg:
        raise ValueError(f"truncation {n} too small; need at least {4 * deg}")
    phi = blaschke_to_hardy(spec, n).function.coeffs
    cols = n - deg
    m = np.zeros((n, cols), dtype=complex)
    for j in range(cols):
        m[j:, j] = phi[: n - j]
    s = np.linalg.svd(m, compute_uv=False)
    return n - numerical_rank(s, tol)
