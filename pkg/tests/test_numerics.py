import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from frameforge.numerics import (
    Subspace,
    least_squares,
    null_space,
    principal_angle_distance,
    svd,
)
from frameforge.frames import OrbitSpec, balanced_seed, build_orbit_frame, exponential_schedule

from conftest import random_complex

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def complex_matrices(max_side=6):
    shapes = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shapes.flatmap(
        lambda s: st.tuples(arrays(float, s, elements=finite), arrays(float, s, elements=finite))
    ).map(lambda p: p[0] + 1j * p[1])


def test_svd_identity_and_diagonal():
    np.testing.assert_allclose(svd(np.eye(3)).singular_values, [1, 1, 1])
    np.testing.assert_allclose(svd(np.diag([1.0, 2.0])).singular_values, [2, 1])


def test_svd_reconstructs_random(rng):
    m = random_complex(rng, 8, 5)
    r = svd(m)
    assert np.linalg.norm(m - r.reconstruct()) < 1e-10 * max(1, np.linalg.norm(m))
    assert np.all(np.diff(r.singular_values) <= 0)


def test_svd_rejects_non_finite():
    with pytest.raises(ValueError, match="non-finite"):
        svd(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError, match="non-finite"):
        null_space(np.array([[np.inf]]))


def test_svd_of_zero_matrix():
    np.testing.assert_array_equal(svd(np.zeros((3, 2))).singular_values, [0, 0])


@settings(max_examples=60, deadline=None)
@given(complex_matrices())
def test_svd_invariants(m):
    r = svd(m)
    scale = max(1.0, np.linalg.norm(m))
    assert np.linalg.norm(m - r.reconstruct()) <= 1e-10 * scale
    assert np.all(r.singular_values >= 0)
    k = r.singular_values.size
    np.testing.assert_allclose(r.left_basis.conj().T @ r.left_basis, np.eye(k), atol=1e-10)
    np.testing.assert_allclose(r.right_basis.conj().T @ r.right_basis, np.eye(k), atol=1e-10)


def test_null_space_repeated_column():
    u = np.array([[1, 1, 0], [0, 0, 1]], dtype=complex)
    k = null_space(u)
    assert k.dim == 1
    v = k.basis[:, 0]
    assert abs(abs(np.vdot(v, [1, -1, 0])) / np.sqrt(2) - 1) < 1e-12


def test_null_space_of_unitary_is_trivial(rng):
    q, _ = np.linalg.qr(random_complex(rng, 5, 5))
    assert null_space(q).dim == 0


def test_null_space_zero_matrix_is_everything():
    assert null_space(np.zeros((2, 4))).dim == 4


def test_null_space_orbit_frame_dimension():
    lam = exponential_schedule(8)
    u = build_orbit_frame(OrbitSpec(lam, balanced_seed(lam), 64)).system.synthesis
    # rank oracle: eigenvalues of the 8x8 frame operator
    ev = np.linalg.eigvalsh(u @ u.conj().T)
    rank = int(np.sum(np.sqrt(np.maximum(ev, 0)) > 1e-9 * np.sqrt(ev.max())))
    assert rank == 8
    assert null_space(u).dim == 64 - rank == 56


@settings(max_examples=60, deadline=None)
@given(complex_matrices(), st.sampled_from([1e-9, 1e-6, 1e-3]))
def test_null_space_contract(m, tol):
    k = null_space(m, tol)
    assert k.orthonormality_defect() < 1e-10
    smax = np.linalg.norm(m, 2)
    for b in k.basis.T:
        assert np.linalg.norm(m @ b) <= tol * smax * np.linalg.norm(b) + 1e-12


def test_null_space_matches_scipy(rng):
    a = random_complex(rng, 4, 9)
    ours = null_space(a)
    theirs = Subspace(9, scipy.linalg.null_space(a))
    assert principal_angle_distance(ours, theirs) < 1e-10


def test_least_squares_identity_and_orthonormal(rng):
    b = random_complex(rng, 4, 2)
    np.testing.assert_allclose(least_squares(np.eye(4), b), b, atol=1e-14)
    q, _ = np.linalg.qr(random_complex(rng, 6, 3))
    c = random_complex(rng, 6, 2)
    np.testing.assert_allclose(least_squares(q, c), q.conj().T @ c, atol=1e-12)


def test_least_squares_planted(rng):
    a = random_complex(rng, 10, 3)
    x0 = random_complex(rng, 3, 2)
    x = least_squares(a, a @ x0)
    assert np.linalg.norm(a @ x - a @ x0) < 1e-10
    assert np.linalg.norm(x - x0) <= 1e-8 * np.linalg.norm(x0)


def test_least_squares_minimum_norm():
    a = np.array([[1.0, 1.0]])
    np.testing.assert_allclose(least_squares(a, np.array([2.0])), [1, 1])


def test_least_squares_dimension_mismatch():
    with pytest.raises(ValueError, match="row mismatch"):
        least_squares(np.eye(3), np.ones((2, 1)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 4))
def test_least_squares_recovers_planted_solution(seed, n, k):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, n + 4, n)
    x0 = random_complex(rng, n, k)
    x = least_squares(a, a @ x0)
    assert np.linalg.norm(x - x0) <= 1e-8 * np.linalg.norm(x0)


def _line(v):
    return Subspace.span(np.asarray(v, dtype=complex))


def test_principal_angle_examples():
    e0, e1 = np.eye(3)[0], np.eye(3)[1]
    assert principal_angle_distance(_line(e0), _line(e0)) == 0
    assert principal_angle_distance(_line(e0), _line(e1)) == pytest.approx(1.0)
    d = principal_angle_distance(_line(e0), _line((e0 + e1) / np.sqrt(2)))
    assert d == pytest.approx(np.sin(np.pi / 4), abs=1e-14)


def test_principal_angle_against_scipy(rng):
    p = Subspace.span(random_complex(rng, 7, 3))
    q = Subspace.span(random_complex(rng, 7, 3))
    expected = np.sin(scipy.linalg.subspace_angles(p.basis, q.basis).max())
    assert principal_angle_distance(p, q) == pytest.approx(expected, abs=1e-12)
    assert principal_angle_distance(q, p) == pytest.approx(expected, abs=1e-12)


def test_principal_angle_ambient_mismatch():
    with pytest.raises(ValueError, match="ambient"):
        principal_angle_distance(Subspace.full(2), Subspace.full(3))


def test_proper_inclusion_is_far():
    assert principal_angle_distance(Subspace.full(3), _line([1, 0, 0])) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(0, 8))
def test_principal_angle_self_distance_zero(seed, n, k):
    rng = np.random.default_rng(seed)
    k = min(k, n)
    p = Subspace.span(random_complex(rng, n, k)) if k else Subspace.trivial(n)
    assert principal_angle_distance(p, p) < 1e-10


def test_subspace_complement():
    w = Subspace.span(np.eye(4)[:, :1])
    c = w.complement()
    assert c.dim == 3
    np.testing.assert_allclose(w.basis.conj().T @ c.basis, 0, atol=1e-14)
    assert Subspace.trivial(3).complement().dim == 3
    assert Subspace.full(3).complement().dim == 0
