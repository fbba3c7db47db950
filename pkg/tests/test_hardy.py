import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frameforge.hardy import (
    BlaschkeSpec,
    CoefficientSequence,
    HardyFunction,
    blaschke_eval,
    blaschke_numerator,
    blaschke_to_hardy,
    evaluate,
    finite_blaschke,
    is_inner,
    model_space_dimension,
    multiply_by_z,
    truncate_zero_sequence,
    v_inverse,
    v_map,
)
from frameforge.shiftspace import right_shift

from conftest import random_complex

disk_points = st.builds(
    lambda r, t: r * np.exp(2j * np.pi * t), st.floats(0.05, 0.8), st.floats(0, 1)
)


def monomial(k, n):
    return HardyFunction(np.eye(n)[k])


def dft_coefficients(spec, n, m=8192):
    """Taylor coefficients from the closed-form product sampled on the circle."""
    zeta = np.exp(2j * np.pi * np.arange(m) / m)
    return (np.fft.fft(blaschke_eval(spec, zeta)) / m)[:n]


# ----------------------------------------------------------------- V and M_z


def test_v_map_basis_vectors():
    f = v_map(CoefficientSequence.basis_vector(0, 8))
    assert evaluate(f, 0.3 + 0.2j) == 1
    g = v_map(CoefficientSequence.basis_vector(1, 8))
    assert evaluate(g, 0.4 - 0.1j) == 0.4 - 0.1j


def test_v_map_geometric_norm():
    c = CoefficientSequence(0.5 ** np.arange(64))
    assert v_map(c).norm() ** 2 == pytest.approx(4 / 3, rel=1e-14)


def test_v_inverse_examples(rng):
    np.testing.assert_array_equal(v_inverse(HardyFunction([1, 0, 0])).coeffs, [1, 0, 0])
    np.testing.assert_array_equal(v_inverse(monomial(2, 5)).coeffs, np.eye(5)[2])
    c = CoefficientSequence(random_complex(rng, 64))
    assert np.array_equal(v_inverse(v_map(c)).coeffs, c.coeffs)


def test_multiply_by_z_examples():
    n = 6
    assert np.array_equal(multiply_by_z(monomial(0, n)).coeffs, monomial(1, n).coeffs)
    top = multiply_by_z(monomial(n - 1, n))
    assert not np.any(top.coeffs) and top.truncation_loss
    g = multiply_by_z(HardyFunction([1, 2, 3]))
    np.testing.assert_array_equal(g.coeffs, [0, 1, 2])
    assert g.truncation_loss
    assert not multiply_by_z(HardyFunction([1, 2, 0])).truncation_loss


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 300))
def test_intertwining_exact(seed, n):
    rng = np.random.default_rng(seed)
    c = CoefficientSequence(random_complex(rng, n))
    a = v_map(right_shift(c))
    b = multiply_by_z(v_map(c))
    assert np.array_equal(a.coeffs, b.coeffs)
    assert a.truncation_loss == b.truncation_loss
    assert v_map(c).norm() == c.norm()


def test_evaluate_examples():
    assert evaluate(HardyFunction([1.0]), 0.3 + 0.2j) == 1
    assert evaluate(monomial(2, 4), 0.5) == pytest.approx(0.25)
    geo = HardyFunction(0.5 ** np.arange(80))
    assert evaluate(geo, 0.5) == pytest.approx(4 / 3, rel=1e-14)


def test_evaluate_rejects_outside_disk():
    with pytest.raises(ValueError, match="outside"):
        evaluate(HardyFunction([1.0]), 1.01)


def test_evaluate_vectorized(rng):
    f = HardyFunction(random_complex(rng, 10))
    z = 0.7 * np.exp(1j * np.linspace(0, 6, 5))
    np.testing.assert_allclose(evaluate(f, z), np.polyval(f.coeffs[::-1], z))


# ----------------------------------------------------------------- Blaschke


def test_blaschke_single_factor():
    s = BlaschkeSpec(zeros=(0.5,))
    assert blaschke_eval(s, 0) == pytest.approx(0.5)
    assert blaschke_eval(s, 0.5) == 0
    v = blaschke_eval(s, 1.0)
    assert v == pytest.approx(-1) and abs(v) == pytest.approx(1)


def test_blaschke_two_zero_boundary_sweep():
    s = BlaschkeSpec(zeros=(0.5, -0.3j))
    zeta = np.exp(2j * np.pi * np.arange(1024) / 1024)
    assert np.max(np.abs(np.abs(blaschke_eval(s, zeta)) - 1)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.lists(disk_points, min_size=1, max_size=8), st.integers(0, 3), st.floats(0, 1))
def test_unimodular_on_circle(zeros, r, phase):
    s = BlaschkeSpec(d=np.exp(2j * np.pi * phase), r=r, zeros=tuple(zeros))
    zeta = np.exp(2j * np.pi * np.arange(256) / 256)
    assert np.max(np.abs(np.abs(blaschke_eval(s, zeta)) - 1)) < 1e-10
    inside = 0.9 * zeta
    assert np.max(np.abs(blaschke_eval(s, inside))) <= 1 + 1e-10


def test_spec_validation():
    with pytest.raises(ValueError, match="origin"):
        BlaschkeSpec(zeros=(0,))
    with pytest.raises(ValueError, match="inside"):
        BlaschkeSpec(zeros=(1.0,))
    with pytest.raises(ValueError, match=r"\|d\|"):
        BlaschkeSpec(d=2.0)


def test_finite_form_matches_definition():
    lams = [0.5, -0.3j, 0.0, 0.2 + 0.4j]
    spec = finite_blaschke(lams, d=1j)
    z = np.array([0.1, -0.4 + 0.2j, 0.7j])
    direct = 1j * np.prod([(l - z) / (1 - np.conj(l) * z) for l in lams], axis=0)
    np.testing.assert_allclose(blaschke_eval(spec, z), direct, atol=1e-14)
    assert spec.r == 1 and len(spec.zeros) == 3


def test_to_hardy_monomial():
    f = blaschke_to_hardy(BlaschkeSpec(r=3), 8).function
    np.testing.assert_array_equal(f.coeffs, np.eye(8)[3])


def test_to_hardy_single_zero_cauchy_product():
    f = blaschke_to_hardy(BlaschkeSpec(zeros=(0.5,)), 6).function
    # (0.5 - z) * sum (0.5 z)^k by hand
    np.testing.assert_allclose(f.coeffs[:3], [0.5, -0.75, -0.375], atol=1e-15)


@pytest.mark.parametrize(
    "zeros",
    [(0.5,), (0.5, -0.3j), (0.6, 0.3 + 0.5j, -0.7j, -0.2 - 0.2j)],
)
def test_to_hardy_matches_dft_oracle(zeros):
    s = BlaschkeSpec(d=np.exp(0.3j), r=1, zeros=zeros)
    ours = blaschke_to_hardy(s, 64).function.coeffs
    np.testing.assert_allclose(ours, dft_coefficients(s, 64), atol=1e-12)


def test_tail_mass_reported():
    s = BlaschkeSpec(zeros=(0.9,))
    res = blaschke_to_hardy(s, 32)
    # coefficients beyond 32 are -0.19 * 0.9^(k-1)
    tail = np.sqrt(sum((0.19 * 0.9 ** (k - 1)) ** 2 for k in range(32, 4000)))
    assert res.tail_mass == pytest.approx(tail, rel=1e-9)


def test_roundtrip_certified():
    f = blaschke_to_hardy(BlaschkeSpec(zeros=(0.5, -0.3j, 0.2 + 0.2j)), 256).function
    assert is_inner(f).inner


@settings(max_examples=30, deadline=None)
@given(st.lists(disk_points, max_size=8), st.integers(0, 4))
def test_norm_contractive(zeros, r):
    f = blaschke_to_hardy(BlaschkeSpec(r=r, zeros=tuple(zeros)), 256).function
    assert f.norm() <= 1 + 1e-8


def test_infinite_product_truncation():
    zeros = [1 - 2.0 ** -(j + 1) for j in range(60)]
    spec = truncate_zero_sequence(zeros, tail_tol=1e-6)
    assert spec.tail_sum < 1e-6
    assert spec.tail_sum == pytest.approx(sum(2.0 ** -(j + 1) for j in range(len(spec.zeros), 60)))
    blaschke_to_hardy(spec, 32)
    with pytest.raises(ValueError, match="tail"):
        blaschke_to_hardy(BlaschkeSpec(zeros=(0.5,), tail_sum=1e-3), 32)


def test_blaschke_condition_violation_rejected():
    zeros = [0.5] * 40
    with pytest.raises(ValueError, match="Blaschke condition"):
        truncate_zero_sequence(zeros, bound=10.0)
    with pytest.raises(ValueError, match="Blaschke condition"):
        blaschke_to_hardy(BlaschkeSpec(zeros=tuple(zeros)), 16, bound=10.0)


def test_numerator_zeros():
    s = BlaschkeSpec(r=2, zeros=(0.5, -0.3j))
    p = blaschke_numerator(s)
    for z in (0.0, 0.5, -0.3j):
        assert abs(np.polyval(p[::-1], z)) < 1e-15


# ----------------------------------------------------------------- is_inner


def test_is_inner_monomial():
    cert = is_inner(monomial(1, 256))
    assert cert.inner
    assert cert.interior_deviation == pytest.approx(1 / 512, rel=1e-9)
    assert cert.radius == 1 - 1 / 512


def test_is_inner_constant_half():
    cert = is_inner(HardyFunction([0.5] + [0] * 63))
    assert not cert.inner
    assert cert.max_deviation == pytest.approx(0.5)


def test_is_inner_degree_five():
    s = BlaschkeSpec(zeros=(0.5, -0.3j, 0.2 + 0.2j, -0.6, 0.4j))
    f = blaschke_to_hardy(s, 512).function
    assert is_inner(f, 1024, 1e-6).inner


def test_is_inner_rejects_norm_excess():
    assert not is_inner(HardyFunction([0, 1, 0.1] + [0] * 61), tol=1e-3).inner


def test_is_inner_needs_samples():
    with pytest.raises(ValueError):
        is_inner(monomial(1, 64), samples=32)


def test_poorly_truncated_inner_not_certified():
    # zero at 0.99 needs far more than 64 coefficients
    f = blaschke_to_hardy(BlaschkeSpec(zeros=(0.99,)), 64).function
    assert not is_inner(f, tol=1e-4).inner


# ----------------------------------------------------------------- model space


def _complement_dim_oracle(spec, n):
    import scipy.linalg

    phi = dft_coefficients(spec, n)
    cols = n - spec.degree
    m = scipy.linalg.toeplitz(phi, np.zeros(cols))
    return scipy.linalg.null_space(m.conj().T, rcond=1e-9).shape[1]


@pytest.mark.parametrize(
    "spec, expected",
    [
        (BlaschkeSpec(r=3), 3),
        (BlaschkeSpec(zeros=(0.5,)), 1),
        (BlaschkeSpec(zeros=(0.5, -0.3j, 0.2 + 0.2j)), 3),
        (BlaschkeSpec(r=1, zeros=(0.4, -0.5)), 3),
    ],
)
def test_model_space_dimension(spec, expected):
    assert model_space_dimension(spec, 64) == expected
    assert _complement_dim_oracle(spec, 64) == expected


def test_model_space_truncation_too_small():
    with pytest.raises(ValueError, match="at least 12"):
        model_space_dimension(BlaschkeSpec(r=3), 8)


@settings(max_examples=20, deadline=None)
@given(st.lists(disk_points, max_size=6), st.integers(0, 3))
def test_model_space_is_degree(zeros, r):
    s = BlaschkeSpec(r=r, zeros=tuple(zeros))
    assert model_space_dimension(s, 64) == s.degree
