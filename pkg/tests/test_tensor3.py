import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mqedrates import tensor3
from mqedrates.errors import DomainError

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
real_vec = arrays(float, 3, elements=finite)
real_mat = arrays(float, (3, 3), elements=finite)


def cmat(re, im):
    return re + 1j * im


def test_identity_and_dyadic():
    e = np.array([0.0, 0.0, 1.0])
    assert np.array_equal(tensor3.dyadic(e, e), np.diag([0, 0, 1]).astype(complex))
    assert np.array_equal(tensor3.IDENTITY, np.eye(3))


def test_unit_rejects_zero():
    with pytest.raises(DomainError):
        tensor3.unit([0, 0, 0])
    assert np.linalg.norm(tensor3.unit([3, 4, 0])) == pytest.approx(1.0, abs=1e-15)


def test_as_tensor_shape_check():
    with pytest.raises(DomainError):
        tensor3.as_tensor(np.zeros((2, 3)))


@settings(max_examples=50, deadline=None)
@given(real_mat, real_mat, real_mat, real_mat)
def test_trace_product_matches_einsum_free_loop(ar, ai, br, bi):
    a, b = cmat(ar, ai), cmat(br, bi)
    expected = sum(a[i, j] * b[j, i] for i in range(3) for j in range(3))
    assert tensor3.trace_product(a, b) == pytest.approx(expected, rel=1e-12, abs=1e-9)
    assert tensor3.trace_product(a, b) == pytest.approx(tensor3.trace_product(b, a), rel=1e-12, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(real_mat, real_mat)
def test_dagger_is_conjugate_transpose(ar, ai):
    a = cmat(ar, ai)
    assert np.array_equal(tensor3.dagger(a), a.conj().T)
    assert np.array_equal(tensor3.transpose(tensor3.transpose(a)), a)
    # Tr[A A†] is real and nonnegative
    t = tensor3.trace_product(a, tensor3.dagger(a))
    assert abs(t.imag) <= 1e-9 * max(1.0, abs(t))
    assert t.real >= 0


@settings(max_examples=50, deadline=None)
@given(real_vec, real_vec, real_mat)
def test_quadratic_form_is_unconjugated(u, v, ar):
    a = cmat(ar, ar[::-1])
    uc = u + 1j * v
    expected = sum(uc[i] * a[i, j] * v[j] for i in range(3) for j in range(3))
    assert tensor3.quadratic_form(uc, a, v) == pytest.approx(expected, rel=1e-12, abs=1e-6)


def test_frobenius4_factorises(rng):
    d = [rng.normal(size=3) + 1j * rng.normal(size=3) for _ in range(4)]
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    brute = np.einsum("i,j,k,l,ij,kl->", d[0], d[1], d[2], d[3], a, b)
    assert tensor3.frobenius4(*d, a, b) == pytest.approx(brute, rel=1e-12, abs=0)


def test_is_finite():
    assert tensor3.is_finite(np.eye(3))
    bad = np.eye(3, dtype=complex)
    bad[1, 2] = np.nan
    assert not tensor3.is_finite(bad)
