import numpy as np
import pytest

from helispin import NumericalDomainError, linalg2


def _random_matrices(n, seed=7):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2))


def test_matmul_identity():
    for x in _random_matrices(10):
        np.testing.assert_allclose(linalg2.matmul(linalg2.IDENTITY2, x), x, atol=0)


def test_adjoint_involution():
    for x in _random_matrices(10):
        np.testing.assert_array_equal(linalg2.adjoint(linalg2.adjoint(x)), x)


def test_outer_projector():
    v = np.array([1.0, 0.0], dtype=np.complex128)
    m = linalg2.outer(v, v)
    np.testing.assert_array_equal(m, np.array([[1, 0], [0, 0]], dtype=np.complex128))
    assert linalg2.trace(m) == 1.0 + 0.0j


def test_outer_conjugates_second_argument():
    v = np.array([1.0, 1.0j])
    w = np.array([0.0, 2.0j])
    m = linalg2.outer(v, w)
    # v w-dagger: entry (0,1) = v0 * conj(w1)
    assert m[0, 1] == 1.0 * np.conj(2.0j)


def test_matmul_associativity():
    a, b, c = (_random_matrices(3, seed=s)[0] for s in (1, 2, 3))
    left = linalg2.matmul(linalg2.matmul(a, b), c)
    right = linalg2.matmul(a, linalg2.matmul(b, c))
    np.testing.assert_allclose(left, right, atol=1e-13)


def test_trace_cyclic():
    for a, b in zip(_random_matrices(20, seed=4), _random_matrices(20, seed=5)):
        tab = linalg2.trace(linalg2.matmul(a, b))
        tba = linalg2.trace(linalg2.matmul(b, a))
        assert abs(tab - tba) <= 1e-13


def test_det_multiplicative():
    for a, b in zip(_random_matrices(20, seed=8), _random_matrices(20, seed=9)):
        lhs = linalg2.det(linalg2.matmul(a, b))
        rhs = linalg2.det(a) * linalg2.det(b)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_hermitize_fixed_point():
    h = np.array([[0.25, 0.1 - 0.2j], [0.1 + 0.2j, 0.75]])
    np.testing.assert_array_equal(linalg2.hermitize(h), h)


def test_stacked_operations_broadcast():
    stack = _random_matrices(6)
    prod = linalg2.matmul(stack, stack)
    assert prod.shape == (6, 2, 2)
    dets = linalg2.det(stack)
    assert dets.shape == (6,)


def test_non_finite_rejected():
    bad = np.array([[np.nan, 0.0], [0.0, 1.0]], dtype=np.complex128)
    with pytest.raises(NumericalDomainError):
        linalg2.matmul(bad, np.eye(2))
    with pytest.raises(NumericalDomainError):
        linalg2.trace(np.array([[np.inf, 0], [0, 1]]))
