import numpy as np
import numpy.testing as npt
import pytest

from vandiejen.linalg import (
    LinalgError,
    general_eig,
    hermitian_eig,
    hyperbolic_cauchy_det,
    hyperbolic_cauchy_matrix,
    leading_principal_minors,
    minor,
)

from conftest import det_cofactor


def test_hermitian_eig_identity():
    out = hermitian_eig(np.eye(2))
    npt.assert_allclose(out.eigenvalues, [1.0, 1.0])
    npt.assert_allclose(out.basis @ out.basis.conj().T, np.eye(2), atol=1e-14)


def test_hermitian_eig_diagonal_sorted_ascending():
    out = hermitian_eig(np.diag([np.e ** 2, np.e ** -2]))
    npt.assert_allclose(out.eigenvalues, [np.e ** -2, np.e ** 2])


def test_hermitian_eig_reconstruction():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    a = a + a.conj().T
    out = hermitian_eig(a)
    rebuilt = out.basis @ np.diag(out.eigenvalues) @ out.basis.conj().T
    assert np.abs(rebuilt - a).max() <= 1e-12 * np.abs(a).max()
    assert np.abs(out.basis.conj().T @ out.basis - np.eye(4)).max() <= 1e-12


def test_hermitian_eig_rejects_asymmetric():
    with pytest.raises(LinalgError):
        hermitian_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_hermitian_eig_rejects_non_square():
    with pytest.raises(LinalgError):
        hermitian_eig(np.ones((2, 3)))


def test_hermitian_eig_rejects_non_finite():
    with pytest.raises(LinalgError):
        hermitian_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_general_eig_diagonal():
    npt.assert_allclose(general_eig(np.diag([3.0, 2.0, 1.0])).eigenvalues, [3, 2, 1])


def test_general_eig_sorted_by_descending_modulus():
    w = general_eig(np.diag([-1.0, 3.0, 2.0])).eigenvalues
    npt.assert_allclose(w, [3, 2, -1])


def test_general_eig_product_matches_determinant():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    w = general_eig(a).eigenvalues
    det = det_cofactor(a)
    assert abs(np.prod(w) - det) <= 1e-8 * abs(det)


def test_leading_principal_minors_diagonal():
    d = np.array([2.0, 3.0, 5.0])
    npt.assert_allclose(leading_principal_minors(np.diag(d)), np.cumprod(d))


def test_leading_principal_minors_2x2():
    npt.assert_allclose(leading_principal_minors(np.array([[1.0, 2.0], [3.0, 4.0]])), [1, -2])


def test_leading_principal_minors_vs_cofactor_oracle():
    rng = np.random.default_rng(11)
    m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    pi = leading_principal_minors(m)
    for j in range(1, 6):
        ref = det_cofactor(m[:j, :j])
        assert abs(pi[j - 1] - ref) <= 1e-10 * max(abs(ref), 1.0)


def test_minor_full_matrix():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert minor(m, [0, 1], [0, 1]) == pytest.approx(-2.0)


def test_minor_single_entry():
    m = np.arange(9, dtype=float).reshape(3, 3)
    assert minor(m, [1], [2]) == pytest.approx(m[1, 2])


def test_minor_vs_cofactor_oracle():
    rng = np.random.default_rng(13)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rows, cols = [0, 2], [1, 3]
    ref = det_cofactor(m[np.ix_(rows, cols)])
    assert abs(minor(m, rows, cols) - ref) <= 1e-12


def test_minor_rejects_bad_indices():
    m = np.eye(3)
    with pytest.raises(LinalgError):
        minor(m, [1, 0], [0, 1])
    with pytest.raises(LinalgError):
        minor(m, [0], [0, 1])
    with pytest.raises(LinalgError):
        minor(m, [0, 5], [0, 1])


def test_cauchy_det_single_entry():
    alpha, xi, eta = 0.7, [0.4], [0.1]
    direct = np.sinh(1j * alpha) / np.sinh(1j * alpha + xi[0] - eta[0])
    assert hyperbolic_cauchy_det(alpha, xi, eta) == pytest.approx(direct)


def test_cauchy_det_repeated_row_vanishes():
    assert abs(hyperbolic_cauchy_det(0.7, [0.5, 0.5], [0.1, 0.9])) <= 1e-14


def test_cauchy_det_matches_direct_determinant():
    rng = np.random.default_rng(17)
    for m in range(1, 7):
        xi = rng.uniform(-5, 5, m)
        eta = rng.uniform(-5, 5, m)
        mat = hyperbolic_cauchy_matrix(0.7, xi, eta)
        ref = det_cofactor(mat)
        val = hyperbolic_cauchy_det(0.7, xi, eta)
        assert abs(val - ref) <= 1e-9 * max(abs(ref), 1e-30)


def test_cauchy_det_rejects_zero_angle():
    with pytest.raises(LinalgError):
        hyperbolic_cauchy_det(0.0, [0.5], [0.1])


def test_cauchy_det_rejects_mismatched_lengths():
    with pytest.raises(LinalgError):
        hyperbolic_cauchy_det(0.7, [0.5, 0.2], [0.1])
