"""Dense complex linear-algebra kernel: eigendecompositions, minors, Cauchy determinants.

All routines are pure functions on numpy arrays; sizes are small (N <= ~64),
so everything is computed by direct dense factorizations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12


class LinalgError(ValueError):
    """Raised on malformed inputs (non-square, non-finite, bad index lists)."""


def _as_square_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise LinalgError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise LinalgError("matrix has non-finite entries")
    return a


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues in ascending order and a unitary eigenvector basis."""

    eigenvalues: np.ndarray  # real, ascending
    basis: np.ndarray  # unitary; column j belongs to eigenvalues[j]


@dataclass(frozen=True)
class GeneralEigen:
    """Eigenvalues sorted by descending modulus (ties: descending real, then imag)."""

    eigenvalues: np.ndarray  # complex


def hermitian_eig(a) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (A + A*)/2 before solving; an asymmetry larger
    than HERMITICITY_TOL relative to max|A| is an error rather than silently
    repaired.
    """
    a = _as_square_matrix(a)
    scale = max(np.abs(a).max(), 1.0)
    asym = np.abs(a - a.conj().T).max()
    if asym > HERMITICITY_TOL * scale:
        raise LinalgError(f"matrix is not Hermitian: asymmetry {asym:.3e} (scale {scale:.3e})")
    w, u = np.linalg.eigh((a + a.conj().T) / 2.0)
    return HermitianEigen(eigenvalues=w, basis=u)


def general_eig(a) -> GeneralEigen:
    """Eigenvalues of a general complex matrix in the canonical ordering."""
    a = _as_square_matrix(a)
    w = np.linalg.eigvals(a)
    order = np.lexsort((-w.imag, -w.real, -np.abs(w)))
    return GeneralEigen(eigenvalues=w[order])


def leading_principal_minors(m) -> np.ndarray:
    """Determinants of the upper-left j x j blocks, j = 1..N.

    Each block is factorized from scratch (partial pivoting inside
    numpy.linalg.det); at these sizes correctness beats Schur updates.
    """
    m = _as_square_matrix(m)
    n = m.shape[0]
    return np.array([np.linalg.det(m[:j, :j]) for j in range(1, n + 1)])


def minor(m, row_idx, col_idx) -> complex:
    """Determinant of the submatrix selected by strictly increasing index lists (0-based)."""
    m = _as_square_matrix(m)
    rows = np.asarray(row_idx, dtype=int)
    cols = np.asarray(col_idx, dtype=int)
    if rows.ndim != 1 or cols.ndim != 1 or len(rows) != len(cols) or len(rows) == 0:
        raise LinalgError("index lists must be non-empty and of equal length")
    for idx in (rows, cols):
        if np.any(np.diff(idx) <= 0):
            raise LinalgError("index lists must be strictly increasing")
        if idx[0] < 0 or idx[-1] >= m.shape[0]:
            raise LinalgError("index out of bounds")
    return complex(np.linalg.det(m[np.ix_(rows, cols)]))


def hyperbolic_cauchy_matrix(alpha: float, xi, eta) -> np.ndarray:
    """The matrix [sinh(i*alpha) / sinh(i*alpha + xi_k - eta_l)]."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    num = np.sinh(1j * alpha)
    den = np.sinh(1j * alpha + xi[:, None] - eta[None, :])
    if np.abs(den).min() < 1e-300:
        raise LinalgError("singular Cauchy denominator")
    return num / den


def hyperbolic_cauchy_det(alpha: float, xi, eta) -> complex:
    """Closed-form determinant of the hyperbolic Cauchy matrix.

    det [sinh(ia)/sinh(ia + xi_k - eta_l)] =
        sinh(ia)^m * prod_{k<l} sinh(xi_k - xi_l) sinh(eta_l - eta_k)
                   / prod_{k,l} sinh(ia + xi_k - eta_l)
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if xi.shape != eta.shape or xi.ndim != 1 or len(xi) == 0:
        raise LinalgError("xi and eta must be equal-length non-empty vectors")
    if abs(np.sin(alpha)) < 1e-300:
        raise LinalgError("sin(alpha) = 0 makes the formula singular")
    m = len(xi)
    den = np.sinh(1j * alpha + xi[:, None] - eta[None, :])
    if np.abs(den).min() < 1e-300:
        raise LinalgError("singular Cauchy denominator")
    val = np.sinh(1j * alpha) ** m / np.prod(den)
    for k in range(m):
        for l in range(k + 1, m):
            val *= np.sinh(xi[k] - xi[l]) * np.sinh(eta[l] - eta[k])
    return complex(val)
