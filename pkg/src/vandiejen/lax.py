"""Lax-matrix data built at a phase point: coefficients z/u, vector F, matrix L, energy.

The matrix is assembled verbatim from its entrywise definition; Hermiticity,
unit determinant, positive definiteness, and the commutation relation are then
independent cross-checks of correctness rather than imposed structure.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .phase_space import Coupling, PhasePoint, PhaseSpaceError, require_valid

COORD_CAP = 300.0
DEGENERACY_TOL = 1e-12


class LaxError(ValueError):
    pass


def _check_inputs(p: PhasePoint, g: Coupling):
    require_valid(p)
    if not g.in_base_class():
        raise PhaseSpaceError(
            f"coupling (mu={g.mu}, nu={g.nu}) outside the base class (sin too small)"
        )
    if np.abs(p.xi).max() > COORD_CAP or np.abs(p.eta).max() > COORD_CAP:
        raise LaxError(f"coordinates exceed the overflow cap {COORD_CAP}")


def conjugation_matrix(n: int) -> np.ndarray:
    """The symmetric block matrix C = [[0, I], [I, 0]] of size 2n."""
    c = np.zeros((2 * n, 2 * n))
    c[:n, n:] = np.eye(n)
    c[n:, :n] = np.eye(n)
    return c


def z_coeff(p: PhasePoint, g: Coupling, a: int) -> complex:
    """Coefficient z_a: the signed hyperbolic product over all pairings with a."""
    _check_inputs(p, g)
    if not 0 <= a < p.n:
        raise LaxError(f"index {a} out of range for n={p.n}")
    return complex(_kernels.z_coeffs(p.xi, g.mu, g.nu)[a])


def u_coeff(p: PhasePoint, g: Coupling, a: int) -> float:
    """Coefficient u_a via the square-root product form (equals |z_a|)."""
    _check_inputs(p, g)
    if not 0 <= a < p.n:
        raise LaxError(f"index {a} out of range for n={p.n}")
    return float(_kernels.u_coeffs(p.xi, g.mu, g.nu)[a])


def f_vector(p: PhasePoint, g: Coupling) -> np.ndarray:
    """Column vector F: F_a = e^{eta_a/2} u_a^{1/2}, F_{n+a} = e^{-eta_a/2} conj(z_a) u_a^{-1/2}."""
    _check_inputs(p, g)
    z = _kernels.z_coeffs(p.xi, g.mu, g.nu)
    u = _kernels.u_coeffs(p.xi, g.mu, g.nu)
    top = np.exp(p.eta / 2.0) * np.sqrt(u)
    bot = np.exp(-p.eta / 2.0) * z.conj() / np.sqrt(u)
    return np.concatenate([top.astype(complex), bot])


@dataclass(frozen=True)
class LaxBundle:
    """All algebraic data at (p, g): coefficients, F, Lambda, C, L, and the energy."""

    point: PhasePoint
    coupling: Coupling
    z: np.ndarray  # complex, length n
    u: np.ndarray  # real, length n
    f: np.ndarray  # complex, length 2n
    lam: np.ndarray  # real, length 2n: (xi, -xi)
    c: np.ndarray  # real 2n x 2n
    matrix: np.ndarray  # complex 2n x 2n, Hermitian positive definite
    energy: float

    @property
    def n(self) -> int:
        return self.point.n

    def to_json(self) -> str:
        def cplx(arr):
            a = np.asarray(arr, dtype=complex)
            return np.stack([a.real, a.imag], axis=-1).tolist()

        return json.dumps(
            {
                "point": json.loads(self.point.to_json()),
                "coupling": json.loads(self.coupling.to_json()),
                "z": cplx(self.z),
                "u": list(self.u),
                "f": cplx(self.f),
                "lam": list(self.lam),
                "matrix": cplx(self.matrix),
                "energy": self.energy,
            }
        )


def lax_matrix(p: PhasePoint, g: Coupling) -> LaxBundle:
    """Assemble the full bundle; errors out on near-degenerate denominators."""
    _check_inputs(p, g)
    g.require_regular()
    z = np.asarray(_kernels.z_coeffs(p.xi, g.mu, g.nu))
    u = np.asarray(_kernels.u_coeffs(p.xi, g.mu, g.nu))
    f = f_vector(p, g)
    lam = np.concatenate([p.xi, -p.xi])
    den = np.sinh(1j * g.mu + lam[:, None] - lam[None, :])
    if np.abs(den).min() < DEGENERACY_TOL:
        raise LaxError("near-degenerate Lax denominator: positions collide modulo mu")
    mat = np.asarray(_kernels.lax_entries(f, lam, g.mu, g.nu))
    energy = float(np.cosh(p.eta) @ u)
    return LaxBundle(
        point=p, coupling=g, z=z, u=u, f=f, lam=lam,
        c=conjugation_matrix(p.n), matrix=mat, energy=energy,
    )


def commutation_residual(bundle: LaxBundle) -> float:
    """Max-entry modulus of the defining exchange relation for L.

    e^{i mu} e^{Lam} L e^{-Lam} - e^{-i mu} e^{-Lam} L e^{Lam}
        = 2i sin(mu) F F* + 2i sin(mu - nu) C
    """
    mu = bundle.coupling.mu
    nu = bundle.coupling.nu
    el = np.exp(bundle.lam)
    lhs = (
        np.exp(1j * mu) * (el[:, None] * bundle.matrix / el[None, :])
        - np.exp(-1j * mu) * (bundle.matrix * el[None, :] / el[:, None])
    )
    rhs = 2j * np.sin(mu) * np.outer(bundle.f, bundle.f.conj()) + 2j * np.sin(mu - nu) * bundle.c
    return float(np.abs(lhs - rhs).max())


def trace_power_observable(bundle: LaxBundle, k: int) -> float:
    """tr(L^k), real for Hermitian L; a conserved quantity of the flow."""
    if k < 1:
        raise LaxError("k must be >= 1")
    val = np.trace(np.linalg.matrix_power(bundle.matrix, k))
    return float(val.real)
