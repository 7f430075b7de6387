import numpy as np
import numpy.testing as npt
import pytest

from vandiejen.duality import dual_frame
from vandiejen.dynamics import (
    DynamicsError,
    FlowConfig,
    energy,
    flow_matrix_regular_form,
    projection_flow,
    projection_trajectory,
    regular_permutation,
    rk_flow,
    vector_field,
)
from vandiejen.phase_space import Coupling, PhasePoint

from conftest import point


def test_vector_field_matches_finite_difference_gradient(g):
    # xi_dot = dH/d eta, eta_dot = -dH/d xi, checked against central differences
    p = point(3, seed=2)
    xd, ed = vector_field(p, g)
    h = 1e-6
    for a in range(3):
        eta_p = p.eta.copy(); eta_p[a] += h
        eta_m = p.eta.copy(); eta_m[a] -= h
        dh_deta = (energy(PhasePoint(p.xi, eta_p), g) - energy(PhasePoint(p.xi, eta_m), g)) / (2 * h)
        assert xd[a] == pytest.approx(dh_deta, abs=1e-8)
        xi_p = p.xi.copy(); xi_p[a] += h
        xi_m = p.xi.copy(); xi_m[a] -= h
        dh_dxi = (energy(PhasePoint(xi_p, p.eta), g) - energy(PhasePoint(xi_m, p.eta), g)) / (2 * h)
        assert ed[a] == pytest.approx(-dh_dxi, abs=1e-8)


def test_single_particle_rapidity_rate_closed_form(g):
    p = PhasePoint(xi=[0.9], eta=[0.4])
    xd, ed = vector_field(p, g)
    u = energy(PhasePoint(p.xi, [0.0]), g)
    assert xd[0] == pytest.approx(np.sinh(0.4) * u, rel=1e-12)
    y = 2 * p.xi[0]
    interaction = np.sin(g.nu) ** 2 / np.tanh(y) / (np.sin(g.nu) ** 2 + np.sinh(y) ** 2)
    assert ed[0] == pytest.approx(2 * np.cosh(0.4) * u * interaction, rel=1e-10)


def test_zero_rapidity_freezes_positions(g):
    p = PhasePoint(xi=[1.4, 0.6], eta=[0.0, 0.0])
    xd, _ = vector_field(p, g)
    npt.assert_allclose(xd, 0.0, atol=1e-15)


def test_rk_energy_conservation(g):
    p = point(3, seed=5)
    samples = rk_flow(p, g, [0.0, 1.0, 2.5, 4.0])
    e0 = samples[0].energy
    for s in samples:
        assert abs(s.energy - e0) <= 1e-8 * e0


@pytest.mark.parametrize("n,seed", [(1, 3), (2, 7), (2, 44), (3, 11), (3, 33)])
def test_propagators_agree(n, seed, g):
    p = point(n, seed=seed)
    grid = [0.5, 2.0, 5.0]
    rk = rk_flow(p, g, grid)
    pr = projection_trajectory(p, g, grid)
    for a, b in zip(rk, pr):
        assert np.abs(a.point.xi - b.point.xi).max() <= 1e-6
        assert np.abs(a.point.eta - b.point.eta).max() <= 1e-6


def test_projection_flow_identity_at_zero_time(g):
    p = point(2, seed=9)
    q = projection_flow(p, g, 0.0)
    assert np.abs(q.xi - p.xi).max() <= 1e-10
    assert np.abs(q.eta - p.eta).max() <= 1e-10


def test_projection_flow_group_property(g):
    p = point(2, seed=13)
    one_step = projection_flow(p, g, 3.0)
    two_step = projection_flow(projection_flow(p, g, 1.2), g, 1.8)
    assert np.abs(one_step.xi - two_step.xi).max() <= 1e-7
    assert np.abs(one_step.eta - two_step.eta).max() <= 1e-7


def test_projection_flow_time_reversal(g):
    p = point(2, seed=15)
    back = projection_flow(projection_flow(p, g, 2.0), g, -2.0)
    assert np.abs(back.xi - p.xi).max() <= 1e-8
    assert np.abs(back.eta - p.eta).max() <= 1e-8


def test_projection_conserves_spectrum(g):
    p = point(3, seed=17)
    th0 = dual_frame(p, g).theta_hat
    th1 = dual_frame(projection_flow(p, g, 2.0), g).theta_hat
    assert np.abs(th1 - th0).max() <= 1e-8


def test_analytic_and_finite_difference_rapidities_agree(g):
    p = point(2, seed=19)
    qa = projection_flow(p, g, 1.5, FlowConfig(rapidity_mode="analytic"))
    qf = projection_flow(p, g, 1.5, FlowConfig(rapidity_mode="finite-difference"))
    assert np.abs(qa.eta - qf.eta).max() <= 1e-6


def test_high_precision_escalation_path(g):
    # large |t| pushes the exponent span past the double-precision limit
    from vandiejen.dynamics import DOUBLE_EXP_LIMIT, _exponent_span
    from vandiejen.lax import lax_matrix

    p = point(2, seed=44)
    t = 8.0
    assert _exponent_span(lax_matrix(p, g), t) > DOUBLE_EXP_LIMIT
    q = projection_flow(p, g, t)
    r = rk_flow(p, g, [t])[0].point
    assert np.abs(q.xi - r.xi).max() <= 1e-6
    assert np.abs(q.eta - r.eta).max() <= 1e-6


def test_regular_permutation_is_involution():
    w = regular_permutation(3)
    npt.assert_array_equal(w @ w, np.eye(6))


def test_regular_form_spectrum_matches_flow(g):
    p = point(2, seed=7)
    frame = dual_frame(p, g)
    l_tilde, theta_plus = flow_matrix_regular_form(frame)
    assert (np.diff(theta_plus) < 0).all()
    t = 1.0
    flow_spec = np.sort(np.linalg.eigvals(l_tilde @ np.diag(np.exp(t * np.sinh(theta_plus) * 2))).real)
    b = lax_matrix_eigendata(p, g, t)
    assert np.abs(np.sort(flow_spec) - np.sort(b)).max() <= 1e-8 * np.abs(b).max()


def lax_matrix_eigendata(p, g, t):
    from vandiejen.lax import lax_matrix

    bundle = lax_matrix(p, g)
    bmat = bundle.matrix - np.linalg.inv(bundle.matrix)
    beig = np.linalg.eigh(bmat)
    core = beig.eigenvectors @ np.diag(np.exp(t * beig.eigenvalues)) @ beig.eigenvectors.conj().T
    a = np.exp(2 * bundle.lam)[:, None] * core
    return np.sort(np.linalg.eigvals(a).real)


def test_overflow_cap_raises(g):
    with pytest.raises(DynamicsError):
        projection_flow(point(2, seed=3), g, 1e6)


def test_bad_config_rejected():
    with pytest.raises(DynamicsError):
        FlowConfig(method="leapfrog")
    with pytest.raises(DynamicsError):
        FlowConfig(rk_rel_tol=-1.0)


def test_rk_mixed_sign_grid_order_preserved(g):
    p = point(2, seed=21)
    grid = [1.0, -1.0, 0.0, 2.0]
    samples = rk_flow(p, g, grid)
    assert [s.t for s in samples] == grid
    npt.assert_array_equal(samples[2].point.xi, p.xi)


def test_non_regular_coupling_rejected():
    from vandiejen.phase_space import PhaseSpaceError

    with pytest.raises(PhaseSpaceError):
        vector_field(point(2, seed=1), Coupling(0.7, 1.4))
