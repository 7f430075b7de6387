import numpy as np
import numpy.testing as npt
import pytest

from vandiejen.duality import dual_frame
from vandiejen.scattering import (
    ScatteringError,
    asymptotic_data,
    delta_shift,
    delta_vector,
    residual_trace,
    scattering_map,
    upsilon,
    upsilon_minus_inverse,
    wave_map,
)
from vandiejen.phase_space import PhasePoint

from conftest import point


def test_delta_single_particle_closed_form(g):
    xi = [0.7]
    expect = 0.5 * np.log1p(np.sin(g.nu) ** 2 / np.sinh(1.4) ** 2)
    assert delta_shift(xi, g, 0) == pytest.approx(expect, rel=1e-14)


def test_delta_vanishes_far_away(g):
    assert abs(delta_shift([50.0], g, 0)) < 1e-40


def test_delta_matches_reversed_summation_oracle(g):
    # re-sum the two-body terms in the opposite loop order
    xi = np.array([2.1, 1.3, 0.5])
    for c in range(3):
        val = 0.5 * np.log1p(np.sin(g.nu) ** 2 / np.sinh(2 * xi[c]) ** 2)
        for d in reversed(range(3)):
            if d == c:
                continue
            sign = -0.5 if d < c else 0.5
            val += sign * np.log1p(np.sin(g.mu) ** 2 / np.sinh(xi[c] - xi[d]) ** 2)
            val += 0.5 * np.log1p(np.sin(g.mu) ** 2 / np.sinh(xi[c] + xi[d]) ** 2)
        assert delta_shift(xi, g, c) == pytest.approx(val, rel=1e-13)


def test_delta_rejects_unordered(g):
    with pytest.raises(ScatteringError):
        delta_shift([0.5, 1.0], g, 0)
    with pytest.raises(ScatteringError):
        delta_shift([0.5], g, 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_minor_routes_match_closed_form(n, g):
    data = asymptotic_data(point(n, seed=5 + n), g)
    assert np.abs(data.minor_route_plus - data.lambda_plus).max() <= 1e-9
    assert np.abs(data.minor_route_minus - data.lambda_minus).max() <= 1e-9


def test_sum_identity(g):
    data = asymptotic_data(point(3, seed=9), g)
    npt.assert_allclose(data.lambda_plus + data.lambda_minus, data.delta, atol=1e-9)
    npt.assert_allclose(data.theta_plus, -data.theta_minus)


def test_single_particle_lambda_plus_closed_form(g):
    p = point(1, seed=11)
    frame = dual_frame(p, g)
    data = asymptotic_data(p, g, frame)
    th = frame.theta_hat[0]
    expect = 0.5 * frame.lambda_hat[0] + 0.25 * np.log1p(np.sin(g.nu) ** 2 / np.sinh(2 * th) ** 2)
    assert data.lambda_plus[0] == pytest.approx(expect, rel=1e-12)


def test_scattering_map_negates_rapidities(g):
    zeta = PhasePoint.__new__(PhasePoint)
    object.__setattr__(zeta, "xi", np.array([0.3, -0.2]))
    object.__setattr__(zeta, "eta", np.array([-1.5, -0.4]))
    out = scattering_map(zeta, g)
    npt.assert_array_equal(out.eta, [1.5, 0.4])


def test_scattering_map_single_particle(g):
    zeta = PhasePoint.__new__(PhasePoint)
    object.__setattr__(zeta, "xi", np.array([0.4]))
    object.__setattr__(zeta, "eta", np.array([-1.2]))
    out = scattering_map(zeta, g)
    assert out.xi[0] == pytest.approx(-0.4 + delta_shift([0.6], g, 0), rel=1e-13)
    assert out.eta[0] == pytest.approx(1.2)


def test_scattering_map_composed_with_reverse_is_identity(g):
    zeta = PhasePoint.__new__(PhasePoint)
    object.__setattr__(zeta, "xi", np.array([0.9, 0.1]))
    object.__setattr__(zeta, "eta", np.array([-2.0, -0.7]))
    out = scattering_map(zeta, g)
    back_xi = -out.xi + delta_vector(out.eta / 2.0, g)
    back_eta = -out.eta
    npt.assert_allclose(back_xi, zeta.xi, atol=1e-12)
    npt.assert_allclose(back_eta, zeta.eta)


def test_scattering_map_rejects_bad_rapidities(g):
    zeta = PhasePoint.__new__(PhasePoint)
    object.__setattr__(zeta, "xi", np.array([0.3]))
    object.__setattr__(zeta, "eta", np.array([0.5]))
    with pytest.raises(ScatteringError):
        scattering_map(zeta, g)


def test_wave_maps_factor_through_duality(g):
    p = point(2, seed=13)
    q = dual_frame(p, g).image
    for sign in (1, -1):
        w = wave_map(p, g, sign)
        v = upsilon(q, g, sign)
        npt.assert_allclose(w.xi, v.xi, atol=1e-10)
        npt.assert_allclose(w.eta, v.eta, atol=1e-10)


def test_scattering_connects_wave_maps(g):
    p = point(2, seed=15)
    w_minus = wave_map(p, g, -1)
    w_plus = wave_map(p, g, 1)
    out = scattering_map(w_minus, g)
    npt.assert_allclose(out.xi, w_plus.xi, atol=1e-12)
    npt.assert_allclose(out.eta, w_plus.eta, atol=1e-12)


def test_upsilon_minus_inverse_round_trip(g):
    q = point(2, seed=17)
    zeta = upsilon(q, g, -1)
    back = upsilon_minus_inverse(zeta, g)
    npt.assert_allclose(back.xi, q.xi, atol=1e-12)
    npt.assert_allclose(back.eta, q.eta, atol=1e-12)


def test_residuals_decay_and_rate_tracks_gap(g):
    p = point(2, seed=7)
    trace = residual_trace(p, g, np.arange(1.0, 12.1, 1.0))
    worst = np.abs(trace.position_residuals).max(axis=1)
    # strictly smaller residual when t doubles (within the pre-clamp range)
    assert worst[7] < worst[3] < worst[1]
    rap = np.abs(trace.rapidity_residuals).max(axis=1)
    assert rap[-1] < rap[1] / 4
    assert 0.5 <= trace.fitted_rate / trace.min_gap <= 1.5
    assert 0.5 <= trace.rapidity_fitted_rate / trace.min_gap <= 1.5


def test_residual_trace_mirrored_time_hits_minus_branch(g):
    p = point(2, seed=7)
    from vandiejen.dynamics import projection_flow

    data = asymptotic_data(p, g)
    t = 30.0
    q = projection_flow(p, g, -t)
    res = q.xi + t * np.sinh(data.theta_minus) - data.lambda_minus
    assert np.abs(res).max() < 5e-3
    assert np.abs(q.eta - data.theta_minus).max() < 5e-3


def test_residual_trace_rejects_bad_grid(g):
    with pytest.raises(ScatteringError):
        residual_trace(point(1, seed=1), g, [2.0, 1.0])


def test_wave_map_rejects_bad_sign(g):
    with pytest.raises(ScatteringError):
        wave_map(point(1, seed=1), g, 0)


def test_asymptotic_serialization(g):
    import json

    data = asymptotic_data(point(2, seed=19), g)
    d = json.loads(data.to_json())
    npt.assert_allclose(d["delta"], data.delta)
