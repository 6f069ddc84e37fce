from __future__ import annotations

import numpy as np
import pytest

from src.models.estimation import ANGLES, LENGTHS, RATES, EkfState, NoiseCovariances
from src.services.estimation import (
    ExtendedKalmanFilter,
    discretize,
    initialize,
    kalman_gain,
    measurement_jacobian,
    measurement_model,
    predict,
    update,
    wrap_angle,
)
from src.services.exceptions import EstimationError, InnovationSingularError
from src.services.kinematics import euler_rate_matrix, inverse_kinematics
from tests.conftest import sample_state


@pytest.fixture()
def cov(default_config) -> NoiseCovariances:
    return default_config.ekf.build()


# ---------------------------------------------------------------------------
# Prediction
# ---------------------------------------------------------------------------

def test_discretize():
    A_d, B_d = discretize(0.01)

    assert A_d.shape == (12, 12) and B_d.shape == (12, 6)
    np.testing.assert_array_equal(A_d[:6, 6:], 0.01 * np.eye(6))
    np.testing.assert_array_equal(np.diag(A_d), np.ones(12))
    np.testing.assert_array_equal(B_d[6:], 0.01 * np.eye(6))
    np.testing.assert_array_equal(B_d[:6], np.zeros((6, 6)))


def test_predict_integrates_velocity_and_input(cov, rng):
    A_d, B_d = discretize(0.1)
    xhat = rng.normal(size=12)
    u = rng.normal(size=6)
    prior = EkfState(xhat=xhat, P=np.eye(12))

    state = predict(prior, u, A_d, B_d, cov)

    np.testing.assert_allclose(state.xhat[:6], xhat[:6] + 0.1 * xhat[6:])
    np.testing.assert_allclose(state.xhat[6:], xhat[6:] + 0.1 * u)
    np.testing.assert_allclose(state.P, A_d @ A_d.T + cov.predict_cov)


# ---------------------------------------------------------------------------
# Measurement model
# ---------------------------------------------------------------------------

def test_measurement_at_home(geom, home):
    z = measurement_model(np.concatenate([home, np.zeros(6)]), geom)

    np.testing.assert_array_equal(z[LENGTHS], inverse_kinematics(home, geom).s)
    np.testing.assert_array_equal(z[ANGLES], np.zeros(3))
    np.testing.assert_array_equal(z[RATES], np.zeros(3))


def test_measured_rates_are_body_rates(geom, rng):
    xi = sample_state(rng)

    z = measurement_model(xi, geom)

    np.testing.assert_allclose(z[RATES], euler_rate_matrix(xi[3:6]) @ xi[9:12])


def test_measurement_jacobian_matches_finite_difference(geom, rng):
    h = 1e-6
    for _ in range(100):
        xi = sample_state(rng)
        expected = np.empty((12, 12))
        for k in range(12):
            step = np.zeros(12)
            step[k] = h
            expected[:, k] = (measurement_model(xi + step, geom) - measurement_model(xi - step, geom)) / (2 * h)

        np.testing.assert_allclose(measurement_jacobian(xi, geom), expected, atol=1e-6)


def test_measurement_jacobian_selects_angles(geom, rng):
    gamma = measurement_jacobian(sample_state(rng), geom)

    np.testing.assert_array_equal(gamma[ANGLES, 3:6], np.eye(3))
    np.testing.assert_array_equal(gamma[LENGTHS, 6:], np.zeros((6, 6)))
    np.testing.assert_array_equal(gamma[RATES, :3], np.zeros((3, 3)))


# ---------------------------------------------------------------------------
# Update
# ---------------------------------------------------------------------------

def test_update_without_innovation_keeps_estimate(geom, cov, rng):
    xi = sample_state(rng)
    prior = EkfState(xhat=xi, P=np.eye(12))
    gamma = measurement_jacobian(xi, geom)

    state = update(prior, measurement_model(xi, geom), gamma, cov, geom)

    np.testing.assert_array_equal(state.xhat, xi)
    assert np.trace(state.P) < np.trace(prior.P)


def test_update_with_huge_sensor_noise_barely_moves(geom, cov, rng):
    xi = sample_state(rng)
    noisy = NoiseCovariances(cov.predict_cov, cov.innov_cov * 1e12, cov.initial_cov)
    prior = EkfState(xhat=xi, P=np.eye(12))
    z = measurement_model(xi, geom) + rng.normal(scale=1e-3, size=12)

    state = update(prior, z, measurement_jacobian(xi, geom), noisy, geom)

    assert np.max(np.abs(state.xhat - xi)) <= 1e-9


def test_update_wraps_angle_innovation(geom, cov):
    truth = np.array([0.0, 0.0, 0.32, 0.0, 0.0, np.pi + 0.01] + [0.0] * 6)
    z = measurement_model(truth, geom)
    z[8] = wrap_angle(z[8])
    xhat = truth.copy()
    xhat[5] = np.pi - 0.01
    prior = EkfState(xhat=xhat, P=np.eye(12))

    state = update(prior, z, measurement_jacobian(xhat, geom), cov, geom)

    assert 0.0 < state.xhat[5] - xhat[5] < 0.03


def test_update_keeps_covariance_symmetric(geom, cov, rng):
    xi = sample_state(rng)
    P = np.diag(rng.uniform(0.1, 2.0, 12))
    prior = EkfState(xhat=xi, P=P)

    state = update(prior, measurement_model(xi, geom), measurement_jacobian(xi, geom), cov, geom)

    assert state.asymmetry == 0.0
    assert state.min_eigenvalue >= -1e-9


def test_scalar_kalman_gain():
    K = kalman_gain(np.eye(1), np.eye(1), np.eye(1))

    np.testing.assert_allclose(K, [[0.5]])


def test_singular_innovation_is_rejected(geom, rng):
    xi = sample_state(rng)

    with pytest.raises(InnovationSingularError) as exc_info:
        kalman_gain(np.zeros((12, 12)), measurement_jacobian(xi, geom), np.zeros((12, 12)))
    assert isinstance(exc_info.value, EstimationError)


@pytest.mark.parametrize(
    ("angle", "wrapped"),
    [
        (0.0, 0.0),
        (np.pi, np.pi),
        (-np.pi, np.pi),
        (1.5 * np.pi, -0.5 * np.pi),
        (-1.5 * np.pi, 0.5 * np.pi),
        (4 * np.pi + 0.25, 0.25),
    ],
)
def test_wrap_angle(angle, wrapped):
    assert float(wrap_angle(angle)) == pytest.approx(wrapped, abs=1e-12)


# ---------------------------------------------------------------------------
# Filter lifecycle
# ---------------------------------------------------------------------------

def test_initialize_from_exact_lengths(geom, cov, home):
    state = initialize(inverse_kinematics(home, geom).s, geom, cov.initial_cov)

    np.testing.assert_array_equal(state.xhat, np.concatenate([home, np.zeros(6)]))
    np.testing.assert_array_equal(state.P, cov.initial_cov)


def test_filter_requires_initialization(geom, cov):
    ekf = ExtendedKalmanFilter(geom, cov, 0.01)

    with pytest.raises(RuntimeError):
        ekf.step(np.zeros(6), np.zeros(12))


def test_filter_tracks_stationary_platform(geom, cov, home, rng):
    truth = np.concatenate([home, np.zeros(6)])
    sigmas = np.array([5e-5] * 6 + [5e-4] * 3 + [1e-3] * 3)
    ekf = ExtendedKalmanFilter(geom, cov, 0.01)
    ekf.initialize(inverse_kinematics(home, geom).s + rng.normal(scale=5e-5, size=6))

    for _ in range(200):
        z = measurement_model(truth, geom) + rng.normal(scale=sigmas)
        state = ekf.step(np.zeros(6), z)

        assert state.asymmetry <= 1e-10
        assert state.min_eigenvalue >= -1e-9

    assert np.max(np.abs(ekf.state.xhat[:6] - home)) < 5e-3
