from __future__ import annotations

import logging
import time

import numpy as np
from numpy.typing import ArrayLike

from src.models.control import GainMatrix
from src.models.dynamics import RigidBodyParams
from src.models.enums import LinearizationPose
from src.models.estimation import NoiseCovariances
from src.models.geometry import PlatformGeometry
from src.models.simulation import ScenarioSpec, SensorNoiseSpec, SimRecord
from src.schemas.sim_config import SimConfig
from src.services.control import feedback_linearize, saturate_forces, synthesize, virtual_control
from src.services.dynamics import forward_dynamics
from src.services.estimation import ExtendedKalmanFilter, measurement_model
from src.services.exceptions import ConfigValidationError, SimulationError, StewartError
from src.services.kinematics import forward_kinematics
from src.services.references import reference_for

logger = logging.getLogger(__name__)


def state_derivative(
    xi: np.ndarray, F: np.ndarray, geom: PlatformGeometry, params: RigidBodyParams
) -> np.ndarray:
    return np.concatenate([xi[6:], forward_dynamics(xi[:6], xi[6:], F, geom, params)])


def integrate_plant(
    xi: ArrayLike,
    F: ArrayLike,
    dt_outer: float,
    substeps: int,
    geom: PlatformGeometry,
    params: RigidBodyParams,
) -> np.ndarray:
    """Classical RK4 over one control period with F held constant."""
    if substeps < 1:
        raise ConfigValidationError("substeps must be at least 1", key="run.substeps")
    F = np.asarray(F, dtype=float)
    x = np.array(xi, dtype=float)
    h = dt_outer / substeps
    for _ in range(substeps):
        k1 = state_derivative(x, F, geom, params)
        k2 = state_derivative(x + 0.5 * h * k1, F, geom, params)
        k3 = state_derivative(x + 0.5 * h * k2, F, geom, params)
        k4 = state_derivative(x + h * k3, F, geom, params)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


def draw_measurement_noise(
    noise: SensorNoiseSpec, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    shape = (12,) if size is None else (size, 12)
    return rng.normal(0.0, noise.sigmas, size=shape)


def simulate_measurement(
    xi_true: ArrayLike,
    noise: SensorNoiseSpec,
    rng: np.random.Generator,
    geom: PlatformGeometry,
) -> np.ndarray:
    return measurement_model(xi_true, geom) + draw_measurement_noise(noise, rng)


def metrics(xi_true: ArrayLike, xi_des: ArrayLike, xhat: ArrayLike) -> tuple[float, float, float]:
    """Estimation error e_l, tracking error e_t and command error e_cs."""
    xi_true = np.asarray(xi_true, dtype=float)
    xi_des = np.asarray(xi_des, dtype=float)
    xhat = np.asarray(xhat, dtype=float)
    return (
        float(np.linalg.norm(xhat - xi_true)),
        float(np.linalg.norm(xi_true - xi_des)),
        float(np.linalg.norm(xi_des - xhat)),
    )


class ClosedLoopSimulator:
    """Reference, controller, plant, sensors and filter wired as one loop.

    The virtual control always acts on the filter estimate. The force law
    evaluates M, C, G and H at the pose solved from the latest leg readings
    (`LinearizationPose.ENCODER`) or at the estimated pose
    (`LinearizationPose.ESTIMATE`), with the estimated rates in both cases.
    """

    def __init__(
        self,
        scenario: ScenarioSpec,
        geom: PlatformGeometry,
        params: RigidBodyParams,
        gain: GainMatrix,
        cov: NoiseCovariances,
        noise: SensorNoiseSpec,
        force_limit: float | None = None,
        linearize_at: LinearizationPose = LinearizationPose.ENCODER,
    ) -> None:
        self.scenario = scenario
        self.geom = geom
        self.params = params
        self.gain = gain
        self.cov = cov
        self.noise = noise
        self.force_limit = force_limit
        self.linearize_at = linearize_at
        self.initial_state = np.concatenate([geom.home.vector, np.zeros(6)])

    def run(self) -> list[SimRecord]:
        scenario = self.scenario
        rng = np.random.default_rng(self.noise.seed)
        reference = reference_for(
            scenario.kind, self.initial_state[:6], literal=scenario.literal_reference
        )
        ekf = ExtendedKalmanFilter(self.geom, self.cov, scenario.dt)

        logger.info(
            "Starting %s run: duration=%.2fs dt=%.4fs seed=%d linearize_at=%s",
            scenario.kind.value, scenario.duration, scenario.dt, self.noise.seed,
            self.linearize_at.value,
        )
        started = time.perf_counter()

        records: list[SimRecord] = []
        saturated_steps = 0
        xi = self.initial_state.copy()
        step = 0
        try:
            z = simulate_measurement(xi, self.noise, rng, self.geom)
            state = ekf.initialize(z[:6])
            encoder_pose = forward_kinematics(z[:6], self.geom.home, self.geom).vector

            for step in range(scenario.steps + 1):
                t = step * scenario.dt
                q_des, qdot_des = reference(t)
                xi_des = np.concatenate([q_des, qdot_des])

                if scenario.perfect_state:
                    feedback, model_pose = xi, xi[:6]
                elif self.linearize_at is LinearizationPose.ENCODER:
                    feedback, model_pose = state.xhat, encoder_pose
                else:
                    feedback, model_pose = state.xhat, state.xhat[:6]
                u = virtual_control(feedback, xi_des, self.gain)
                F = feedback_linearize(model_pose, feedback[6:], u, self.geom, self.params)
                F, saturated = saturate_forces(F, self.force_limit)
                saturated_steps += saturated

                e_l, e_t, e_cs = metrics(xi, xi_des, state.xhat)
                records.append(
                    SimRecord(
                        t=t,
                        xi_true=xi.copy(),
                        xi_des=xi_des,
                        xhat=state.xhat.copy(),
                        z=z,
                        u=u,
                        F=F,
                        e_l=e_l,
                        e_t=e_t,
                        e_cs=e_cs,
                        cov_asymmetry=state.asymmetry,
                        cov_min_eig=state.min_eigenvalue,
                        saturated=saturated,
                    )
                )
                if step == scenario.steps:
                    break

                xi = integrate_plant(xi, F, scenario.dt, scenario.substeps, self.geom, self.params)
                z = simulate_measurement(xi, self.noise, rng, self.geom)
                state = ekf.step(u, z)
                encoder_pose = forward_kinematics(z[:6], encoder_pose, self.geom).vector
        except StewartError as exc:
            raise SimulationError(f"Step {step}: {exc.message}", step=step) from exc

        if saturated_steps:
            logger.warning(
                "Actuator forces saturated on %d of %d steps", saturated_steps, len(records)
            )
        final = records[-1]
        logger.info(
            "Finished %s run in %.1fs: e_l=%.3e e_t=%.3e e_cs=%.3e",
            scenario.kind.value, time.perf_counter() - started, final.e_l, final.e_t, final.e_cs,
        )
        return records


def run_closed_loop(scenario: ScenarioSpec, config: SimConfig) -> list[SimRecord]:
    simulator = ClosedLoopSimulator(
        scenario=scenario,
        geom=config.geometry.build(),
        params=config.mass.build(),
        gain=synthesize(config.controller.build()),
        cov=config.ekf.build(),
        noise=config.noise.build(),
        force_limit=config.controller.force_limit,
        linearize_at=config.controller.linearize_at,
    )
    return simulator.run()
