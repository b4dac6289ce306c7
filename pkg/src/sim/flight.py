"""Free-flight rigid-body model and the closed-loop position step scenario."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from control.attitude import attitude_loop
from control.mixer import mixer, wrench
from control.position import PositionController, Setpoint
from geometry.rotations import E_Z, Vector3, exp_map, orthonormalize
from sim.hinge import check_timestep
from sim.state import VehicleState
from utils.config import RunConfig, VehicleParams
from utils.logging import get_logger

logger = get_logger(__name__)

FLIGHT_HEADER = ("t", "x", "y", "z", "vx", "vy", "vz", "f1", "f2", "f3", "f4")


def flight_derivatives(
    state: VehicleState, thrusts: NDArray[np.float64], params: VehicleParams
) -> tuple[Vector3, Vector3]:
    """Linear acceleration (Earth) and angular acceleration (body) for the propeller thrusts."""
    thrust, torque = wrench(thrusts, params)
    inertia = params.inertia_matrix
    acceleration = state.attitude @ E_Z * thrust / params.mass - params.gravity * E_Z
    gyroscopic = np.cross(state.omega, inertia @ state.omega)
    angular_acceleration = np.linalg.solve(inertia, torque - gyroscopic)
    return acceleration, angular_acceleration


def step_flight(state: VehicleState, thrusts: NDArray[np.float64], params: VehicleParams, dt: float) -> VehicleState:
    """
    Semi-implicit Euler step: velocities first, then position and the exponential-map attitude update.

    Raises:
        ExcessiveTimestepError: If dt is not in (0, 0.01] s.
    """
    check_timestep(dt)
    acceleration, angular_acceleration = flight_derivatives(state, thrusts, params)
    velocity = state.velocity + acceleration * dt
    omega = state.omega + angular_acceleration * dt
    return VehicleState(
        position=state.position + velocity * dt,
        velocity=velocity,
        attitude=orthonormalize(state.attitude @ exp_map(omega * dt)),
        omega=omega,
        contact=None,
    )


def hover_thrusts(params: VehicleParams) -> NDArray[np.float64]:
    """Equal thrusts that carry the weight."""
    return np.full(len(params.propeller_positions), params.mass * params.gravity / len(params.propeller_positions))


@dataclass(frozen=True)
class FlightResult:
    """Trajectory of a closed-loop flight run."""

    times: NDArray[np.float64]
    positions: NDArray[np.float64]
    velocities: NDArray[np.float64]
    thrusts: NDArray[np.float64]

    def rows(self) -> list[list[float]]:
        """CSV rows, columns as in FLIGHT_HEADER."""
        return [
            [float(t), *position, *velocity, *thrust]
            for t, position, velocity, thrust in zip(
                self.times, self.positions, self.velocities, self.thrusts, strict=True
            )
        ]


def run_flight_step(config: RunConfig, offset: Vector3 | None = None, duration: float = 10.0) -> FlightResult:
    """
    Hover at the origin starting displaced by offset (default 1 m along x) with the full
    position, attitude and mixer loop closed.
    """
    params, simulation = config.vehicle, config.simulation
    ratio = max(1, round(simulation.control_dt / simulation.dynamics_dt))
    controller = PositionController(config.controller, params.mass)
    setpoint = Setpoint()
    start = np.array([1.0, 0.0, 0.0]) if offset is None else np.asarray(offset, dtype=float)
    state = VehicleState(position=start)
    thrusts = hover_thrusts(params)

    times, positions, velocities, commanded = [], [], [], []
    steps = int(round(duration / simulation.dynamics_dt))
    for step in range(steps):
        if step % ratio == 0:
            thrust, desired = controller.attitude_setpoint(state, setpoint)
            torque = attitude_loop(state.attitude, desired, state.omega, config.controller, params.inertia_matrix)
            thrusts = mixer(torque, thrust, params).thrusts
            times.append(step * simulation.dynamics_dt)
            positions.append(state.position.copy())
            velocities.append(state.velocity.copy())
            commanded.append(thrusts.copy())
        state = step_flight(state, thrusts, params, simulation.dynamics_dt)

    logger.info(f"Flight step finished at position {np.round(state.position, 4)} after {duration:.1f} s")
    return FlightResult(
        times=np.array(times),
        positions=np.array(positions),
        velocities=np.array(velocities),
        thrusts=np.array(commanded),
    )
