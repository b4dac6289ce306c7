from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from control.exceptions import DegenerateCommandError
from geometry.rotations import E_Z, Matrix3, Vector3
from utils.config import GRAVITY, ControllerGains
from utils.logging import get_logger

logger = get_logger(__name__)

# Relative to g, below this the thrust direction is undefined.
DEGENERATE_ACCELERATION = 1e-6
PARALLEL_TOLERANCE = 1e-9


class IKinematicState(Protocol):
    """Anything with an Earth-frame position and velocity."""

    position: NDArray[np.float64]
    velocity: NDArray[np.float64]


@dataclass(frozen=True)
class Setpoint:
    """Desired position [m], velocity [m/s] and yaw [rad], Earth frame."""

    position: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))
    velocity: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))
    yaw: float = 0.0


def commanded_acceleration(state: IKinematicState, setpoint: Setpoint, gains: ControllerGains) -> Vector3:
    """Second-order error dynamics plus gravity compensation."""
    return (
        2.0 * gains.zeta_p * gains.omega_p * (setpoint.velocity - state.velocity)
        + gains.omega_p**2 * (setpoint.position - state.position)
        + GRAVITY * E_Z
    )


def position_loop(
    state: IKinematicState,
    setpoint: Setpoint,
    gains: ControllerGains,
    mass: float,
) -> tuple[float, Vector3]:
    """
    Desired total thrust and thrust direction from the position error.

    Returns:
        tuple: f_d [N] and the unit vector z_{B,d} in the Earth frame.

    Raises:
        DegenerateCommandError: If the commanded acceleration is (nearly) zero.
    """
    acceleration = commanded_acceleration(state, setpoint, gains)
    magnitude = float(np.linalg.norm(acceleration))
    if magnitude < DEGENERATE_ACCELERATION * GRAVITY:
        raise DegenerateCommandError(f"commanded acceleration {magnitude:.3e} m/s^2 has no direction")
    return mass * magnitude, acceleration / magnitude


def desired_attitude(z_desired: Vector3, yaw: float) -> Matrix3:
    """Attitude whose body z axis is z_desired and whose heading is yaw."""
    z_b = np.asarray(z_desired, dtype=float)
    z_b = z_b / np.linalg.norm(z_b)
    heading = np.array([np.cos(yaw), np.sin(yaw), 0.0])
    y_b = np.cross(z_b, heading)
    if np.linalg.norm(y_b) < PARALLEL_TOLERANCE:
        # z_desired is horizontal along the heading
        y_b = np.array([-np.sin(yaw), np.cos(yaw), 0.0])
    y_b = y_b / np.linalg.norm(y_b)
    x_b = np.cross(y_b, z_b)
    return np.column_stack([x_b, y_b, z_b])


class PositionController:
    """Position loop that keeps the last valid thrust direction when the command degenerates."""

    def __init__(self, gains: ControllerGains, mass: float):
        self.gains = gains
        self.mass = mass
        self._direction: Vector3 = E_Z.copy()

    def update(self, state: IKinematicState, setpoint: Setpoint) -> tuple[float, Vector3]:
        """Return f_d and z_{B,d}."""
        try:
            thrust, self._direction = position_loop(state, setpoint, self.gains, self.mass)
        except DegenerateCommandError:
            logger.warning("Degenerate thrust command, holding the previous direction")
            acceleration = commanded_acceleration(state, setpoint, self.gains)
            thrust = self.mass * float(np.linalg.norm(acceleration))
        return thrust, self._direction.copy()

    def attitude_setpoint(self, state: IKinematicState, setpoint: Setpoint) -> tuple[float, Matrix3]:
        """Return f_d and R_d."""
        thrust, direction = self.update(state, setpoint)
        return thrust, desired_attitude(direction, setpoint.yaw)

