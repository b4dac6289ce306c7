"""Complementary attitude filter.

The estimate is kept as a rotation matrix so that it survives pitch angles of 90 degrees,
which the vehicle passes through while pivoting on the ground. Each step integrates the
gyro rate and then rotates the estimate by a fraction (1 - alpha) of the angle between
the predicted and the measured gravity direction. The correction axis is horizontal,
so no correction is ever applied about the vertical.
"""

from dataclasses import dataclass

import numpy as np

from geometry.rotations import E_Z, Matrix3, Vector3, axis_angle_matrix, euler_from_matrix, exp_map, orthonormalize
from utils.config import GRAVITY, EstimatorConfig
from utils.logging import get_logger

logger = get_logger(__name__)

PARALLEL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class AttitudeEstimate:
    """Estimated attitude and its yaw-pitch-roll angles [rad]."""

    attitude: Matrix3

    @property
    def yaw(self) -> float:
        """Heading."""
        return euler_from_matrix(self.attitude)[0]

    @property
    def pitch(self) -> float:
        """Rotation about the intermediate y axis."""
        return euler_from_matrix(self.attitude)[1]

    @property
    def roll(self) -> float:
        """Rotation about the body x axis."""
        return euler_from_matrix(self.attitude)[2]


def accelerometer_tilt(accel: Vector3) -> tuple[float, float]:
    """Pitch and roll of a resting vehicle measuring the specific force accel."""
    a_x, a_y, a_z = accel
    return float(np.arctan2(-a_x, np.hypot(a_y, a_z))), float(np.arctan2(a_y, a_z))


def complementary_filter(
    previous: Matrix3,
    gyro: Vector3,
    accel: Vector3,
    dt: float,
    alpha: float,
    config: EstimatorConfig | None = None,
    gravity: float = GRAVITY,
) -> Matrix3:
    """
    One filter step.

    Args:
        previous: Previous attitude estimate (body to Earth).
        gyro: Body angular rate [rad/s].
        accel: Specific force [m/s^2], body frame.
        dt: Step [s].
        alpha: Gyro weight in (0, 1]; 1 integrates the gyro only.
        config: Accelerometer gates.
        gravity: g [m/s^2].

    Returns:
        Matrix3: The new estimate.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    config = config or EstimatorConfig()
    predicted = orthonormalize(previous @ exp_map(np.asarray(gyro, dtype=float) * dt))

    norm = float(np.linalg.norm(accel))
    if not config.accel_gate_low * gravity <= norm <= config.accel_gate_high * gravity:
        logger.debug(f"Accelerometer correction skipped, |a| = {norm:.2f} m/s^2")
        return predicted

    up_predicted = predicted.T @ E_Z
    up_measured = np.asarray(accel, dtype=float) / norm
    axis = np.cross(up_predicted, up_measured)
    sin_angle = float(np.linalg.norm(axis))
    angle = float(np.arctan2(sin_angle, up_predicted @ up_measured))
    if sin_angle < PARALLEL_TOLERANCE:
        return predicted
    return predicted @ axis_angle_matrix(axis, -(1.0 - alpha) * angle)


class ComplementaryFilter:
    """Stateful complementary filter stepped by a single owner."""

    def __init__(self, config: EstimatorConfig, gravity: float = GRAVITY, initial: Matrix3 | None = None):
        self.config = config
        self.gravity = gravity
        self._attitude = np.eye(3) if initial is None else np.array(initial, dtype=float)

    @property
    def estimate(self) -> AttitudeEstimate:
        """Current estimate."""
        return AttitudeEstimate(self._attitude.copy())

    def reset(self, attitude: Matrix3) -> None:
        """Overwrite the estimate."""
        self._attitude = np.array(attitude, dtype=float)

    def update(self, gyro: Vector3, accel: Vector3, dt: float) -> AttitudeEstimate:
        """Advance by one IMU sample."""
        self._attitude = complementary_filter(
            self._attitude, gyro, accel, dt, self.config.alpha, self.config, self.gravity
        )
        return self.estimate
