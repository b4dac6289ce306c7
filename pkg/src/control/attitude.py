"""Attitude loop: body torque from the rotation error to the desired attitude."""

import numpy as np

from geometry.rotations import Matrix3, Vector3, rotation_vector
from utils.config import ControllerGains


def attitude_loop(
    attitude: Matrix3,
    desired: Matrix3,
    omega: Vector3,
    gains: ControllerGains,
    inertia: Matrix3,
) -> Vector3:
    """
    Body torque command of the two-stage attitude and rate loop.

    The rate setpoint is the axis-angle vector of R^T R_d over tau_att, the angular
    acceleration command is the rate error over tau and the torque is J times it.

    Args:
        attitude: Estimated attitude R (body to Earth).
        desired: Desired attitude R_d.
        omega: Body angular velocity [rad/s].
        gains: Controller time constants.
        inertia: J [kg m^2].

    Returns:
        Vector3: Torque command [N m], body frame.
    """
    omega_desired = rotation_vector(attitude.T @ desired) / gains.tau_att
    angular_acceleration = (omega_desired - np.asarray(omega, dtype=float)) / gains.tau
    return inertia @ angular_acceleration
