"""Control allocation between total thrust, body torque and the four propeller thrusts.

    [f, tau_x, tau_y, tau_z] = M f_P,   M rows: 1, r_y, -r_x, s kappa
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from control.exceptions import SingularAllocationError
from geometry.rotations import Vector3
from utils.config import VehicleParams
from utils.logging import get_logger

logger = get_logger(__name__)

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class MixerOutput:
    """Per-propeller thrusts [N] and whether any of them was clamped to its limit."""

    thrusts: NDArray[np.float64]
    clamped: bool


def allocation_matrix(params: VehicleParams) -> NDArray[np.float64]:
    """The 4x4 map from propeller thrusts to total thrust and body torque."""
    arms = params.arms
    spins = np.asarray(params.spin_directions, dtype=float)
    return np.vstack(
        [
            np.ones(len(arms)),
            arms[:, 1],
            -arms[:, 0],
            spins * params.torque_constant,
        ]
    )


def wrench(thrusts: NDArray[np.float64], params: VehicleParams) -> tuple[float, Vector3]:
    """Total thrust [N] and body torque [N m] produced by the propeller thrusts."""
    result = allocation_matrix(params) @ np.asarray(thrusts, dtype=float)
    return float(result[0]), result[1:]


def _inverse(params: VehicleParams) -> NDArray[np.float64]:
    matrix = allocation_matrix(params)
    if np.linalg.cond(matrix) > MAX_CONDITION:
        raise SingularAllocationError("propeller geometry gives a singular allocation matrix")
    return np.linalg.inv(matrix)


def mixer(torque: Vector3, thrust: float, params: VehicleParams) -> MixerOutput:
    """
    Propeller thrusts that realise the total thrust and body torque, clamped to the thrust limits.

    Raises:
        SingularAllocationError: If the allocation matrix is singular.
    """
    command = np.concatenate([[thrust], np.asarray(torque, dtype=float)])
    thrusts = _inverse(params) @ command
    limited = np.clip(thrusts, params.thrust_min, params.thrust_max)
    clamped = bool(np.any(limited != thrusts))
    if clamped:
        logger.debug(f"Thrusts {np.round(thrusts, 3)} clamped to [{params.thrust_min}, {params.thrust_max}]")
    return MixerOutput(thrusts=limited, clamped=clamped)


def torque_envelope(params: VehicleParams, axis: Vector3) -> float:
    """
    Largest torque [N m] along a body axis at zero total thrust within the propeller limits.
    """
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    per_unit = _inverse(params) @ np.concatenate([[0.0], axis])
    limits = []
    for g in per_unit:
        if g > 0:
            limits.append(params.thrust_max / g)
        elif g < 0:
            limits.append(params.thrust_min / g)
    return max(0.0, min(limits)) if limits else 0.0
