"""Static torque check for pivot moves on the ground."""

import numpy as np

from control.mixer import torque_envelope
from geometry.icosahedron import TensegrityModel, face_inward_normal
from reorient.target import Move
from utils.config import VehicleParams


def pivot_torque_requirement(model: TensegrityModel, params: VehicleParams, move: Move) -> float:
    """
    Gravity moment [N m] about the pivot axis while the vehicle still rests on the start face.

    The sign is relative to the move's axis: negative values oppose the rotation.
    """
    up = face_inward_normal(model, move.from_face)
    moment = params.mass * params.gravity * np.cross(move.pivot, up)
    return float(move.axis @ moment)


def is_feasible(model: TensegrityModel, params: VehicleParams, move: Move, margin: float = 1.0) -> bool:
    """Whether the propellers can produce margin times the gravity moment about the pivot axis."""
    required = margin * abs(pivot_torque_requirement(model, params, move))
    return torque_envelope(params, move.axis) >= required
