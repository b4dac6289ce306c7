"""Vehicle and ground contact state of the simulator."""

from dataclasses import dataclass, field, replace

import numpy as np

from geometry.icosahedron import TensegrityModel, face_height
from geometry.rotations import E_Z, Matrix3, Vector3, matrix_from_euler
from reorient.target import Move, resting_attitude


@dataclass(frozen=True)
class ContactState:
    """
    Ground contact: resting on a face, or pivoting by phi about the axis of move.

    While pivoting the attitude is base @ Rot(move.axis, phi) and the pivot point stays at
    pivot_earth.
    """

    face: int
    move: Move | None = None
    phi: float = 0.0
    phi_rate: float = 0.0
    phi_acceleration: float = 0.0
    base: Matrix3 | None = None
    pivot_earth: Vector3 | None = None

    @property
    def pivoting(self) -> bool:
        """Whether the vehicle is rotating about an edge or node."""
        return self.move is not None


@dataclass(frozen=True)
class VehicleState:
    """Position and velocity (Earth), attitude (body to Earth), body rate and ground contact."""

    position: Vector3 = field(default_factory=lambda: np.zeros(3))
    velocity: Vector3 = field(default_factory=lambda: np.zeros(3))
    attitude: Matrix3 = field(default_factory=lambda: np.eye(3))
    omega: Vector3 = field(default_factory=lambda: np.zeros(3))
    contact: ContactState | None = None

    def with_contact(self, contact: ContactState | None, **changes: object) -> "VehicleState":
        """Copy with a new contact state and optional other fields."""
        return replace(self, contact=contact, **changes)  # type: ignore[arg-type]


def resting_state(model: TensegrityModel, face: int, yaw: float = 0.0) -> VehicleState:
    """Vehicle at rest on a face, centroid above the origin."""
    attitude = matrix_from_euler(yaw, 0.0, 0.0) @ resting_attitude(model, face)
    return VehicleState(
        position=face_height(model, face) * E_Z,
        attitude=attitude,
        contact=ContactState(face=face),
    )
