"""Contact-face identification from the estimated tilt.

Each face i has a resting attitude with zero yaw whose pitch and roll are (theta_i, phi_i).
The estimated pitch and roll give a zero-yaw attitude T; the contact face is the one whose
tilt attitude T_i is closest to T in rotation angle, arccos((trace(T^T T_i) - 1) / 2).
"""

import numpy as np
from numpy.typing import NDArray

from geometry.icosahedron import FACE_COUNT, TensegrityModel
from geometry.rotations import Matrix3, euler_from_matrix, tilt_matrix
from reorient.target import resting_attitude

# Rotation-angle differences below this are ties; the lowest face index wins.
TIE_TOLERANCE = 1e-12


def face_tilt(model: TensegrityModel, face_index: int) -> tuple[float, float]:
    """(pitch, roll) [rad] of a vehicle resting on the face."""
    _, pitch, roll = euler_from_matrix(resting_attitude(model, face_index))
    return pitch, roll


class FaceIdentifier:
    """Identifies the contact face against precomputed per-face tilt attitudes."""

    def __init__(self, model: TensegrityModel):
        self.model = model
        self.tilts = np.array([face_tilt(model, face) for face in range(1, FACE_COUNT + 1)])
        self._tilt_matrices = np.array([tilt_matrix(pitch, roll) for pitch, roll in self.tilts])

    def angles(self, pitch: float, roll: float) -> NDArray[np.float64]:
        """Rotation angle [rad] between the estimated tilt and the tilt of every face."""
        estimate = tilt_matrix(pitch, roll)
        traces = np.einsum("ij,fij->f", estimate, self._tilt_matrices)
        return np.arccos(np.clip((traces - 1.0) / 2.0, -1.0, 1.0))

    def identify(self, pitch: float, roll: float) -> int:
        """Index (1..20) of the face closest to the estimated tilt."""
        angles = self.angles(pitch, roll)
        return int(np.flatnonzero(angles <= angles.min() + TIE_TOLERANCE)[0]) + 1

    def identify_attitude(self, attitude: Matrix3) -> int:
        """Identify from an attitude estimate; its yaw is ignored."""
        _, pitch, roll = euler_from_matrix(attitude)
        return self.identify(pitch, roll)


def identify_contact_face(model: TensegrityModel, pitch: float, roll: float) -> int:
    """
    Contact face for an estimated pitch and roll.

    Args:
        model: The tensegrity model.
        pitch: Estimated pitch [rad].
        roll: Estimated roll [rad].

    Returns:
        int: Face index in 1..20.
    """
    return FaceIdentifier(model).identify(pitch, roll)


def tilt_separation(model: TensegrityModel) -> NDArray[np.float64]:
    """20x20 matrix of rotation angles between the tilt attitudes of every pair of faces."""
    identifier = FaceIdentifier(model)
    return np.array([identifier.angles(pitch, roll) for pitch, roll in identifier.tilts])
