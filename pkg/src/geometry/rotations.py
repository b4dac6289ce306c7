"""Rotation helpers shared by the attitude, identification and simulation code.

Attitudes map body-frame vectors to the Earth frame. Euler angles follow the
yaw-pitch-roll (Z-Y-X) convention: R = Rz(yaw) Ry(pitch) Rx(roll).
"""

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.transform import Rotation

Matrix3 = NDArray[np.float64]
Vector3 = NDArray[np.float64]

E_Z = np.array([0.0, 0.0, 1.0])
# Rotation used when a vector has to be carried onto its opposite.
HALF_TURN_X = np.diag([1.0, -1.0, -1.0])
PI_TOLERANCE = 1e-9


def skew(v: Vector3) -> Matrix3:
    """Cross-product matrix, skew(a) @ b == a x b."""
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def rotation_z_to(v: Vector3) -> Matrix3:
    """
    Rodrigues rotation that carries the unit z axis onto the unit vector v.
    The singular case v = -z returns the half turn about x.
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    cos_angle = float(E_Z @ v)
    if cos_angle <= -1.0 + 1e-12:
        return HALF_TURN_X.copy()
    s = skew(np.cross(E_Z, v))
    return np.eye(3) + s + (s @ s) / (1.0 + cos_angle)


def axis_angle_matrix(axis: Vector3, angle: float) -> Matrix3:
    """Rotation by angle [rad] about axis (normalized here)."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    return Rotation.from_rotvec(axis * angle).as_matrix()


def rotation_angle(r: Matrix3) -> float:
    """Angle of the axis-angle representation, arccos((trace - 1) / 2)."""
    return float(np.arccos(np.clip((np.trace(r) - 1.0) / 2.0, -1.0, 1.0)))


def rotation_vector(r: Matrix3) -> Vector3:
    """
    Axis-angle vector of r. At a half turn the axis sign is fixed so that the
    first nonzero of its (z, x, y) components is positive.
    """
    rotvec = Rotation.from_matrix(r).as_rotvec()
    angle = float(np.linalg.norm(rotvec))
    if angle < np.pi - PI_TOLERANCE:
        return rotvec
    for component in (2, 0, 1):
        if abs(rotvec[component]) > PI_TOLERANCE:
            return rotvec if rotvec[component] > 0 else -rotvec
    return rotvec


def euler_from_matrix(r: Matrix3) -> tuple[float, float, float]:
    """Return (yaw, pitch, roll) of r."""
    yaw, pitch, roll = Rotation.from_matrix(r).as_euler("ZYX")
    return float(yaw), float(pitch), float(roll)


def matrix_from_euler(yaw: float, pitch: float, roll: float) -> Matrix3:
    """Rotation matrix Rz(yaw) Ry(pitch) Rx(roll)."""
    return Rotation.from_euler("ZYX", [yaw, pitch, roll]).as_matrix()


def tilt_matrix(pitch: float, roll: float) -> Matrix3:
    """Zero-yaw attitude with the given pitch and roll."""
    return matrix_from_euler(0.0, pitch, roll)


def exp_map(rotvec: Vector3) -> Matrix3:
    """Matrix exponential of skew(rotvec)."""
    return Rotation.from_rotvec(rotvec).as_matrix()


def orthonormalize(r: Matrix3) -> Matrix3:
    """Closest rotation matrix to r in the Frobenius norm."""
    u, _, vt = np.linalg.svd(r)
    nearest = u @ vt
    if np.linalg.det(nearest) < 0:
        u[:, -1] = -u[:, -1]
        nearest = u @ vt
    return nearest


def is_rotation(r: Matrix3, tol: float = 1e-10) -> bool:
    """Check R R^T = I and det R = 1 within tol."""
    return bool(np.allclose(r @ r.T, np.eye(3), atol=tol) and abs(np.linalg.det(r) - 1.0) < tol)
