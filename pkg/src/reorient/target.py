"""Face attitudes, pivot moves between contact faces and the target attitude of a move."""

from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

        def __format__(self, format_spec: str) -> str:
            return str(self.value).__format__(format_spec)

import numpy as np

from geometry.icosahedron import (
    EDGE_NODES,
    TensegrityModel,
    face_inward_normal,
    face_nodes,
    pivot_angle,
)
from geometry.rotations import E_Z, Matrix3, Vector3, axis_angle_matrix, rotation_z_to
from reorient.exceptions import NotAdjacentError


class MoveKind(StrEnum):
    """Pivot about a shared edge or about a single shared node."""

    EDGE = "edge"
    NODE = "node"


@dataclass(frozen=True)
class Move:
    """
    Rotation that carries the vehicle from one contact face onto another.

    Rotating the body by +angle about axis (body frame, through pivot) maps the inward
    normal of to_face onto that of from_face, i.e. lays to_face on the ground.
    """

    from_face: int
    to_face: int
    kind: MoveKind
    nodes: tuple[int, ...]
    angle: float
    axis: Vector3
    pivot: Vector3
    cost: float

    def describe(self) -> str:
        """Short text form, e.g. 'edge 3-7'."""
        return f"{self.kind} {'-'.join(str(node) for node in self.nodes)}"


def face_attitude(model: TensegrityModel, face_index: int) -> Matrix3:
    """R_i: the rotation carrying the body z axis onto the inward normal of the face."""
    return rotation_z_to(face_inward_normal(model, face_index))


def resting_attitude(model: TensegrityModel, face_index: int) -> Matrix3:
    """Attitude (body to Earth) of a vehicle lying on the face, R_i^T."""
    return face_attitude(model, face_index).T


def _oriented_axis(axis: Vector3, angle: float, v_from: Vector3, v_to: Vector3) -> Vector3:
    axis = axis / np.linalg.norm(axis)
    forward = axis_angle_matrix(axis, angle) @ v_to
    backward = axis_angle_matrix(-axis, angle) @ v_to
    return axis if forward @ v_from >= backward @ v_from else -axis


def shared_nodes(model: TensegrityModel, face_a: int, face_b: int) -> list[int]:
    """Nodes common to two faces, ascending."""
    return sorted(set(face_nodes(model, face_a)) & set(face_nodes(model, face_b)))


def edge_move(model: TensegrityModel, from_face: int, to_face: int) -> Move:
    """
    Pivot about the edge shared by two faces.

    Raises:
        NotAdjacentError: If the faces do not share an edge.
    """
    common = shared_nodes(model, from_face, to_face)
    if from_face == to_face or len(common) != EDGE_NODES:
        raise NotAdjacentError(f"faces {from_face} and {to_face} do not share an edge")
    j, k = common
    angle = pivot_angle(model, from_face, to_face, j, k)
    v_from, v_to = face_inward_normal(model, from_face), face_inward_normal(model, to_face)
    return Move(
        from_face=from_face,
        to_face=to_face,
        kind=MoveKind.EDGE,
        nodes=(j, k),
        angle=angle,
        axis=_oriented_axis(model.nodes[j] - model.nodes[k], angle, v_from, v_to),
        pivot=model.nodes[j].copy(),
        cost=angle,
    )


def node_move(model: TensegrityModel, from_face: int, to_face: int, cost_factor: float = 1.0) -> Move:
    """
    Pivot about the single node shared by two faces.

    The axis is normal to both inward normals; its cost is the angle times cost_factor.

    Raises:
        NotAdjacentError: If the faces do not share exactly one node.
    """
    common = shared_nodes(model, from_face, to_face)
    if len(common) != 1:
        raise NotAdjacentError(f"faces {from_face} and {to_face} do not share exactly one node")
    node = common[0]
    v_from, v_to = face_inward_normal(model, from_face), face_inward_normal(model, to_face)
    angle = float(np.arccos(np.clip(v_from @ v_to, -1.0, 1.0)))
    return Move(
        from_face=from_face,
        to_face=to_face,
        kind=MoveKind.NODE,
        nodes=(node,),
        angle=angle,
        axis=_oriented_axis(np.cross(v_to, v_from), angle, v_from, v_to),
        pivot=model.nodes[node].copy(),
        cost=angle * cost_factor,
    )


def move_target_attitude(model: TensegrityModel, attitude: Matrix3, move: Move) -> Matrix3:
    """
    Desired attitude after the move, R_d = Rot(e, angle) R_hat with e the pivot axis in the Earth frame.

    The sign of e is the one that brings the inward normal of the new face closest to
    Earth +z.
    """
    earth_axis = attitude @ move.axis
    v_to = face_inward_normal(model, move.to_face)
    candidates = [axis_angle_matrix(sign * earth_axis, move.angle) @ attitude for sign in (1.0, -1.0)]
    return max(candidates, key=lambda candidate: float(E_Z @ candidate @ v_to))


def target_attitude(model: TensegrityModel, attitude: Matrix3, from_face: int, to_face: int) -> Matrix3:
    """
    Desired attitude for the edge pivot from one face onto an adjacent one.

    Raises:
        NotAdjacentError: If the faces are equal or do not share an edge.
    """
    return move_target_attitude(model, attitude, edge_move(model, from_face, to_face))
