"""Ground model: the vehicle rests on a face or pivots about an edge or node of it.

While pivoting the vehicle is a rigid body on a perfect hinge. The pivot angle phi obeys

    I phi'' = e . tau + f e . (z x p) + m g e . (p x R^T z)

with e the body-frame hinge axis, p the pivot point relative to the centroid, f the total
thrust and I the moment of inertia about the hinge. The gravity term vanishes when the
centroid passes over the hinge, which is the face-switch attitude.
"""

from collections.abc import Sequence
from functools import cache

import numpy as np

from geometry.icosahedron import EDGE_NODES, FACE_COUNT, TensegrityModel
from geometry.rotations import E_Z, Matrix3, Vector3, axis_angle_matrix, orthonormalize
from reorient.target import Move, MoveKind, edge_move, shared_nodes
from sim.exceptions import ExcessiveTimestepError, GroundPenetrationError
from sim.state import ContactState, VehicleState
from utils.config import VehicleParams
from utils.logging import get_logger

logger = get_logger(__name__)

MAX_TIMESTEP = 0.01
# Below this rebound rate [rad/s] a bouncing landing comes to rest.
LANDING_RATE = 1e-3
# Depth [m] a node may reach below the pivot node while pivoting about it.
PENETRATION_TOLERANCE = 1e-9


def check_timestep(dt: float) -> None:
    """
    Raises:
        ExcessiveTimestepError: If dt is not in (0, MAX_TIMESTEP].
    """
    if not 0 < dt <= MAX_TIMESTEP:
        raise ExcessiveTimestepError(f"dt must be in (0, {MAX_TIMESTEP}] s, got {dt}")


class GroundModel:
    """Hinge dynamics about the contact edges and nodes of the current face."""

    def __init__(
        self,
        model: TensegrityModel,
        params: VehicleParams,
        special_moves: Sequence[Move] = (),
        restitution: float = 0.0,
    ):
        self.model = model
        self.params = params
        self.special_moves = tuple(special_moves)
        self.restitution = restitution
        self._inertia = params.inertia_matrix
        self.moves_from = cache(self._moves_from)

    def _moves_from(self, face: int) -> tuple[Move, ...]:
        edges = [
            edge_move(self.model, face, other)
            for other in range(1, FACE_COUNT + 1)
            if other != face and len(shared_nodes(self.model, face, other)) == EDGE_NODES
        ]
        return tuple(edges) + tuple(move for move in self.special_moves if move.from_face == face)

    def inertia_about(self, move: Move) -> float:
        """Moment of inertia about the hinge [kg m^2] by the parallel axis theorem."""
        e = move.axis
        offset = move.pivot - (move.pivot @ e) * e
        return float(e @ self._inertia @ e + self.params.mass * offset @ offset)

    def gravity_moment(self, move: Move, attitude: Matrix3) -> float:
        """Moment of gravity about the hinge [N m], positive towards the move's target face."""
        up = attitude.T @ E_Z
        return float(self.params.mass * self.params.gravity * move.axis @ np.cross(move.pivot, up))

    def drive_moment(self, move: Move, torque: Vector3, thrust: float = 0.0) -> float:
        """Moment of the propeller torque and total thrust about the hinge [N m]."""
        thrust_moment = thrust * np.cross(E_Z, move.pivot)
        return float(move.axis @ (np.asarray(torque, dtype=float) + thrust_moment))

    def start_pivot(self, state: VehicleState, move: Move) -> VehicleState:
        """Begin pivoting from rest about the move's edge or node."""
        contact = ContactState(
            face=move.from_face,
            move=move,
            base=state.attitude.copy(),
            pivot_earth=state.position + state.attitude @ move.pivot,
        )
        return state.with_contact(contact)

    def _attitude(self, contact: ContactState, phi: float) -> Matrix3:
        assert contact.move is not None and contact.base is not None
        return contact.base @ axis_angle_matrix(contact.move.axis, phi)

    def _angular_acceleration(self, contact: ContactState, phi: float, drive: float) -> float:
        assert contact.move is not None
        moment = drive + self.gravity_moment(contact.move, self._attitude(contact, phi))
        return moment / self.inertia_about(contact.move)

    def _select_pivot(self, state: VehicleState, torque: Vector3, thrust: float) -> Move | None:
        assert state.contact is not None
        best, best_moment = None, 0.0
        for move in self.moves_from(state.contact.face):
            moment = self.drive_moment(move, torque, thrust) + self.gravity_moment(move, state.attitude)
            if moment > best_moment:
                best, best_moment = move, moment
        return best

    def step_hinge(self, state: VehicleState, torque: Vector3, dt: float, thrust: float = 0.0) -> VehicleState:
        """
        Advance the ground dynamics by dt with a velocity-Verlet step.

        A resting vehicle starts pivoting about the edge or node with the largest positive
        net moment. Reaching the move's angle lands the vehicle on the target face; dropping
        back to zero returns it to the start face.

        Raises:
            ExcessiveTimestepError: If dt is not in (0, 0.01] s.
            GroundPenetrationError: If a node pivot would take a node below the ground.
        """
        check_timestep(dt)
        if state.contact is None:
            raise ValueError("the ground model needs a state in contact with the ground")
        if not state.contact.pivoting:
            move = self._select_pivot(state, torque, thrust)
            if move is None:
                return state
            state = self.start_pivot(state, move)

        contact = state.contact
        assert contact is not None and contact.move is not None
        move = contact.move
        drive = self.drive_moment(move, torque, thrust)
        acceleration = self._angular_acceleration(contact, contact.phi, drive)
        phi = contact.phi + contact.phi_rate * dt + 0.5 * acceleration * dt**2
        next_acceleration = self._angular_acceleration(contact, phi, drive)
        phi_rate = contact.phi_rate + 0.5 * (acceleration + next_acceleration) * dt

        if phi >= move.angle:
            return self._reach_target(state, phi_rate)
        if phi <= 0.0:
            return self._rest(state, move.from_face, self._attitude(contact, 0.0))
        return self._pivot_state(state, phi, phi_rate, next_acceleration)

    def _pivot_state(self, state: VehicleState, phi: float, phi_rate: float, acceleration: float) -> VehicleState:
        contact = state.contact
        assert contact is not None and contact.move is not None and contact.pivot_earth is not None
        attitude = self._attitude(contact, phi)
        position = contact.pivot_earth - attitude @ contact.move.pivot
        omega = contact.move.axis * phi_rate
        pivoted = state.with_contact(
            ContactState(
                face=contact.face,
                move=contact.move,
                phi=phi,
                phi_rate=phi_rate,
                phi_acceleration=acceleration,
                base=contact.base,
                pivot_earth=contact.pivot_earth,
            ),
            attitude=attitude,
            position=position,
            velocity=attitude @ np.cross(omega, -contact.move.pivot),
            omega=omega,
        )
        depth = self.penetration(pivoted)
        if contact.move.kind == MoveKind.NODE and depth > PENETRATION_TOLERANCE:
            raise GroundPenetrationError(
                f"pivot {contact.move.describe()} from face {contact.move.from_face} takes a node "
                f"{depth:.2e} m below the ground"
            )
        return pivoted

    def penetration(self, state: VehicleState) -> float:
        """Depth [m] of the lowest node below the pivot point; zero without a pivot."""
        contact = state.contact
        if contact is None or contact.pivot_earth is None:
            return 0.0
        lowest = np.min(state.position[2] + (self.model.nodes @ state.attitude.T)[:, 2])
        return float(contact.pivot_earth[2] - lowest)

    def _reach_target(self, state: VehicleState, phi_rate: float) -> VehicleState:
        contact = state.contact
        assert contact is not None and contact.move is not None
        move = contact.move
        rebound = self.restitution * phi_rate
        if rebound > LANDING_RATE:
            return self._pivot_state(state, move.angle, -rebound, 0.0)
        logger.debug(f"Landed on face {move.to_face} from face {move.from_face}")
        return self._rest(state, move.to_face, orthonormalize(self._attitude(contact, move.angle)))

    def _rest(self, state: VehicleState, face: int, attitude: Matrix3) -> VehicleState:
        contact = state.contact
        assert contact is not None and contact.move is not None and contact.pivot_earth is not None
        return state.with_contact(
            ContactState(face=face),
            attitude=attitude,
            position=contact.pivot_earth - attitude @ contact.move.pivot,
            velocity=np.zeros(3),
            omega=np.zeros(3),
        )

    def sensed(self, state: VehicleState) -> tuple[Vector3, Vector3]:
        """True body rate [rad/s] and specific force [m/s^2] at the centroid."""
        up = self.params.gravity * state.attitude.T @ E_Z
        contact = state.contact
        if contact is None or contact.move is None:
            return np.zeros(3), up
        e, p = contact.move.axis, contact.move.pivot
        omega = e * contact.phi_rate
        alpha = e * contact.phi_acceleration
        return omega, up - (np.cross(omega, np.cross(omega, p)) + np.cross(alpha, p))

    def energy(self, state: VehicleState) -> float:
        """Kinetic plus potential energy [J] of a pivoting or resting vehicle."""
        potential = self.params.mass * self.params.gravity * float(state.position[2])
        contact = state.contact
        if contact is None or contact.move is None:
            return potential
        return 0.5 * self.inertia_about(contact.move) * contact.phi_rate**2 + potential
