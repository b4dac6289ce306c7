from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from geometry.rotations import E_Z, axis_angle_matrix
from reorient.target import Move, MoveKind
from sim.exceptions import ExcessiveTimestepError, GroundPenetrationError
from sim.feasibility import pivot_torque_requirement
from sim.hinge import PENETRATION_TOLERANCE, GroundModel, check_timestep
from sim.state import VehicleState, resting_state

DT = 1e-3
START_FACE = 20
# Past the balance angle [rad]
TIP_OVER = 0.01
NODE_PIVOT_TORQUE = 1.0


def pendulum_move() -> Move:
    """Hinge along body x, 10 cm above the centroid, far from any landing."""
    return Move(
        from_face=1,
        to_face=2,
        kind=MoveKind.EDGE,
        nodes=(0, 1),
        angle=3.0,
        axis=np.array([1.0, 0.0, 0.0]),
        pivot=np.array([0.0, 0.0, 0.1]),
        cost=3.0,
    )


def swinging_state(ground: GroundModel, phi: float) -> VehicleState:
    # Given: hanging at rest when phi = 1, pivot 10 cm above the floor
    move = pendulum_move()
    attitude = axis_angle_matrix(move.axis, -1.0)
    state = VehicleState(position=0.1 * E_Z - attitude @ move.pivot, attitude=attitude)
    state = ground.start_pivot(state, move)
    return state.with_contact(replace(state.contact, phi=phi))


@pytest.mark.parametrize("dt", [0.0, -1e-3, 0.02])
def test_check_timestep(dt):
    with pytest.raises(ExcessiveTimestepError):
        check_timestep(dt)


def test_energy_is_conserved_without_torque(model, params):
    # Given
    ground = GroundModel(model, params)
    state = ground.step_hinge(swinging_state(ground, 1.4), np.zeros(3), DT)
    initial = ground.energy(state)
    phis = []

    # When: one second of free swinging
    for _ in range(1000):
        state = ground.step_hinge(state, np.zeros(3), DT)
        phis.append(state.contact.phi)

    # Then
    assert state.contact.pivoting
    assert min(phis) == pytest.approx(0.6, abs=0.01)
    assert ground.energy(state) == pytest.approx(initial, rel=1e-3)


def test_inertia_about_hinge(model, params):
    ground = GroundModel(model, params)
    expected = params.inertia_matrix[0, 0] + params.mass * 0.1**2
    assert ground.inertia_about(pendulum_move()) == pytest.approx(expected)


def test_resting_vehicle_stays_put_without_torque(model, params):
    # Given
    ground = GroundModel(model, params)
    state = resting_state(model, START_FACE)

    # When
    result = ground.step_hinge(state, np.zeros(3), DT)

    # Then
    assert result is state


def test_gravity_holds_every_face(model, params):
    ground = GroundModel(model, params)
    for face in range(1, 21):
        state = resting_state(model, face)
        for move in ground.moves_from(face):
            assert ground.gravity_moment(move, state.attitude) < 0
            assert ground.gravity_moment(move, state.attitude) == pytest.approx(
                pivot_torque_requirement(model, params, move)
            )


def switch_time_oracle(ground: GroundModel, state: VehicleState, move: Move, drive: float) -> float:
    """Time to turn through the move's angle from energy balance, I phi'^2 / 2 = W(phi)."""
    inertia = ground.inertia_about(move)
    weight = ground.params.mass * ground.params.gravity
    base = state.attitude

    def height_gain(phi: float) -> float:
        return float((base @ move.pivot)[2] - (base @ axis_angle_matrix(move.axis, phi) @ move.pivot)[2])

    def slowness(phi: float) -> float:
        return 1.0 / np.sqrt(2.0 * (drive * phi - weight * height_gain(phi)) / inertia)

    time, _ = quad(slowness, 0.0, move.angle, limit=200)
    return time


def test_time_to_switch_matches_energy_balance(model, params):
    # Given: a constant torque twice the static gravity moment
    ground = GroundModel(model, params)
    state = resting_state(model, START_FACE)
    move = ground.moves_from(START_FACE)[0]
    drive = 2.0 * abs(pivot_torque_requirement(model, params, move))
    torque = drive * move.axis
    state = ground.start_pivot(state, move)

    # When
    steps = 0
    while state.contact.pivoting:
        state = ground.step_hinge(state, torque, DT)
        steps += 1

    # Then
    assert state.contact.face == move.to_face
    expected = switch_time_oracle(ground, resting_state(model, START_FACE), move, drive)
    assert steps * DT == pytest.approx(expected, rel=0.02)


def test_landing_rests_on_the_new_face(model, params):
    ground = GroundModel(model, params)
    move = ground.moves_from(START_FACE)[0]
    state = ground.start_pivot(resting_state(model, START_FACE), move)
    state = state.with_contact(replace(state.contact, phi=move.angle - 1e-4, phi_rate=1.0))

    # When
    landed = ground.step_hinge(state, np.zeros(3), DT)

    # Then: the new face lies flat
    assert not landed.contact.pivoting
    assert landed.contact.face == move.to_face
    np.testing.assert_allclose(landed.attitude @ model.normals[move.to_face - 1], E_Z, atol=1e-6)
    np.testing.assert_array_equal(landed.omega, 0.0)


def test_restitution_bounces(model, params):
    ground = GroundModel(model, params, restitution=0.5)
    move = ground.moves_from(START_FACE)[0]
    state = ground.start_pivot(resting_state(model, START_FACE), move)
    state = state.with_contact(replace(state.contact, phi=move.angle - 1e-4, phi_rate=1.0))

    # When
    bounced = ground.step_hinge(state, np.zeros(3), DT)

    # Then
    assert bounced.contact.pivoting
    assert bounced.contact.phi == move.angle
    assert bounced.contact.phi_rate < 0


def test_weak_push_falls_back(model, params):
    # Given: a small kick and no torque
    ground = GroundModel(model, params)
    move = ground.moves_from(START_FACE)[0]
    state = ground.start_pivot(resting_state(model, START_FACE), move)
    state = state.with_contact(replace(state.contact, phi_rate=0.3))

    # When
    for _ in range(2000):
        state = ground.step_hinge(state, np.zeros(3), DT)
        if not state.contact.pivoting:
            break

    # Then
    assert not state.contact.pivoting
    assert state.contact.face == START_FACE
    np.testing.assert_allclose(state.attitude, resting_state(model, START_FACE).attitude, atol=1e-9)


def test_sensed_at_rest(model, params):
    ground = GroundModel(model, params)
    state = resting_state(model, START_FACE, yaw=0.4)
    gyro, accel = ground.sensed(state)
    np.testing.assert_array_equal(gyro, 0.0)
    np.testing.assert_allclose(accel, params.gravity * state.attitude.T @ E_Z)
    np.testing.assert_allclose(accel / params.gravity, model.normals[START_FACE - 1], atol=1e-10)


def test_sensed_while_pivoting(model, params):
    ground = GroundModel(model, params)
    state = ground.step_hinge(swinging_state(ground, 1.0), np.zeros(3), DT)
    state = ground.step_hinge(state.with_contact(replace(state.contact, phi_rate=2.0)), np.zeros(3), DT)
    gyro, _ = ground.sensed(state)
    np.testing.assert_allclose(gyro, state.contact.phi_rate * pendulum_move().axis)


def test_ground_model_needs_contact(model, params):
    with pytest.raises(ValueError):
        GroundModel(model, params).step_hinge(VehicleState(), np.zeros(3), DT)


def balance_angle(ground: GroundModel, state: VehicleState, move: Move) -> float:
    """Pivot angle at which the centroid passes over the hinge."""
    return brentq(
        lambda phi: ground.gravity_moment(move, state.attitude @ axis_angle_matrix(move.axis, phi)),
        0.0,
        move.angle,
    )


def test_tilt_past_balance_falls_onto_the_next_face(model, params):
    # Given: no torque, tilted just past the balance angle
    ground = GroundModel(model, params)
    resting = resting_state(model, START_FACE)
    move = ground.moves_from(START_FACE)[0]
    tilt = balance_angle(ground, resting, move) + TIP_OVER
    state = ground.start_pivot(resting, move)
    state = state.with_contact(replace(state.contact, phi=tilt))

    # When
    for _ in range(5000):
        state = ground.step_hinge(state, np.zeros(3), DT)
        if not state.contact.pivoting:
            break

    # Then
    assert state.contact.face == move.to_face
    np.testing.assert_allclose(state.attitude @ model.normals[move.to_face - 1], E_Z, atol=1e-6)


def test_node_pivot_keeps_every_node_above_ground(model, params, face_graph):
    # Given
    move = face_graph.special_moves[0]
    ground = GroundModel(model, params, face_graph.special_moves)
    state = ground.start_pivot(resting_state(model, move.from_face), move)
    depths = []

    # When
    while state.contact.pivoting:
        state = ground.step_hinge(state, NODE_PIVOT_TORQUE * move.axis, DT)
        depths.append(ground.penetration(state))

    # Then
    assert state.contact.face == move.to_face
    assert max(depths) <= PENETRATION_TOLERANCE


def test_node_pivot_the_wrong_way_is_stopped(model, params, face_graph):
    # Given: the node pivot turned about the reversed axis
    move = face_graph.special_moves[0]
    reversed_move = replace(move, axis=-move.axis)
    ground = GroundModel(model, params)
    state = ground.start_pivot(resting_state(model, move.from_face), reversed_move)

    # When / Then
    with pytest.raises(GroundPenetrationError):
        ground.step_hinge(state, NODE_PIVOT_TORQUE * reversed_move.axis, DT)
