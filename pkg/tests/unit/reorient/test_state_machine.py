import numpy as np
import pytest

from reorient.state_machine import CommandKind, Phase, ReorientationStateMachine
from reorient.target import move_target_attitude, resting_attitude
from utils.config import ReorientationConfig, SimulationConfig

START_FACE = 20
DT = 0.002
QUIET = np.zeros(3)
EXPECTED_REPLANS = 2


@pytest.fixture
def machine(model, face_graph):
    return ReorientationStateMachine(model, face_graph, ReorientationConfig(), SimulationConfig())


def identify_and_rotate(model, machine, face=START_FACE):
    attitude = resting_attitude(model, face)
    replan = machine.step(attitude, face, QUIET, 0.0)
    rotate = machine.step(attitude, face, QUIET, DT)
    return replan, rotate


def test_done_on_the_goal_face(model, machine):
    command = machine.step(resting_attitude(model, 1), 1, QUIET, 0.0)
    assert command.kind == CommandKind.DONE
    assert machine.phase == Phase.DONE
    assert machine.plan is None
    # stays done
    assert machine.step(resting_attitude(model, 1), 1, QUIET, DT).kind == CommandKind.DONE


def test_plans_then_rotates(model, machine):
    # When
    replan, rotate = identify_and_rotate(model, machine)

    # Then
    assert replan.kind == CommandKind.REPLAN
    assert machine.replans == 1
    assert machine.plan is not None and machine.plan.start == START_FACE
    assert rotate.kind == CommandKind.ROTATE
    assert machine.phase == Phase.ROTATE
    move = machine.plan.moves[0]
    assert rotate.move == move
    assert rotate.commanded_face == move.to_face
    np.testing.assert_allclose(rotate.desired, move_target_attitude(model, resting_attitude(model, START_FACE), move))


def test_face_switch_is_debounced(model, machine):
    # Given
    identify_and_rotate(model, machine)
    move = machine.current_move
    debounce = ReorientationConfig().debounce_steps

    # When: the new face is seen for one step less than the debounce count
    t = 2 * DT
    for _ in range(debounce - 1):
        assert machine.step(np.eye(3), move.to_face, QUIET, t).kind == CommandKind.ROTATE
        t += DT
    command = machine.step(np.eye(3), move.to_face, QUIET, t)

    # Then
    assert command.kind == CommandKind.CUT_THRUST
    assert machine.phase == Phase.SETTLE


def test_flicker_restarts_the_debounce(model, machine):
    # Given
    identify_and_rotate(model, machine)
    move = machine.current_move
    debounce = ReorientationConfig().debounce_steps

    # When: the identified face drops back to the start face midway
    t = 2 * DT
    faces = [move.to_face] * (debounce - 1) + [move.from_face] + [move.to_face] * (debounce - 1)
    kinds = []
    for face in faces:
        kinds.append(machine.step(np.eye(3), face, QUIET, t).kind)
        t += DT

    # Then
    assert set(kinds) == {CommandKind.ROTATE}


def test_rotate_timeout_cuts_thrust(model, machine):
    identify_and_rotate(model, machine)
    timeout = SimulationConfig().rotate_timeout
    command = machine.step(np.eye(3), START_FACE, QUIET, DT + timeout + DT)
    assert command.kind == CommandKind.CUT_THRUST
    assert machine.phase == Phase.SETTLE


def detect_switch(machine, face, t):
    """See the new face long enough to declare the switch at t."""
    for _ in range(ReorientationConfig().debounce_steps):
        machine.step(np.eye(3), face, QUIET, t)
    return t


def test_settle_waits_for_time_and_quiet_gyro(model, machine):
    # Given: the switch was detected at t
    identify_and_rotate(model, machine)
    move = machine.current_move
    t = detect_switch(machine, move.to_face, 0.1)
    settle_time = SimulationConfig().settle_time

    # Then: too early
    assert machine.step(np.eye(3), move.to_face, QUIET, t + settle_time / 2).kind == CommandKind.HOLD
    assert machine.phase == Phase.SETTLE
    # Then: still rocking
    assert machine.step(np.eye(3), move.to_face, np.array([0.0, 0.5, 0.0]), t + settle_time).kind == CommandKind.HOLD
    assert machine.phase == Phase.SETTLE
    # Then: quiet, the move is done
    command = machine.step(np.eye(3), move.to_face, QUIET, t + settle_time)
    assert command.kind == CommandKind.HOLD
    assert machine.phase == Phase.IDENTIFY
    assert machine.plan.start == move.to_face
    assert machine.current_move is None


def test_next_move_follows_without_replanning(model, machine):
    # Given
    identify_and_rotate(model, machine)
    move = machine.current_move
    t = detect_switch(machine, move.to_face, 0.1) + SimulationConfig().settle_time
    machine.step(np.eye(3), move.to_face, QUIET, t)

    # When
    command = machine.step(resting_attitude(model, move.to_face), move.to_face, QUIET, t + DT)

    # Then
    expected = CommandKind.DONE if move.to_face == 1 else CommandKind.ROTATE
    assert command.kind == expected
    assert machine.replans == 1


def test_unexpected_landing_replans(model, machine, face_graph):
    # Given
    identify_and_rotate(model, machine)
    move = machine.current_move
    surprise = next(
        face for face in range(2, 21) if face not in (move.from_face, move.to_face, face_graph.goal)
    )
    t = detect_switch(machine, surprise, 0.1)
    machine.step(np.eye(3), surprise, QUIET, t + SimulationConfig().settle_time)

    # When
    command = machine.step(resting_attitude(model, surprise), surprise, QUIET, t + 1.0)

    # Then
    assert command.kind == CommandKind.REPLAN
    assert machine.replans == EXPECTED_REPLANS
    assert machine.plan.start == surprise
