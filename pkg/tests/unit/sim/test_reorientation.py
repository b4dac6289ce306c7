import numpy as np
import pytest

from geometry.rotations import matrix_from_euler
from reorient.planner import plan_path
from reorient.target import resting_attitude
from sim.exceptions import SimulationTimeoutError
from sim.reorientation import REORIENT_HEADER, Event, ReorientationResult, run_reorientation, trial_config
from utils.config import RunConfig, SimulationConfig

GOAL = 1
SEED = 11


def one_move_start(face_graph) -> int:
    return next(face for face in range(2, 21) if len(plan_path(face_graph, face).moves) == 1)


def test_starting_on_goal_is_done(model, face_graph, run_config):
    result = run_reorientation(run_config, GOAL, model=model, face_graph=face_graph)

    assert result.reached_goal
    assert result.elapsed == 0
    assert result.face_sequence == [GOAL]
    assert result.planned_faces == [GOAL]
    assert result.followed_plan


def test_single_pivot_reaches_goal(model, face_graph, run_config):
    # Given
    start = one_move_start(face_graph)

    # When
    result = run_reorientation(run_config, start, model=model, face_graph=face_graph)

    # Then
    assert result.reached_goal
    assert result.followed_plan
    assert result.face_sequence == [start, GOAL]
    assert result.replans == 1
    assert 0 < result.elapsed < run_config.simulation.timeout
    assert any(event.kind == "landed" for event in result.events)
    assert all(len(row) == len(REORIENT_HEADER) for row in result.rows)


def test_start_from_attitude(model, face_graph, run_config):
    # Given: resting on a face, slightly tilted and turned
    start = one_move_start(face_graph)
    attitude = matrix_from_euler(0.7, 0.05, -0.03) @ resting_attitude(model, start)

    # When
    result = run_reorientation(run_config, attitude=attitude, model=model, face_graph=face_graph)

    # Then
    assert result.start_face == start
    assert result.reached_goal


def test_no_start_given(model, face_graph, run_config):
    with pytest.raises(ValueError):
        run_reorientation(run_config, model=model, face_graph=face_graph)


def test_timeout_carries_partial_result(model, face_graph):
    # Given
    config = RunConfig(simulation=SimulationConfig(timeout=0.05))
    start = max(range(1, 21), key=lambda face: len(plan_path(face_graph, face).moves))

    # When
    with pytest.raises(SimulationTimeoutError) as error:
        run_reorientation(config, start, model=model, face_graph=face_graph)

    # Then
    result = error.value.result
    assert not result.reached_goal
    assert result.elapsed == config.simulation.timeout
    assert result.face_sequence[0] == start


def test_result_helpers():
    result = ReorientationResult(
        start_face=4,
        goal_face=GOAL,
        final_face=GOAL,
        elapsed=1.5,
        planned_faces=[4, 2, GOAL],
        face_sequence=[4, 3, GOAL],
        replans=2,
        events=[Event(0.0, "replan", "identified F4"), Event(1.5, "done", "identified F1")],
    )

    assert result.reached_goal
    assert not result.followed_plan
    log = result.event_log().splitlines()
    assert log[0].split() == ["t=", "0.000", "replan", "identified", "F4"]
    assert log[1].endswith("identified F1")


def test_trial_config_is_deterministic(run_config):
    first, start = trial_config(run_config, SEED)
    again, start_again = trial_config(run_config, SEED)
    other, _ = trial_config(run_config, 12)

    assert start == start_again
    assert start in range(1, 21)
    assert first == again
    assert first.simulation.seed == SEED
    assert -np.pi <= first.simulation.initial_yaw <= np.pi
    assert other.simulation.initial_yaw != first.simulation.initial_yaw
