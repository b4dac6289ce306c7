"""Closed-loop reorientation on flat ground.

IMU -> complementary filter -> face identification -> state machine -> attitude loop with
zero total thrust -> mixer -> hinge dynamics. Dynamics run at dynamics_dt, everything
else at control_dt.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from control.attitude import attitude_loop
from control.estimator import ComplementaryFilter, accelerometer_tilt
from control.mixer import mixer, wrench
from geometry.icosahedron import TensegrityModel, build_icosahedron
from geometry.rotations import Matrix3, Vector3, euler_from_matrix, tilt_matrix
from reorient.graph import FaceGraph, face_graph_from_config
from reorient.identification import FaceIdentifier
from reorient.state_machine import Command, CommandKind, ReorientationStateMachine
from reorient.target import face_attitude
from sim.exceptions import SimulationTimeoutError
from sim.hinge import GroundModel
from sim.imu import ImuModel
from sim.state import VehicleState, resting_state
from utils.config import RunConfig
from utils.logging import get_logger, log_duration

logger = get_logger(__name__)

REORIENT_HEADER = (
    "t",
    "phase",
    "command",
    "identified_face",
    "commanded_face",
    "contact_face",
    "f1",
    "f2",
    "f3",
    "f4",
    "est_pitch",
    "est_roll",
)


@dataclass(frozen=True)
class Event:
    """Something worth a line in the event log."""

    t: float
    kind: str
    detail: str

    def to_text(self) -> str:
        """Single log line."""
        return f"t={self.t:8.3f}  {self.kind:<12} {self.detail}"


@dataclass
class ReorientationResult:
    """Outcome, trajectory rows and events of one reorientation run."""

    start_face: int
    goal_face: int
    final_face: int
    elapsed: float
    planned_faces: list[int]
    face_sequence: list[int]
    replans: int
    rows: list[list[Any]] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)

    @property
    def reached_goal(self) -> bool:
        """Whether the run ended resting on the goal face."""
        return self.final_face == self.goal_face

    @property
    def followed_plan(self) -> bool:
        """Whether the faces visited are exactly the first plan's faces."""
        return self.face_sequence == self.planned_faces

    def event_log(self) -> str:
        """Events as text, one per line."""
        return "".join(event.to_text() + "\n" for event in self.events)


def _initial_state(
    model: TensegrityModel, start_face: int | None, attitude: Matrix3 | None, yaw: float
) -> VehicleState:
    if attitude is None:
        if start_face is None:
            raise ValueError("either a start face or an initial attitude is needed")
        return resting_state(model, start_face, yaw)
    # the face whose inward normal points most nearly up
    face = int(np.argmax((attitude @ model.normals.T)[2])) + 1
    heading, _, _ = euler_from_matrix(attitude @ face_attitude(model, face))
    return resting_state(model, face, heading)


class _ClosedLoop:
    """Components of one run, stepped by run_reorientation."""

    def __init__(self, config: RunConfig, model: TensegrityModel, face_graph: FaceGraph):
        self.config = config
        self.params = config.vehicle
        self.identifier = FaceIdentifier(model)
        self.ground = GroundModel(model, self.params, face_graph.special_moves, config.simulation.restitution)
        self.imu = ImuModel(config.simulation)
        self.machine = ReorientationStateMachine(model, face_graph, config.reorientation, config.simulation)
        self.estimator = ComplementaryFilter(config.estimator, self.params.gravity)
        self.torque: Vector3 = np.zeros(3)
        self.thrusts: Vector3 = np.zeros(4)

    def initialize(self, state: VehicleState) -> None:
        """Start the estimate from the accelerometer tilt."""
        _, accel = self.imu.measure(*self.ground.sensed(state))
        pitch, roll = accelerometer_tilt(accel)
        self.estimator.reset(tilt_matrix(pitch, roll))

    def control(self, state: VehicleState, t: float, dt: float, result: ReorientationResult) -> Command:
        """One control period: sense, estimate, identify, decide, allocate and record."""
        gyro, accel = self.imu.measure(*self.ground.sensed(state))
        estimate = self.estimator.update(gyro, accel, dt)
        face = self.identifier.identify(estimate.pitch, estimate.roll)
        command = self.machine.step(estimate.attitude, face, gyro, t)

        self.torque, self.thrusts = np.zeros(3), np.zeros(4)
        if command.kind == CommandKind.ROTATE:
            assert command.desired is not None
            inertia = self.params.inertia_matrix
            wanted = attitude_loop(estimate.attitude, command.desired, gyro, self.config.controller, inertia)
            self.thrusts = mixer(wanted, 0.0, self.params).thrusts
            _, self.torque = wrench(self.thrusts, self.params)

        if command.kind == CommandKind.REPLAN and not result.planned_faces and self.machine.plan is not None:
            result.planned_faces = self.machine.plan.faces
        if command.kind in (CommandKind.CUT_THRUST, CommandKind.REPLAN, CommandKind.DONE):
            heading = f", heading F{command.commanded_face}" if command.move else ""
            result.events.append(Event(t, str(command.kind), f"identified F{face}{heading}"))
        result.rows.append(
            [
                round(t, 6),
                str(command.phase),
                str(command.kind),
                face,
                command.commanded_face or "",
                state.contact.face if state.contact else "",
                *self.thrusts,
                estimate.pitch,
                estimate.roll,
            ]
        )
        return command


def run_reorientation(
    config: RunConfig,
    start_face: int | None = None,
    attitude: Matrix3 | None = None,
    model: TensegrityModel | None = None,
    face_graph: FaceGraph | None = None,
) -> ReorientationResult:
    """
    Simulate the vehicle turning itself from its contact face onto the goal face.

    Args:
        config: Run configuration; simulation.seed seeds the IMU noise.
        start_face: Face the vehicle starts resting on.
        attitude: Alternatively an initial attitude; the vehicle rests on the face closest to it.
        model: Prebuilt tensegrity model.
        face_graph: Prebuilt rotation graph.

    Returns:
        ReorientationResult: Trajectory rows, events and the visited faces.

    Raises:
        SimulationTimeoutError: If the goal is not reached within simulation.timeout. The
            partial result is attached as .result.
    """
    simulation = config.simulation
    model = model or build_icosahedron(config.geometry.rod_length)
    face_graph = face_graph or face_graph_from_config(model, config.vehicle, config.reorientation)
    loop = _ClosedLoop(config, model, face_graph)

    state = _initial_state(model, start_face, attitude, simulation.initial_yaw)
    assert state.contact is not None
    first_face = state.contact.face
    loop.initialize(state)
    result = ReorientationResult(
        start_face=first_face,
        goal_face=face_graph.goal,
        final_face=first_face,
        elapsed=0.0,
        planned_faces=[],
        face_sequence=[first_face],
        replans=0,
    )
    ratio = max(1, round(simulation.control_dt / simulation.dynamics_dt))

    for step in range(int(round(simulation.timeout / simulation.dynamics_dt))):
        t = step * simulation.dynamics_dt
        if step % ratio == 0:
            command = loop.control(state, t, ratio * simulation.dynamics_dt, result)
            if command.kind == CommandKind.DONE:
                result.final_face, result.elapsed, result.replans = command.identified_face, t, loop.machine.replans
                result.planned_faces = result.planned_faces or [command.identified_face]
                logger.info(f"Reached face {result.final_face} from face {first_face} in {t:.2f} s")
                return result

        previous = state.contact.face if state.contact else None
        state = loop.ground.step_hinge(state, loop.torque, simulation.dynamics_dt)
        if state.contact and not state.contact.pivoting and state.contact.face != previous:
            result.face_sequence.append(state.contact.face)
            result.events.append(Event(t, "landed", f"on F{state.contact.face} from F{previous}"))

    result.final_face = state.contact.face if state.contact else first_face
    result.elapsed, result.replans = simulation.timeout, loop.machine.replans
    raise SimulationTimeoutError(
        f"goal face {face_graph.goal} not reached from face {first_face} in {simulation.timeout} s",
        result=result,
    )


@dataclass(frozen=True)
class TrialOutcome:
    """One Monte-Carlo trial."""

    seed: int
    start_face: int
    reached_goal: bool
    elapsed: float
    face_sequence: tuple[int, ...]


@dataclass(frozen=True)
class MonteCarloSummary:
    """All trials of a batch."""

    trials: tuple[TrialOutcome, ...]

    @property
    def success_count(self) -> int:
        """Trials that reached the goal face."""
        return sum(trial.reached_goal for trial in self.trials)


def trial_config(config: RunConfig, seed: int) -> tuple[RunConfig, int]:
    """Per-seed configuration with a random initial yaw, and a random start face."""
    rng = np.random.default_rng(seed)
    start_face = int(rng.integers(1, 21))
    simulation = config.simulation.model_copy(update={"seed": seed, "initial_yaw": float(rng.uniform(-np.pi, np.pi))})
    return config.model_copy(update={"simulation": simulation}), start_face


def _run_trial(config: RunConfig, seed: int) -> TrialOutcome:
    trial, start_face = trial_config(config, seed)
    try:
        result = run_reorientation(trial, start_face)
    except SimulationTimeoutError as e:
        logger.warning(f"Trial with seed {seed} from face {start_face} timed out")
        result = e.result
    return TrialOutcome(
        seed=seed,
        start_face=start_face,
        reached_goal=result.reached_goal,
        elapsed=result.elapsed,
        face_sequence=tuple(result.face_sequence),
    )


def run_monte_carlo(config: RunConfig, seeds: list[int], max_workers: int | None = None) -> MonteCarloSummary:
    """Independent seeded trials run in parallel processes and returned in seed order."""
    with log_duration(logger, f"Monte-Carlo batch of {len(seeds)} trials"):
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            trials = tuple(executor.map(_run_trial, [config] * len(seeds), seeds))
    summary = MonteCarloSummary(trials)
    logger.info(f"{summary.success_count}/{len(seeds)} trials reached the goal face")
    return summary
