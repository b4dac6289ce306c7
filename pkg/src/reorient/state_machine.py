"""Step-by-step reorientation: identify, rotate, cut thrust, settle, and replan when needed."""

from dataclasses import dataclass, replace
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

from geometry.icosahedron import TensegrityModel
from geometry.rotations import Matrix3, Vector3
from reorient.graph import FaceGraph
from reorient.planner import ReorientationPlan, plan_path
from reorient.target import Move, move_target_attitude
from utils.config import ReorientationConfig, SimulationConfig
from utils.logging import get_logger

logger = get_logger(__name__)


class Phase(StrEnum):
    """State machine phase."""

    IDENTIFY = "identify"
    ROTATE = "rotate"
    SETTLE = "settle"
    DONE = "done"


class CommandKind(StrEnum):
    """What the controller should do during the next control period."""

    ROTATE = "rotate"
    CUT_THRUST = "cut_thrust"
    REPLAN = "replan"
    HOLD = "hold"
    DONE = "done"


@dataclass(frozen=True)
class Command:
    """
    Output of one state machine step.

    Only ROTATE carries a desired attitude; every other kind means zero propeller thrust.
    """

    kind: CommandKind
    phase: Phase
    identified_face: int
    move: Move | None = None
    desired: Matrix3 | None = None

    @property
    def commanded_face(self) -> int | None:
        """Face the current move is heading for."""
        return self.move.to_face if self.move else None


class ReorientationStateMachine:
    """
    Drives the vehicle from its contact face to the goal face one pivot at a time.

    A face switch is declared after the identified face differs from the start face of the
    current move for debounce_steps consecutive steps. The plan is recomputed from the
    identified face whenever the vehicle is not where the plan expects it.
    """

    def __init__(
        self,
        model: TensegrityModel,
        face_graph: FaceGraph,
        config: ReorientationConfig,
        simulation: SimulationConfig,
    ):
        self.model = model
        self.face_graph = face_graph
        self.config = config
        self.simulation = simulation
        self.phase = Phase.IDENTIFY
        self.plan: ReorientationPlan | None = None
        self.replans = 0
        self._move: Move | None = None
        self._desired: Matrix3 | None = None
        self._phase_start = 0.0
        self._candidate: int | None = None
        self._candidate_count = 0

    @property
    def current_move(self) -> Move | None:
        """Move being executed or settled."""
        return self._move

    def step(self, attitude: Matrix3, face: int, gyro_rate: Vector3, t: float) -> Command:
        """
        Advance by one control period.

        Args:
            attitude: Estimated attitude.
            face: Identified contact face.
            gyro_rate: Measured body rate [rad/s].
            t: Time [s].

        Returns:
            Command: What to do until the next step.
        """
        if self.phase == Phase.IDENTIFY:
            return self._identify(attitude, face, t)
        if self.phase == Phase.ROTATE:
            return self._rotate(face, t)
        if self.phase == Phase.SETTLE:
            return self._settle(face, gyro_rate, t)
        return Command(CommandKind.DONE, self.phase, face)

    def _identify(self, attitude: Matrix3, face: int, t: float) -> Command:
        if face == self.face_graph.goal:
            self.phase = Phase.DONE
            logger.info(f"Resting on goal face {face} at t={t:.3f} s")
            return Command(CommandKind.DONE, self.phase, face)

        if self.plan is None or not self.plan.moves or self.plan.moves[0].from_face != face:
            self.plan = plan_path(self.face_graph, face)
            self.replans += 1
            logger.info(f"Planned from face {face}: {self.plan.faces}")
            return Command(CommandKind.REPLAN, self.phase, face)

        self._move = self.plan.moves[0]
        self._desired = move_target_attitude(self.model, attitude, self._move)
        self._start_phase(Phase.ROTATE, t)
        return Command(CommandKind.ROTATE, self.phase, face, self._move, self._desired)

    def _rotate(self, face: int, t: float) -> Command:
        move = self._move
        assert move is not None
        if face != move.from_face and face == self._candidate:
            self._candidate_count += 1
        elif face != move.from_face:
            self._candidate, self._candidate_count = face, 1
        else:
            self._candidate, self._candidate_count = None, 0

        if self._candidate_count >= self.config.debounce_steps:
            logger.info(f"Face switch {move.from_face} -> {face} detected at t={t:.3f} s, cutting thrust")
            self._start_phase(Phase.SETTLE, t)
            return Command(CommandKind.CUT_THRUST, self.phase, face, move)
        if t - self._phase_start > self.simulation.rotate_timeout:
            logger.warning(f"Move {move.from_face} -> {move.to_face} timed out at t={t:.3f} s, cutting thrust")
            self._start_phase(Phase.SETTLE, t)
            return Command(CommandKind.CUT_THRUST, self.phase, face, move)
        return Command(CommandKind.ROTATE, self.phase, face, move, self._desired)

    def _settle(self, face: int, gyro_rate: Vector3, t: float) -> Command:
        move = self._move
        assert move is not None
        settled = t - self._phase_start >= self.simulation.settle_time
        if not settled or float(np.linalg.norm(gyro_rate)) >= self.simulation.quiet_rate:
            return Command(CommandKind.HOLD, self.phase, face, move)

        if self.plan is not None and face == move.to_face:
            self.plan = replace(self.plan, start=face, moves=self.plan.moves[1:])
        elif face != move.from_face:
            logger.warning(f"Landed on face {face} instead of {move.to_face}, replanning")
        self._move = None
        self._desired = None
        self._start_phase(Phase.IDENTIFY, t)
        return Command(CommandKind.HOLD, self.phase, face)

    def _start_phase(self, phase: Phase, t: float) -> None:
        self.phase = phase
        self._phase_start = t
        self._candidate, self._candidate_count = None, 0
