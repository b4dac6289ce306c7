"""A* search for the cheapest sequence of pivots to the goal face."""

import heapq
import math
from dataclasses import dataclass

from reorient.exceptions import NoPathError
from reorient.graph import FaceGraph
from reorient.target import Move
from utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ReorientationPlan:
    """Ordered moves from the start face to the goal face."""

    start: int
    goal: int
    moves: tuple[Move, ...]

    @property
    def cost(self) -> float:
        """Total rotation cost [rad]."""
        return sum(move.cost for move in self.moves)

    @property
    def faces(self) -> list[int]:
        """Visited faces, start and goal included."""
        return [self.start] + [move.to_face for move in self.moves]

    def to_text(self) -> str:
        """One line per move: step, from, to, pivot and angle in degrees."""
        lines = [f"plan {self.start} -> {self.goal}, {len(self.moves)} moves, cost {self.cost:.6f} rad"]
        for step, move in enumerate(self.moves, start=1):
            lines.append(
                f"{step:>3}  F{move.from_face:<2} -> F{move.to_face:<2}  {move.describe():<12}"
                f"  {math.degrees(move.angle):8.3f} deg  cost {move.cost:.6f}"
            )
        return "\n".join(lines) + "\n"


def heuristic(face_graph: FaceGraph) -> dict[int, float]:
    """Admissible estimate of the remaining cost: cheapest move times fewest remaining moves."""
    w_min = face_graph.min_weight
    return {face: w_min * hops for face, hops in face_graph.hop_distances().items()}


def plan_path(face_graph: FaceGraph, start: int) -> ReorientationPlan:
    """
    Cheapest path from start to the goal face.

    Queue entries are (f, g, faces) so that equal-cost paths are ordered by their face
    sequence.

    Raises:
        NoPathError: If the goal cannot be reached from start.
    """
    goal = face_graph.goal
    estimate = heuristic(face_graph)
    if start not in estimate:
        raise NoPathError(f"face {start} cannot reach face {goal}")

    queue: list[tuple[float, float, tuple[int, ...]]] = [(estimate[start], 0.0, (start,))]
    explored: set[int] = set()
    while queue:
        _, cost, path = heapq.heappop(queue)
        face = path[-1]
        if face == goal:
            moves = tuple(face_graph.move(a, b) for a, b in zip(path, path[1:], strict=False))
            plan = ReorientationPlan(start=start, goal=goal, moves=moves)
            logger.debug(f"Plan from face {start}: {plan.faces}, cost {plan.cost:.4f}")
            return plan
        if face in explored:
            continue
        explored.add(face)
        for move in face_graph.moves_from(face):
            if move.to_face in explored or move.to_face not in estimate:
                continue
            g = cost + move.cost
            heapq.heappush(queue, (g + estimate[move.to_face], g, (*path, move.to_face)))
    raise NoPathError(f"face {start} cannot reach face {goal}")


def plan_all(face_graph: FaceGraph) -> dict[int, ReorientationPlan]:
    """Plans from every face."""
    return {face: plan_path(face_graph, face) for face in sorted(face_graph.graph.nodes)}
