"""Directed rotation graph over the 20 contact faces."""

import math
from collections.abc import Iterable
from itertools import product
from pathlib import Path

import networkx as nx

from geometry.icosahedron import FACE_COUNT, TensegrityModel, face_adjacency
from reorient.exceptions import DisconnectedGraphError, NotAdjacentError
from reorient.target import Move, MoveKind, edge_move, node_move
from sim.feasibility import is_feasible
from utils.config import ReorientationConfig, VehicleParams
from utils.logging import get_logger

logger = get_logger(__name__)

Transition = tuple[int, int]


class FaceGraph:
    """
    Feasible pivot moves between contact faces.

    Edges are directed; every edge carries the Move and its cost as "weight".
    """

    def __init__(self, graph: nx.DiGraph, goal: int):
        self.graph = graph
        self.goal = goal

    def move(self, from_face: int, to_face: int) -> Move:
        """
        The move for a transition.

        Raises:
            NotAdjacentError: If the graph has no such move.
        """
        if not self.graph.has_edge(from_face, to_face):
            raise NotAdjacentError(f"no move from face {from_face} to face {to_face}")
        move: Move = self.graph.edges[from_face, to_face]["move"]
        return move

    def moves_from(self, face: int) -> list[Move]:
        """Outgoing moves, ordered by target face."""
        return [self.graph.edges[face, target]["move"] for target in sorted(self.graph.successors(face))]

    def has_move(self, from_face: int, to_face: int) -> bool:
        """Whether the transition is in the graph."""
        return bool(self.graph.has_edge(from_face, to_face))

    @property
    def special_moves(self) -> list[Move]:
        """Node-pivot moves."""
        moves = [self.graph.edges[edge]["move"] for edge in sorted(self.graph.edges)]
        return [move for move in moves if move.kind == MoveKind.NODE]

    @property
    def edge_count(self) -> int:
        """Number of face pairs joined in at least one direction."""
        return len({frozenset(edge) for edge in self.graph.edges})

    @property
    def min_weight(self) -> float:
        """Smallest move cost."""
        return min(weight for _, _, weight in self.graph.edges(data="weight"))

    def stranded_faces(self) -> set[int]:
        """Faces that cannot reach the goal."""
        reaching = nx.ancestors(self.graph, self.goal) | {self.goal}
        return set(self.graph.nodes) - reaching

    def is_connected(self) -> bool:
        """Whether every face reaches the goal."""
        return not self.stranded_faces()

    def hop_distances(self) -> dict[int, int]:
        """Fewest moves from every face to the goal."""
        return dict(nx.single_source_shortest_path_length(self.graph.reverse(copy=False), self.goal))


def _transitions(model: TensegrityModel) -> list[Transition]:
    pairs = [(adjacency.face_a, adjacency.face_b) for adjacency in face_adjacency(model)]
    return sorted(pairs + [(b, a) for a, b in pairs])


def _add_move(graph: nx.DiGraph, move: Move) -> None:
    graph.add_edge(move.from_face, move.to_face, move=move, weight=move.cost)


def _edge_graph(model: TensegrityModel, excluded: set[Transition]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, FACE_COUNT + 1))
    for a, b in _transitions(model):
        if (a, b) not in excluded:
            _add_move(graph, edge_move(model, a, b))
    return graph


def _check_connected(face_graph: FaceGraph) -> None:
    stranded = face_graph.stranded_faces()
    if stranded:
        raise DisconnectedGraphError(f"faces {sorted(stranded)} cannot reach face {face_graph.goal}")


def build_face_graph(
    model: TensegrityModel,
    infeasible_transitions: Iterable[Transition] = (),
    special_moves: Iterable[Move] = (),
    goal: int = 1,
) -> FaceGraph:
    """
    Rotation graph from the 30 edge adjacencies minus the infeasible transitions plus the special moves.

    Args:
        model: The tensegrity model.
        infeasible_transitions: Directed (from, to) pairs to leave out.
        special_moves: Extra moves, typically node pivots.
        goal: The take-off face.

    Returns:
        FaceGraph: A graph in which every face reaches the goal.

    Raises:
        DisconnectedGraphError: If some face cannot reach the goal.
    """
    graph = _edge_graph(model, set(infeasible_transitions))
    for move in special_moves:
        _add_move(graph, move)
    face_graph = FaceGraph(graph, goal)
    _check_connected(face_graph)
    return face_graph


def infeasible_by_torque(model: TensegrityModel, params: VehicleParams, margin: float) -> list[Transition]:
    """Edge pivots for which the propellers cannot beat the gravity moment by the margin."""
    infeasible = []
    for a, b in _transitions(model):
        if not is_feasible(model, params, edge_move(model, a, b), margin):
            infeasible.append((a, b))
    return infeasible


def _node_pivot_candidates(
    model: TensegrityModel,
    params: VehicleParams,
    config: ReorientationConfig,
    sources: set[int],
    targets: set[int],
) -> list[Move]:
    candidates = []
    for a, b in product(sorted(sources), sorted(targets)):
        try:
            move = node_move(model, a, b, config.special_move_cost)
        except NotAdjacentError:
            continue
        if is_feasible(model, params, move, config.special_move_margin):
            candidates.append(move)
    return candidates


def connect_with_node_pivots(
    model: TensegrityModel,
    params: VehicleParams,
    config: ReorientationConfig,
    graph: nx.DiGraph,
) -> list[Move]:
    """
    Add the cheapest feasible node pivot from the stranded faces into the goal's component
    until every face reaches the goal.

    Node pivots are checked against config.special_move_margin, edge pivots are pruned
    with config.torque_margin.

    Returns:
        list: The node pivots added, in the order they were added.
    """
    added: list[Move] = []
    face_graph = FaceGraph(graph, config.goal_face)
    while stranded := face_graph.stranded_faces():
        reaching = set(graph.nodes) - stranded
        candidates = _node_pivot_candidates(model, params, config, stranded, reaching)
        if not candidates:
            raise DisconnectedGraphError(f"no feasible node pivot reconnects faces {sorted(stranded)}")
        move = min(candidates, key=lambda m: (m.cost, m.from_face, m.to_face))
        logger.warning(
            f"Adding node pivot {move.from_face} -> {move.to_face} about node {move.nodes[0]} "
            f"(cost {move.cost:.3f}) to reconnect faces {sorted(stranded)}"
        )
        _add_move(graph, move)
        added.append(move)
    return added


def face_graph_from_config(model: TensegrityModel, params: VehicleParams, config: ReorientationConfig) -> FaceGraph:
    """
    Rotation graph as configured: torque pruning, explicit infeasible transitions and special moves.

    When config.special_moves is None, node pivots are added automatically to reconnect the graph.

    Raises:
        DisconnectedGraphError: If the configured graph leaves faces that cannot reach the goal.
    """
    infeasible = set(config.infeasible_transitions)
    if config.prune_by_torque:
        infeasible |= set(infeasible_by_torque(model, params, config.torque_margin))
    logger.info(f"Pruning {len(infeasible)} infeasible transitions: {sorted(infeasible)}")

    if config.special_moves is not None:
        specials = [node_move(model, s.from_face, s.to_face, config.special_move_cost) for s in config.special_moves]
        return build_face_graph(model, infeasible, specials, config.goal_face)

    graph = _edge_graph(model, infeasible)
    connect_with_node_pivots(model, params, config, graph)
    return FaceGraph(graph, config.goal_face)


def export_gml(face_graph: FaceGraph, path: Path, config_hash: str = "") -> None:
    """Write the graph as GML with plain-valued edge attributes."""
    export = nx.DiGraph(goal=face_graph.goal, config_hash=config_hash)
    export.add_nodes_from(face_graph.graph.nodes)
    for a, b in sorted(face_graph.graph.edges):
        move = face_graph.move(a, b)
        export.add_edge(
            a,
            b,
            weight=round(move.cost, 9),
            angle_deg=round(math.degrees(move.angle), 6),
            kind=str(move.kind),
            pivot=move.describe(),
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    nx.write_gml(export, str(path))
    logger.info(f"Wrote face graph to {path}")
