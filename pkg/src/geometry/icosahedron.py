"""Orthogonal (Jessen) icosahedron tensegrity: nodes, members, faces and face adjacency.

Nodes are the cyclic permutations of (+-s, +-s/2, 0) with s = L_r / 2. Node 4f..4f+3
belong to the rod family f (0: rods along x, 1: along y, 2: along z). The hull of the
nodes has 30 edges: the 24 strings and 6 short gap edges that join the ends of the two
parallel rods of a family. The rods are interior diagonals.
"""

import json
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
from functools import cached_property
from itertools import combinations
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import null_space
from scipy.spatial import ConvexHull

from geometry.exceptions import DegenerateFaceError, InvalidFaceError, InvalidModelError
from utils.logging import get_logger

logger = get_logger(__name__)

NODE_COUNT = 12
ROD_COUNT = 6
STRING_COUNT = 24
FACE_COUNT = 20
EDGE_COUNT = 30
# Faces sharing this many nodes share an edge.
EDGE_NODES = 2
GEOMETRY_TOLERANCE = 1e-10
# Rounding applied to the normals before sorting the faces.
CANONICAL_DECIMALS = 9

# Rod length 1, centred on the origin.
UNIT_NODES = np.array(
    [
        [-0.50, -0.25, 0.00],
        [0.50, -0.25, 0.00],
        [-0.50, 0.25, 0.00],
        [0.50, 0.25, 0.00],
        [0.00, -0.50, -0.25],
        [0.00, 0.50, -0.25],
        [0.00, -0.50, 0.25],
        [0.00, 0.50, 0.25],
        [-0.25, 0.00, -0.50],
        [-0.25, 0.00, 0.50],
        [0.25, 0.00, -0.50],
        [0.25, 0.00, 0.50],
    ]
)
UNIT_RODS = ((0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11))

Pair = tuple[int, int]
Triple = tuple[int, int, int]


class EdgeKind(StrEnum):
    """Kind of a hull edge."""

    STRING = "string"
    GAP = "gap"


@dataclass(frozen=True)
class FaceAdjacency:
    """Two faces sharing the hull edge (j, k) and the pivot angle between them."""

    face_a: int
    face_b: int
    shared_nodes: Pair
    angle: float
    edge_kind: EdgeKind


@dataclass(frozen=True)
class SelfStress:
    """Pre-stress state of the free-standing structure, normalised to a unit mean string tension."""

    tensions: NDArray[np.float64]
    compressions: NDArray[np.float64]

    @property
    def ratio(self) -> float:
        """Rod compression over string tension."""
        return float(np.mean(self.compressions) / np.mean(self.tensions))


@dataclass(frozen=True, eq=False)
class TensegrityModel:
    """Icosahedron tensegrity in the body frame. Faces are stored in canonical order, face k at index k-1."""

    rod_length: float
    nodes: NDArray[np.float64]
    rods: tuple[Pair, ...]
    strings: tuple[Pair, ...]
    faces: tuple[Triple, ...]

    @cached_property
    def gap_edges(self) -> tuple[Pair, ...]:
        """Hull edges that are not strings."""
        strings = set(self.strings)
        return tuple(sorted(edge for edge in _hull_edges(self.faces) if edge not in strings))

    @cached_property
    def normals(self) -> NDArray[np.float64]:
        """Inward unit normals of all faces (20x3)."""
        return np.array([_inward_normal(self.nodes, face) for face in self.faces])

    @cached_property
    def string_lengths(self) -> NDArray[np.float64]:
        """Length L_s of every string [m]."""
        return np.array([np.linalg.norm(self.nodes[i] - self.nodes[j]) for i, j in self.strings])

    @cached_property
    def _rod_index(self) -> dict[Pair, int]:
        return {pair: k for k, pair in enumerate(self.rods)}

    @cached_property
    def _string_index(self) -> dict[Pair, int]:
        return {pair: k for k, pair in enumerate(self.strings)}

    def to_json(self) -> str:
        """Serialize nodes, members and faces to a JSON document."""
        document: dict[str, Any] = {
            "rod_length": self.rod_length,
            "nodes": self.nodes.tolist(),
            "rods": [list(pair) for pair in self.rods],
            "strings": [list(pair) for pair in self.strings],
            "gap_edges": [list(pair) for pair in self.gap_edges],
            "faces": [list(face) for face in self.faces],
        }
        return json.dumps(document, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TensegrityModel":
        """Load a model written by to_json and check its invariants."""
        document = json.loads(text)
        try:
            model = cls(
                rod_length=float(document["rod_length"]),
                nodes=np.asarray(document["nodes"], dtype=float),
                rods=tuple(_pair(*pair) for pair in document["rods"]),
                strings=tuple(_pair(*pair) for pair in document["strings"]),
                faces=tuple(tuple(face) for face in document["faces"]),  # type: ignore[misc]
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidModelError(f"malformed model document: {e}") from e
        check_model(model)
        return model


def _pair(i: int, j: int) -> Pair:
    return (i, j) if i < j else (j, i)


def _hull_edges(faces: tuple[Triple, ...] | NDArray[np.int_]) -> set[Pair]:
    edges: set[Pair] = set()
    for face in faces:
        for i, j in combinations(face, 2):
            edges.add(_pair(int(i), int(j)))
    return edges


def _inward_normal(nodes: NDArray[np.float64], face: Triple) -> NDArray[np.float64]:
    n_j, n_k, n_l = (nodes[i] for i in face)
    w = np.cross(n_j - n_k, n_j - n_l)
    norm = np.linalg.norm(w)
    if norm < GEOMETRY_TOLERANCE:
        raise DegenerateFaceError(f"face {face} is degenerate")
    return np.sign(-n_j @ w) * w / norm


def _canonical_key(normal: NDArray[np.float64]) -> tuple[float, float, float]:
    rounded = np.round(normal, CANONICAL_DECIMALS) + 0.0
    return float(-rounded[2]), float(rounded[0]), float(rounded[1])


def build_icosahedron(rod_length: float) -> TensegrityModel:
    """
    Build the icosahedron tensegrity for the given rod length.

    Args:
        rod_length: Rod length L_r [m], must be positive.

    Returns:
        TensegrityModel: Nodes, 6 rods, 24 strings and the 20 faces in canonical order.
            Face 1 is the face whose inward normal points most upward.
    """
    if rod_length <= 0:
        raise ValueError(f"rod_length must be positive, got {rod_length}")

    nodes = UNIT_NODES * rod_length
    hull = ConvexHull(nodes)
    simplices = [tuple(sorted(int(i) for i in simplex)) for simplex in hull.simplices]
    edges = _hull_edges(simplices)  # type: ignore[arg-type]
    # Edges within a rod family are gap edges, the others are strings.
    strings = tuple(sorted(edge for edge in edges if edge[0] // 4 != edge[1] // 4))
    faces = tuple(sorted(simplices, key=lambda face: _canonical_key(_inward_normal(nodes, face))))

    model = TensegrityModel(
        rod_length=rod_length,
        nodes=nodes,
        rods=UNIT_RODS,
        strings=strings,
        faces=faces,  # type: ignore[arg-type]
    )
    check_model(model)
    logger.debug(f"Built icosahedron tensegrity with rod length {rod_length} m")
    return model


def check_model(model: TensegrityModel) -> None:  # noqa: C901
    """Raise InvalidModelError when the model breaks an icosahedron tensegrity invariant."""
    if model.nodes.shape != (NODE_COUNT, 3):
        raise InvalidModelError(f"expected {NODE_COUNT} nodes, got shape {model.nodes.shape}")
    if len(model.rods) != ROD_COUNT or len(model.faces) != FACE_COUNT or len(model.strings) != STRING_COUNT:
        raise InvalidModelError("expected 6 rods, 24 strings and 20 faces")
    rod_nodes = sorted(i for pair in model.rods for i in pair)
    if rod_nodes != list(range(NODE_COUNT)):
        raise InvalidModelError("each node must belong to exactly one rod")
    tolerance = GEOMETRY_TOLERANCE * max(1.0, model.rod_length)
    for i, j in model.rods:
        direction = model.nodes[j] - model.nodes[i]
        if abs(np.linalg.norm(direction) - model.rod_length) > tolerance:
            raise InvalidModelError(f"rod ({i}, {j}) does not have length {model.rod_length}")
        if np.count_nonzero(np.abs(direction) > tolerance) != 1:
            raise InvalidModelError(f"rod ({i}, {j}) is not axis-parallel")
    if len(set(model.strings) | set(model.rods)) != len(model.strings) + len(model.rods):
        raise InvalidModelError("a member is listed twice")
    if len(_hull_edges(model.faces)) != EDGE_COUNT:
        raise InvalidModelError(f"faces must share {EDGE_COUNT} edges")
    radii = np.linalg.norm(model.nodes, axis=1)
    if np.ptp(radii) > tolerance:
        raise InvalidModelError("nodes are not equidistant from the origin")


def _check_face(face_index: int) -> None:
    if not 1 <= face_index <= FACE_COUNT:
        raise InvalidFaceError(f"face index must be in 1..{FACE_COUNT}, got {face_index}")


def face_nodes(model: TensegrityModel, face_index: int) -> Triple:
    """Node indices (j, k, l) of a face."""
    _check_face(face_index)
    return model.faces[face_index - 1]


def face_inward_normal(model: TensegrityModel, face_index: int) -> NDArray[np.float64]:
    """Unit normal of a face pointing into the structure."""
    _check_face(face_index)
    return model.normals[face_index - 1].copy()


def face_height(model: TensegrityModel, face_index: int) -> float:
    """Distance from the face plane to the centroid [m]."""
    j = face_nodes(model, face_index)[0]
    return float(-model.nodes[j] @ model.normals[face_index - 1])


def face_edges(model: TensegrityModel, face_index: int) -> tuple[Pair, Pair, Pair]:
    """The three hull edges of a face."""
    j, k, m = face_nodes(model, face_index)
    return _pair(j, k), _pair(j, m), _pair(k, m)


def edge_kind(model: TensegrityModel, i: int, j: int) -> EdgeKind:
    """Whether a hull edge is a string or a gap edge."""
    pair = _pair(i, j)
    if pair in model._string_index:
        return EdgeKind.STRING
    if pair in model.gap_edges:
        return EdgeKind.GAP
    raise ValueError(f"({i}, {j}) is not a hull edge")


def face_type(model: TensegrityModel, face_index: int) -> int:
    """Number of string edges of a face: 3 or 2."""
    return sum(1 for i, j in face_edges(model, face_index) if edge_kind(model, i, j) == EdgeKind.STRING)


def antipodal_face(model: TensegrityModel, face_index: int) -> int:
    """The face parallel to the given one on the opposite side of the centroid."""
    normal = face_inward_normal(model, face_index)
    return int(np.argmin(model.normals @ normal)) + 1


def rod_between(model: TensegrityModel, i: int, j: int) -> int | None:
    """Rod index k connecting nodes i and j, or None."""
    return model._rod_index.get(_pair(i, j))


def string_between(model: TensegrityModel, i: int, j: int) -> int | None:
    """String index l connecting nodes i and j, or None."""
    return model._string_index.get(_pair(i, j))


def unit_vector(model: TensegrityModel, i: int, j: int) -> NDArray[np.float64]:
    """Unit vector from node i towards node j."""
    direction = model.nodes[j] - model.nodes[i]
    return direction / np.linalg.norm(direction)


def pivot_angle(model: TensegrityModel, face_a: int, face_b: int, j: int, k: int) -> float:
    """
    Rotation angle between two faces sharing nodes j and k.

    h_a lies in face a, orthogonal to the shared edge and pointing out of face a across the
    edge; h_b lies in face b pointing into it. The angle is arccos(h_a . h_b).
    """
    edge = unit_vector(model, j, k)
    third_a = next(n for n in face_nodes(model, face_a) if n not in (j, k))
    third_b = next(n for n in face_nodes(model, face_b) if n not in (j, k))
    h_a = model.nodes[j] - model.nodes[third_a]
    h_b = model.nodes[third_b] - model.nodes[j]
    h_a = h_a - (h_a @ edge) * edge
    h_b = h_b - (h_b @ edge) * edge
    cosine = (h_a @ h_b) / (np.linalg.norm(h_a) * np.linalg.norm(h_b))
    return float(np.arccos(np.clip(cosine, -1.0, 1.0)))


def face_adjacency(model: TensegrityModel) -> list[FaceAdjacency]:
    """All 30 pairs of faces that share an edge, ordered by (face_a, face_b)."""
    adjacency = []
    for a, b in combinations(range(1, FACE_COUNT + 1), 2):
        shared = sorted(set(model.faces[a - 1]) & set(model.faces[b - 1]))
        if len(shared) != EDGE_NODES:
            continue
        j, k = shared
        adjacency.append(
            FaceAdjacency(
                face_a=a,
                face_b=b,
                shared_nodes=(j, k),
                angle=pivot_angle(model, a, b, j, k),
                edge_kind=edge_kind(model, j, k),
            )
        )
    return adjacency


def equilibrium_matrix(model: TensegrityModel) -> NDArray[np.float64]:
    """
    Nodal equilibrium matrix of the free-standing structure (36 x 30).

    Columns are the strings followed by the rods, with tension-positive member forces:
    column m holds the unit vector from node i towards node j in the rows of node i.
    """
    members = list(model.strings) + list(model.rods)
    matrix = np.zeros((3 * NODE_COUNT, len(members)))
    for column, (i, j) in enumerate(members):
        direction = unit_vector(model, i, j)
        matrix[3 * i : 3 * i + 3, column] = direction
        matrix[3 * j : 3 * j + 3, column] = -direction
    return matrix


def self_stress(model: TensegrityModel) -> SelfStress:
    """Pre-stress state from the null space of the equilibrium matrix."""
    basis = null_space(equilibrium_matrix(model))
    if basis.shape[1] != 1:
        raise InvalidModelError(f"expected a single self-stress state, found {basis.shape[1]}")
    forces = basis[:, 0]
    tensions = forces[:STRING_COUNT]
    forces = forces / np.mean(tensions)
    return SelfStress(tensions=forces[:STRING_COUNT], compressions=-forces[STRING_COUNT:])
