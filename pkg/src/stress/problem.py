"""Minimum-energy equilibrium problem of the tensegrity under a collision load.

Variables are x = [T (24 strings), C (6 rods), U (3 reaction components per grounded node)].
Every node contributes three rows

    sum_l T_l s_ij - sum_k C_k r_ij + U_i = -P_i

where s_ij, r_ij are unit vectors from node i along the member, U_i is nonzero only at
grounded nodes and P_i is the applied load (nonzero only at loaded nodes).

Pinning the three nodes of a three-string face does not restrain the infinitesimal twist
mechanism of the structure: those nodes move rigidly in it and the equality rows lose rank.
Load cases are therefore grounded on the face nearest to the antipode of the loaded face
whose pinned nodes leave the equality rows at full rank.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from geometry.icosahedron import (
    FACE_COUNT,
    NODE_COUNT,
    ROD_COUNT,
    STRING_COUNT,
    TensegrityModel,
    face_inward_normal,
    face_nodes,
    unit_vector,
)
from qp.solver import QpProblem
from stress.exceptions import InvalidLoadCaseError
from utils.config import MaterialSpec

REACTION_COUNT = 9
# A load touches one node, an edge or the whole face.
MAX_LOADED_NODES = 3


@dataclass(frozen=True)
class LoadCase:
    """Grounded face, loaded top face, the loaded nodes and the total force split evenly over them."""

    grounded_face: int
    loaded_face: int
    loaded_nodes: tuple[int, ...]
    f_max: float

    @classmethod
    def on_top_face(
        cls, model: TensegrityModel, loaded_face: int, loaded_nodes: tuple[int, ...], f_max: float
    ) -> "LoadCase":
        """Case grounded on the supporting face of the loaded one."""
        return cls(
            grounded_face=supporting_face(model, loaded_face),
            loaded_face=loaded_face,
            loaded_nodes=loaded_nodes,
            f_max=f_max,
        )


def grounded_equilibrium_matrix(model: TensegrityModel, grounded_face: int) -> NDArray[np.float64]:
    """Equilibrium rows of the members and the reactions of a grounded face (36 x 39)."""
    columns = STRING_COUNT + ROD_COUNT + REACTION_COUNT
    a_eq = np.zeros((3 * NODE_COUNT, columns))
    for s, (i, j) in enumerate(model.strings):
        a_eq[3 * i : 3 * i + 3, s] = unit_vector(model, i, j)
        a_eq[3 * j : 3 * j + 3, s] = unit_vector(model, j, i)
    for k, (i, j) in enumerate(model.rods):
        column = STRING_COUNT + k
        a_eq[3 * i : 3 * i + 3, column] = -unit_vector(model, i, j)
        a_eq[3 * j : 3 * j + 3, column] = -unit_vector(model, j, i)
    for slot, node in enumerate(face_nodes(model, grounded_face)):
        column = STRING_COUNT + ROD_COUNT + 3 * slot
        a_eq[3 * node : 3 * node + 3, column : column + 3] = np.eye(3)
    return a_eq


def restrains_structure(model: TensegrityModel, grounded_face: int) -> bool:
    """Whether pinning the face leaves no mechanism, i.e. the equilibrium rows have full rank."""
    return bool(np.linalg.matrix_rank(grounded_equilibrium_matrix(model, grounded_face)) == 3 * NODE_COUNT)


def supporting_face(model: TensegrityModel, loaded_face: int) -> int:
    """
    Ground face of a load case on the given top face.

    The antipodal face when it restrains the structure (two-string faces), otherwise the
    restraining face sharing no node with the top face whose normal is most opposite to it.

    Raises:
        InvalidLoadCaseError: If the face index is out of range or no face qualifies.
    """
    if not 1 <= loaded_face <= FACE_COUNT:
        raise InvalidLoadCaseError(f"face index {loaded_face} out of range")
    top_nodes = set(face_nodes(model, loaded_face))
    alignment = model.normals @ face_inward_normal(model, loaded_face)
    for index in np.argsort(alignment, kind="stable"):
        face = int(index) + 1
        if top_nodes.isdisjoint(face_nodes(model, face)) and restrains_structure(model, face):
            return face
    raise InvalidLoadCaseError(f"no face can support a load on face {loaded_face}")


def validate_case(model: TensegrityModel, case: LoadCase) -> None:
    """Raise InvalidLoadCaseError when the case does not fit the model."""
    for face in (case.grounded_face, case.loaded_face):
        if not 1 <= face <= FACE_COUNT:
            raise InvalidLoadCaseError(f"face index {face} out of range")
    if not restrains_structure(model, case.grounded_face):
        raise InvalidLoadCaseError(f"pinning face {case.grounded_face} leaves the twist mechanism free")
    if case.f_max < 0:
        raise InvalidLoadCaseError(f"f_max must not be negative, got {case.f_max}")
    nodes = case.loaded_nodes
    if not 1 <= len(nodes) <= MAX_LOADED_NODES or len(set(nodes)) != len(nodes):
        raise InvalidLoadCaseError(f"loaded node subset must hold 1 to 3 distinct nodes, got {nodes}")
    if not set(nodes) <= set(face_nodes(model, case.loaded_face)):
        raise InvalidLoadCaseError(f"loaded nodes {nodes} are not on face {case.loaded_face}")
    if set(nodes) & set(face_nodes(model, case.grounded_face)):
        raise InvalidLoadCaseError("a loaded node is also grounded")


def load_direction(model: TensegrityModel, case: LoadCase) -> NDArray[np.float64]:
    """Unit vector pointing down, i.e. into the ground face."""
    return -face_inward_normal(model, case.grounded_face)


def applied_loads(model: TensegrityModel, case: LoadCase) -> NDArray[np.float64]:
    """Nodal load vectors P_i (12x3)."""
    loads = np.zeros((NODE_COUNT, 3))
    share = case.f_max / len(case.loaded_nodes) * load_direction(model, case)
    for node in case.loaded_nodes:
        loads[node] = share
    return loads


def member_flexibilities(model: TensegrityModel, materials: MaterialSpec) -> NDArray[np.float64]:
    """L / (E A) for the strings followed by the rods."""
    string = materials.string
    rod = materials.rod
    string_flex = model.string_lengths / (string.youngs_modulus * string.area)
    rod_flex = np.full(ROD_COUNT, model.rod_length / (rod.youngs_modulus * rod.area))
    return np.concatenate([string_flex, rod_flex])


def equality_system(model: TensegrityModel, case: LoadCase) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Equilibrium rows A x = b (36 x 39)."""
    return grounded_equilibrium_matrix(model, case.grounded_face), -applied_loads(model, case).reshape(-1)


def assemble(model: TensegrityModel, case: LoadCase, materials: MaterialSpec) -> QpProblem:
    """
    Build the minimum-energy QP of a load case.

    The energy is sum 1/2 (L/(E A)) F^2 over all members; reactions carry no energy and
    only the string tensions are sign constrained.

    Raises:
        InvalidLoadCaseError: If the case does not fit the model.
    """
    validate_case(model, case)
    a_eq, b_eq = equality_system(model, case)
    flexibility = np.concatenate([member_flexibilities(model, materials), np.zeros(REACTION_COUNT)])
    return QpProblem(
        quadratic=np.diag(flexibility),
        a_eq=a_eq,
        b_eq=b_eq,
        nonnegative=tuple(range(STRING_COUNT)),
    )
