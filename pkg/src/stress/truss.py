"""Linear-elastic stiffness-method truss solve with tension-only strings.

Grounded nodes are pinned. Slack strings are taken out one at a time and strings that
would be stretched are put back until the active set no longer changes.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from geometry.icosahedron import NODE_COUNT, STRING_COUNT, TensegrityModel, face_nodes, unit_vector
from stress.problem import LoadCase, applied_loads, member_flexibilities, validate_case
from utils.config import MaterialSpec
from utils.logging import get_logger

logger = get_logger(__name__)

MAX_ITERATIONS = 200
RELATIVE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TrussSolution:
    """Member forces and nodal displacements of the unilateral truss solve."""

    tensions: NDArray[np.float64]
    compressions: NDArray[np.float64]
    displacements: NDArray[np.float64]
    slack_strings: tuple[int, ...]
    iterations: int


def _member_directions(model: TensegrityModel) -> list[tuple[int, int, NDArray[np.float64]]]:
    members = list(model.strings) + list(model.rods)
    return [(i, j, unit_vector(model, i, j)) for i, j in members]


def _solve_displacements(
    directions: list[tuple[int, int, NDArray[np.float64]]],
    stiffness: NDArray[np.float64],
    active: NDArray[np.bool_],
    free_dofs: NDArray[np.int_],
    loads: NDArray[np.float64],
) -> NDArray[np.float64]:
    k_global = np.zeros((3 * NODE_COUNT, 3 * NODE_COUNT))
    for member, (i, j, d) in enumerate(directions):
        if not active[member]:
            continue
        block = stiffness[member] * np.outer(d, d)
        for a, b, sign in ((i, i, 1.0), (j, j, 1.0), (i, j, -1.0), (j, i, -1.0)):
            k_global[3 * a : 3 * a + 3, 3 * b : 3 * b + 3] += sign * block
    u = np.zeros(3 * NODE_COUNT)
    k_free = k_global[np.ix_(free_dofs, free_dofs)]
    u[free_dofs] = np.linalg.lstsq(k_free, loads.reshape(-1)[free_dofs], rcond=None)[0]
    return u.reshape(NODE_COUNT, 3)


def unilateral_truss_solve(model: TensegrityModel, case: LoadCase, materials: MaterialSpec) -> TrussSolution:
    """
    Solve a load case with the stiffness method and tension-only strings.

    Returns:
        TrussSolution: Tension-positive string forces, compression-positive rod forces.
    """
    validate_case(model, case)
    directions = _member_directions(model)
    stiffness = 1.0 / member_flexibilities(model, materials)
    grounded = set(face_nodes(model, case.grounded_face))
    free_dofs = np.array([3 * n + c for n in range(NODE_COUNT) if n not in grounded for c in range(3)])
    loads = applied_loads(model, case)
    tol = RELATIVE_TOLERANCE * max(case.f_max, 1.0)

    active = np.ones(len(directions), dtype=bool)
    for iteration in range(1, MAX_ITERATIONS + 1):
        u = _solve_displacements(directions, stiffness, active, free_dofs, loads)
        elongation = np.array([d @ (u[j] - u[i]) for i, j, d in directions])
        forces = stiffness * elongation * active

        string_forces = np.where(active[:STRING_COUNT], forces[:STRING_COUNT], np.inf)
        stretched = [s for s in range(STRING_COUNT) if not active[s] and elongation[s] * stiffness[s] > tol]
        if float(np.min(string_forces)) < -tol:
            slack = int(np.argmin(string_forces))
            active[slack] = False
            active[stretched] = True
            logger.debug(f"iteration {iteration}: string {slack} goes slack")
            continue
        if stretched:
            active[stretched] = True
            continue
        return TrussSolution(
            tensions=forces[:STRING_COUNT],
            compressions=-forces[STRING_COUNT:],
            displacements=u,
            slack_strings=tuple(int(s) for s in np.flatnonzero(~active[:STRING_COUNT])),
            iterations=iteration,
        )
    raise RuntimeError(f"slack-string iteration did not settle in {MAX_ITERATIONS} iterations")
