"""Load case sweep over both top-face types, worst-case member forces and the truss cross-check."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

import numpy as np
from numpy.typing import NDArray

from geometry.icosahedron import (
    FACE_COUNT,
    NODE_COUNT,
    ROD_COUNT,
    STRING_COUNT,
    TensegrityModel,
    face_nodes,
    face_type,
)
from qp.solver import DEFAULT_TOLERANCE, ActiveSetSolver, IQpSolver, QpSolution
from stress.components import DesignVerdict, check_components
from stress.problem import LoadCase, assemble
from stress.truss import unilateral_truss_solve
from utils.config import MaterialSpec
from utils.logging import get_logger, log_duration
from utils.settings import SWEEP_WORKERS

logger = get_logger(__name__)

SWEEP_HEADER = (
    "case_id",
    "loaded_face",
    "grounded_face",
    "face_type",
    "loaded_nodes",
    "t_max",
    "c_max",
    "energy",
    "max_residual",
    "string_yield_margin",
    "rod_yield_margin",
    "rod_buckling_margin",
)


@dataclass(frozen=True)
class StressSolution:
    """Member forces, reactions and diagnostics of one load case."""

    case: LoadCase
    tensions: NDArray[np.float64]
    compressions: NDArray[np.float64]
    reactions: NDArray[np.float64]
    energy: float
    residuals: NDArray[np.float64]
    qp: QpSolution = field(repr=False)

    @property
    def t_max(self) -> float:
        """Largest string tension [N]."""
        return float(np.max(self.tensions))

    @property
    def c_max(self) -> float:
        """Largest rod compression [N]."""
        return float(np.max(self.compressions))

    @property
    def max_residual(self) -> float:
        """Largest nodal force residual [N]."""
        return float(np.max(self.residuals))


def solve_case(
    model: TensegrityModel,
    case: LoadCase,
    materials: MaterialSpec,
    solver: IQpSolver | None = None,
    tol: float = DEFAULT_TOLERANCE,
) -> StressSolution:
    """
    Solve the minimum-energy equilibrium of one load case.

    Args:
        model: The tensegrity.
        case: Grounded face, loaded nodes and total force.
        materials: Member materials.
        solver: QP solver, the active-set solver by default.
        tol: QP tolerance.

    Returns:
        StressSolution: String tensions, rod compressions, the 3 reaction vectors and residuals.
    """
    problem = assemble(model, case, materials)
    solution = (solver or ActiveSetSolver()).solve(problem, tol)
    x = solution.x
    row_residuals = (problem.a_eq @ x - problem.b_eq).reshape(NODE_COUNT, 3)
    return StressSolution(
        case=case,
        tensions=x[:STRING_COUNT].copy(),
        compressions=x[STRING_COUNT : STRING_COUNT + ROD_COUNT].copy(),
        reactions=x[STRING_COUNT + ROD_COUNT :].reshape(3, 3).copy(),
        energy=solution.objective,
        residuals=np.max(np.abs(row_residuals), axis=1),
        qp=solution,
    )


@dataclass(frozen=True)
class SweepReport:
    """All solved cases of a sweep with the worst tension and compression."""

    f_max: float
    rod_length: float
    materials: MaterialSpec
    solutions: tuple[StressSolution, ...]
    top_face_types: dict[int, int] = field(default_factory=dict)

    @property
    def t_max(self) -> float:
        """Largest tension over all cases."""
        return max(solution.t_max for solution in self.solutions)

    @property
    def c_max(self) -> float:
        """Largest compression over all cases."""
        return max(solution.c_max for solution in self.solutions)

    @property
    def t_max_case(self) -> int:
        """Case id of the largest tension (first on ties)."""
        return int(np.argmax([solution.t_max for solution in self.solutions]))

    @property
    def c_max_case(self) -> int:
        """Case id of the largest compression (first on ties)."""
        return int(np.argmax([solution.c_max for solution in self.solutions]))

    def verdict(self) -> DesignVerdict:
        """Component check of the worst-case forces."""
        return check_components(self.t_max, self.c_max, self.materials, self.rod_length)

    def rows(self) -> list[list[Any]]:
        """One CSV row per case, columns as in SWEEP_HEADER."""
        rows = []
        for case_id, solution in enumerate(self.solutions):
            case = solution.case
            margins = check_components(solution.t_max, solution.c_max, self.materials, self.rod_length).margins()
            rows.append(
                [
                    case_id,
                    case.loaded_face,
                    case.grounded_face,
                    self.top_face_types.get(case.loaded_face, ""),
                    " ".join(str(node) for node in case.loaded_nodes),
                    solution.t_max,
                    solution.c_max,
                    solution.energy,
                    solution.max_residual,
                    *margins.values(),
                ]
            )
        return rows

    def summary(self) -> dict[str, Any]:
        """Worst-case numbers and the verdict, for the JSON summary."""
        verdict = self.verdict()
        return {
            "f_max": self.f_max,
            "case_count": len(self.solutions),
            "t_max": self.t_max,
            "t_max_case": self.t_max_case,
            "c_max": self.c_max,
            "c_max_case": self.c_max_case,
            "max_residual": max(solution.max_residual for solution in self.solutions),
            "passed": verdict.passed,
            "margins": verdict.margins(),
        }


def unloaded_summary(materials: MaterialSpec, rod_length: float) -> dict[str, Any]:
    """Summary of a zero impact force: no case is loaded and every member passes."""
    verdict = check_components(0.0, 0.0, materials, rod_length)
    return {
        "f_max": 0.0,
        "case_count": 0,
        "t_max": 0.0,
        "t_max_case": None,
        "c_max": 0.0,
        "c_max_case": None,
        "max_residual": 0.0,
        "passed": verdict.passed,
        "margins": verdict.margins(),
    }


def representative_top_faces(model: TensegrityModel) -> list[int]:
    """First face (canonical order) with three string edges and first with two."""
    faces = []
    for wanted in (3, 2):
        faces.append(next(face for face in range(1, FACE_COUNT + 1) if face_type(model, face) == wanted))
    return faces


def sweep_cases(model: TensegrityModel, f_max: float) -> list[LoadCase]:
    """Both top-face types times every loaded node subset of size 1, 2 and 3."""
    cases = []
    for top_face in representative_top_faces(model):
        nodes = face_nodes(model, top_face)
        for size in (1, 2, 3):
            for subset in combinations(nodes, size):
                cases.append(LoadCase.on_top_face(model, top_face, subset, f_max))
    return cases


def sweep(
    model: TensegrityModel,
    f_max: float,
    materials: MaterialSpec,
    solver: IQpSolver | None = None,
    max_workers: int = SWEEP_WORKERS,
) -> SweepReport:
    """
    Solve every load configuration and collect the worst string tension and rod compression.

    Cases are solved concurrently and merged in case order.
    """
    if f_max <= 0:
        raise ValueError(f"f_max must be positive, got {f_max}")
    cases = sweep_cases(model, f_max)
    with log_duration(logger, f"Stress sweep of {len(cases)} cases"):
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            solutions = tuple(executor.map(lambda case: solve_case(model, case, materials, solver), cases))
    report = SweepReport(
        f_max=f_max,
        rod_length=model.rod_length,
        materials=materials,
        solutions=solutions,
        top_face_types={face: face_type(model, face) for face in representative_top_faces(model)},
    )
    logger.info(
        f"Sweep at F_max={f_max:.2f} N: T_max={report.t_max:.3f} N (case {report.t_max_case}), "
        f"C_max={report.c_max:.3f} N (case {report.c_max_case})"
    )
    return report


def cross_check(model: TensegrityModel, report: SweepReport) -> float:
    """
    Largest member-force difference between the QP and the unilateral truss solve over all
    cases, relative to the largest member force of the case.
    """
    worst = 0.0
    for solution in report.solutions:
        truss = unilateral_truss_solve(model, solution.case, report.materials)
        qp_forces = np.concatenate([solution.tensions, solution.compressions])
        truss_forces = np.concatenate([truss.tensions, truss.compressions])
        scale = max(float(np.max(np.abs(qp_forces))), 1e-300)
        worst = max(worst, float(np.max(np.abs(qp_forces - truss_forces))) / scale)
    logger.info(f"Truss cross-check: largest relative member-force difference {worst:.2e}")
    return worst
