"""Dense primal active-set solver for convex QPs with equality and sign constraints.

    minimize    1/2 x^T Q x
    subject to  A x = b,  x_i >= 0 for i in the nonnegative set
"""

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import LinAlgError, cho_factor, cho_solve, null_space
from scipy.optimize import linprog

from qp.exceptions import InfeasibleEqualityError, MaxIterationsError, NotPSDError, QpError
from utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITERATIONS = 500
REGULARIZATION_SCALE = 1e-12
SYMMETRY_TOLERANCE = 1e-12
LINPROG_INFEASIBLE = 2
MATRIX_NDIM = 2


@dataclass(frozen=True)
class QpProblem:
    """Quadratic coefficients, equality system and the indices constrained to be nonnegative."""

    quadratic: NDArray[np.float64]
    a_eq: NDArray[np.float64]
    b_eq: NDArray[np.float64]
    nonnegative: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n = self.quadratic.shape[0]
        if self.quadratic.shape != (n, n):
            raise ValueError(f"quadratic must be square, got {self.quadratic.shape}")
        if self.a_eq.ndim != MATRIX_NDIM or self.a_eq.shape[1] != n:
            raise ValueError(f"a_eq must have {n} columns, got {self.a_eq.shape}")
        if self.b_eq.shape != (self.a_eq.shape[0],):
            raise ValueError(f"b_eq must have {self.a_eq.shape[0]} entries, got {self.b_eq.shape}")
        if np.any(np.all(self.a_eq == 0, axis=1)):
            raise ValueError("a_eq has an all-zero row")
        if any(not 0 <= i < n for i in self.nonnegative):
            raise ValueError("nonnegative index out of range")

    @property
    def size(self) -> int:
        """Number of variables."""
        return int(self.quadratic.shape[0])


@dataclass(frozen=True)
class QpSolution:
    """Minimizer with its KKT diagnostics."""

    x: NDArray[np.float64]
    objective: float
    equality_residual: float
    complementarity_residual: float
    active_set: tuple[int, ...]
    iterations: int
    equality_multipliers: NDArray[np.float64] = field(repr=False)
    bound_multipliers: NDArray[np.float64] = field(repr=False)
    regularization: float = 0.0


class IQpSolver(Protocol):
    """Interface for QP solvers."""

    def solve(self, problem: QpProblem, tol: float = DEFAULT_TOLERANCE) -> QpSolution:
        """Solve the problem to the KKT tolerance tol."""
        ...


def regularize(quadratic: NDArray[np.float64]) -> tuple[NDArray[np.float64], float]:
    """
    Add delta = 1e-12 * max(diag Q) to the diagonal and check positive definiteness.

    Returns:
        tuple: The regularized matrix and delta.

    Raises:
        NotPSDError: If Q is not symmetric or the Cholesky factorization fails.
    """
    scale = max(1.0, float(np.max(np.abs(quadratic)))) if quadratic.size else 1.0
    if np.max(np.abs(quadratic - quadratic.T), initial=0.0) > SYMMETRY_TOLERANCE * scale:
        raise NotPSDError("quadratic coefficient matrix is not symmetric")
    largest = float(np.max(np.diag(quadratic), initial=0.0))
    delta = REGULARIZATION_SCALE * (largest if largest > 0 else 1.0)
    regularized = quadratic + delta * np.eye(quadratic.shape[0])
    try:
        cho_factor(regularized)
    except LinAlgError as e:
        raise NotPSDError("quadratic coefficient matrix is not positive semidefinite") from e
    if np.any(np.diag(quadratic) <= 0):
        logger.debug(f"Semidefinite quadratic regularized with delta={delta:.3e}")
    return regularized, delta


class ActiveSetSolver:
    """Primal active-set method on the sign constraints, null-space steps on the equalities."""

    def __init__(self, max_iterations: int = DEFAULT_MAX_ITERATIONS):
        self.max_iterations = max_iterations

    def solve(self, problem: QpProblem, tol: float = DEFAULT_TOLERANCE) -> QpSolution:
        """
        Solve the QP.

        Args:
            problem: The problem to solve.
            tol: Tolerance on residuals and multiplier signs.

        Returns:
            QpSolution: The minimizer with multipliers and residuals.

        Raises:
            InfeasibleEqualityError: If the feasible set is empty.
            NotPSDError: If Q is not positive semidefinite.
            MaxIterationsError: If the iteration limit is reached.
        """
        if tol <= 0:
            raise ValueError("tol must be positive")
        quadratic, delta = regularize(problem.quadratic)
        bounded = sorted(set(problem.nonnegative))
        x = self._feasible_point(problem, bounded, tol)
        working = [i for i in bounded if x[i] <= tol]
        x[working] = 0.0

        at_subspace_minimum = False
        for iteration in range(1, self.max_iterations + 1):
            if not at_subspace_minimum:
                step = self._step(quadratic, problem, x, working)
                alpha, blocking = self._step_length(x, step, bounded, working)
                x = x + alpha * step
                if blocking is not None:
                    logger.debug(f"iteration {iteration}: variable {blocking} blocks at alpha={alpha:.3e}")
                    working = sorted([*working, blocking])
                    x[blocking] = 0.0
                    continue
                at_subspace_minimum = True

            lam, mu = self._multipliers(quadratic, problem, x, working)
            gradient_scale = max(1.0, float(np.max(np.abs(quadratic @ x), initial=0.0)))
            if not working or float(np.min(mu)) >= -tol * gradient_scale:
                return self._solution(problem, quadratic, x, working, lam, mu, iteration, delta)
            # argmin returns the first, i.e. lowest, index on ties
            released = working[int(np.argmin(mu))]
            logger.debug(f"iteration {iteration}: releasing variable {released} (multiplier {np.min(mu):.3e})")
            working.remove(released)
            at_subspace_minimum = False

        raise MaxIterationsError(f"active-set method did not converge in {self.max_iterations} iterations")

    @staticmethod
    def _feasible_point(problem: QpProblem, bounded: list[int], tol: float) -> NDArray[np.float64]:
        b_scale = max(1.0, float(np.max(np.abs(problem.b_eq), initial=0.0)))
        if not bounded:
            x = np.linalg.lstsq(problem.a_eq, problem.b_eq, rcond=None)[0]
            if np.max(np.abs(problem.a_eq @ x - problem.b_eq), initial=0.0) > 1e3 * tol * b_scale:
                raise InfeasibleEqualityError("b is not in the range of A")
            return x

        bounds = [(0.0, None) if i in set(bounded) else (None, None) for i in range(problem.size)]
        result = linprog(
            c=np.zeros(problem.size),
            A_eq=problem.a_eq,
            b_eq=problem.b_eq,
            bounds=bounds,
            method="highs",
        )
        if result.status == LINPROG_INFEASIBLE:
            raise InfeasibleEqualityError("no point satisfies A x = b with the sign constraints")
        if result.status != 0:
            raise QpError(f"feasibility phase failed: {result.message}")
        x = np.asarray(result.x, dtype=float)
        x[bounded] = np.maximum(x[bounded], 0.0)
        return x

    @staticmethod
    def _step(
        quadratic: NDArray[np.float64],
        problem: QpProblem,
        x: NDArray[np.float64],
        working: list[int],
    ) -> NDArray[np.float64]:
        """Step to the minimizer over {A x = b, x_W = 0}, restoring any equality residual."""
        free = np.setdiff1d(np.arange(problem.size), working)
        step = np.zeros(problem.size)
        if free.size == 0:
            return step
        a_free = problem.a_eq[:, free]
        residual = problem.b_eq - problem.a_eq @ x
        step[free] = np.linalg.lstsq(a_free, residual, rcond=None)[0]

        basis = null_space(a_free)
        if basis.shape[1] == 0:
            return step
        gradient = (quadratic @ (x + step))[free]
        reduced = basis.T @ quadratic[np.ix_(free, free)] @ basis
        y = cho_solve(cho_factor(reduced), -basis.T @ gradient)
        step[free] += basis @ y
        return step

    @staticmethod
    def _step_length(
        x: NDArray[np.float64],
        step: NDArray[np.float64],
        bounded: list[int],
        working: list[int],
    ) -> tuple[float, int | None]:
        alpha, blocking = 1.0, None
        for i in bounded:
            if i in working or step[i] >= 0:
                continue
            ratio = max(0.0, -x[i] / step[i])
            # strict comparison keeps the lowest index on ties
            if ratio < alpha:
                alpha, blocking = ratio, i
        return alpha, blocking

    @staticmethod
    def _multipliers(
        quadratic: NDArray[np.float64],
        problem: QpProblem,
        x: NDArray[np.float64],
        working: list[int],
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Least-squares solution of Q x = A^T lambda + sum_W mu_i e_i."""
        selector = np.zeros((problem.size, len(working)))
        selector[working, np.arange(len(working))] = 1.0
        system = np.hstack([problem.a_eq.T, selector])
        solution = np.linalg.lstsq(system, quadratic @ x, rcond=None)[0]
        m = problem.a_eq.shape[0]
        return solution[:m], solution[m:]

    @staticmethod
    def _solution(
        problem: QpProblem,
        quadratic: NDArray[np.float64],
        x: NDArray[np.float64],
        working: list[int],
        lam: NDArray[np.float64],
        mu: NDArray[np.float64],
        iterations: int,
        delta: float,
    ) -> QpSolution:
        bound_multipliers = np.zeros(problem.size)
        bound_multipliers[working] = mu
        bounded = list(problem.nonnegative)
        complementarity = float(np.max(np.abs(x[bounded] * bound_multipliers[bounded]), initial=0.0))
        solution = QpSolution(
            x=x,
            objective=float(0.5 * x @ problem.quadratic @ x),
            equality_residual=float(np.max(np.abs(problem.a_eq @ x - problem.b_eq), initial=0.0)),
            complementarity_residual=complementarity,
            active_set=tuple(working),
            iterations=iterations,
            equality_multipliers=lam,
            bound_multipliers=bound_multipliers,
            regularization=delta,
        )
        logger.debug(
            f"QP solved in {iterations} iterations, objective={solution.objective:.6e}, "
            f"residual={solution.equality_residual:.2e}, active={len(working)}"
        )
        return solution


def solve(problem: QpProblem, tol: float = DEFAULT_TOLERANCE) -> QpSolution:
    """Solve a QP with the default active-set solver."""
    return ActiveSetSolver().solve(problem, tol)
