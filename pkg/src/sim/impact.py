"""Wall collision: estimated peak force, the stress sweep at that force and the member check."""

from dataclasses import dataclass
from typing import Any

from geometry.icosahedron import TensegrityModel
from qp.solver import IQpSolver
from stress.analysis import SweepReport, sweep
from stress.components import DesignVerdict, check_components, estimate_impact_force
from utils.config import MaterialSpec, VehicleParams
from utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ImpactResult:
    """Estimated peak force, the stress sweep it drove (None at zero force) and the verdict."""

    speed: float
    stopping_distance: float
    f_max: float
    report: SweepReport | None
    verdict: DesignVerdict

    def summary(self) -> dict[str, Any]:
        """JSON-ready numbers."""
        return {
            "speed": self.speed,
            "stopping_distance": self.stopping_distance,
            "f_max": self.f_max,
            "sweep": self.report.summary() if self.report else None,
            "passed": self.verdict.passed,
            "margins": self.verdict.margins(),
        }


def simulate_wall_impact(
    speed: float,
    stopping_distance: float,
    params: VehicleParams,
    model: TensegrityModel,
    materials: MaterialSpec,
    solver: IQpSolver | None = None,
) -> ImpactResult:
    """
    Peak force of a wall collision and the member check at that force.

    The force feeds the stress sweep; its worst tension and compression go through the
    component check. A vehicle at rest loads nothing and passes trivially.
    """
    f_max = estimate_impact_force(params.mass, speed, stopping_distance)
    logger.info(f"Impact at {speed:.2f} m/s over {stopping_distance * 1e3:.1f} mm: F_max={f_max:.1f} N")
    if f_max == 0:
        verdict = check_components(0.0, 0.0, materials, model.rod_length)
        return ImpactResult(speed, stopping_distance, f_max, None, verdict)
    report = sweep(model, f_max, materials, solver)
    return ImpactResult(speed, stopping_distance, f_max, report, report.verdict())
