"""Member sizing checks against yield and Euler buckling, and the impact force estimate."""

import math
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

from stress.exceptions import InvalidImpactInputError
from utils.config import MaterialSpec, RodMaterial


class Criterion(StrEnum):
    """Component selection criteria."""

    STRING_YIELD = "string_yield"
    ROD_YIELD = "rod_yield"
    ROD_BUCKLING = "rod_buckling"


@dataclass(frozen=True)
class CriterionResult:
    """Factored stress demand against its limit. margin = limit / demand."""

    criterion: Criterion
    demand: float
    limit: float

    @property
    def margin(self) -> float:
        """Ratio of limit to demand, infinite without demand."""
        if self.demand == 0:
            return math.inf
        return self.limit / self.demand

    @property
    def passed(self) -> bool:
        """Strict: demand equal to the limit fails."""
        return self.demand < self.limit


@dataclass(frozen=True)
class DesignVerdict:
    """Results of all criteria."""

    results: tuple[CriterionResult, ...]

    @property
    def passed(self) -> bool:
        """True when every criterion passes."""
        return all(result.passed for result in self.results)

    def failing(self) -> list[CriterionResult]:
        """Criteria that do not pass."""
        return [result for result in self.results if not result.passed]

    def margins(self) -> dict[str, float]:
        """Margin per criterion name."""
        return {str(result.criterion): result.margin for result in self.results}


def buckling_stress(rod: RodMaterial, rod_length: float) -> float:
    """Euler critical stress of a pinned rod, pi^2 E I / (A L^2) [Pa]."""
    return math.pi**2 * rod.youngs_modulus * rod.second_moment / (rod.area * rod_length**2)


def check_components(t_max: float, c_max: float, materials: MaterialSpec, rod_length: float) -> DesignVerdict:
    """
    Check the largest string tension and rod compression against the member capacities.

    Args:
        t_max: Largest string tension [N].
        c_max: Largest rod compression [N].
        materials: Member materials and safety factors.
        rod_length: Rod length L_r [m].

    Returns:
        DesignVerdict: Pass/fail and margin of string yield, rod yield and rod buckling.
    """
    if t_max < 0 or c_max < 0:
        raise ValueError("t_max and c_max must not be negative")
    string, rod, safety = materials.string, materials.rod, materials.safety
    rod_stress = c_max / rod.area
    return DesignVerdict(
        results=(
            CriterionResult(Criterion.STRING_YIELD, safety.string * t_max / string.area, string.yield_strength),
            CriterionResult(Criterion.ROD_YIELD, safety.rod_yield * rod_stress, rod.yield_strength),
            CriterionResult(Criterion.ROD_BUCKLING, safety.rod_buckling * rod_stress, buckling_stress(rod, rod_length)),
        )
    )


def estimate_impact_force(mass: float, speed: float, stopping_distance: float) -> float:
    """
    Peak force of a constant-deceleration stop, m v^2 / (2 d) [N].

    This is an estimate; it stands in for a measured collision force.
    """
    if mass <= 0 or stopping_distance <= 0:
        raise InvalidImpactInputError("mass and stopping distance must be positive")
    if speed < 0:
        raise InvalidImpactInputError(f"speed must not be negative, got {speed}")
    return mass * speed**2 / (2.0 * stopping_distance)
