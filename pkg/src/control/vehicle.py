"""Vehicle-level numbers: thrust-to-weight ratio and frame mass fraction."""

from utils.config import VehicleParams


def thrust_to_weight_ratio(params: VehicleParams) -> float:
    """Maximum total thrust over weight."""
    return len(params.propeller_positions) * params.thrust_max / (params.mass * params.gravity)


def frame_mass_fraction(params: VehicleParams) -> float:
    """Share of the vehicle mass taken by the tensegrity frame."""
    return params.frame_mass / params.mass
