import hashlib
import json
import os
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, field_validator, model_validator

from utils.logging import get_logger

logger = get_logger("config")

SCHEMA_VERSION = 1
GRAVITY = 9.81


class GeometryConfig(BaseModel):
    """Size of the icosahedron tensegrity."""

    rod_length: float = Field(default=0.20, gt=0, description="rod length L_r [m]")


class StringMaterial(BaseModel):
    """Braided string: strength, stiffness and round cross-section."""

    yield_strength: float = Field(default=1.2e9, gt=0, description="sigma_ys [Pa]")
    youngs_modulus: float = Field(default=30e9, gt=0, description="E_s [Pa]")
    diameter: float = Field(default=0.6e-3, gt=0, description="[m]")

    @property
    def area(self) -> float:
        """Cross-section area A_s [m^2]."""
        return float(np.pi * self.diameter**2 / 4)


class RodMaterial(BaseModel):
    """Hollow round rod (tube); inner_diameter = 0 gives a solid rod."""

    yield_strength: float = Field(default=600e6, gt=0, description="sigma_yr [Pa]")
    youngs_modulus: float = Field(default=70e9, gt=0, description="E_r [Pa]")
    outer_diameter: float = Field(default=6e-3, gt=0, description="[m]")
    inner_diameter: float = Field(default=4e-3, ge=0, description="[m]")

    @model_validator(mode="after")
    def check_wall(self) -> "RodMaterial":
        """The tube wall must have a positive thickness."""
        if self.inner_diameter >= self.outer_diameter:
            raise ValueError("inner_diameter must be smaller than outer_diameter")
        return self

    @property
    def area(self) -> float:
        """Cross-section area A_r [m^2]."""
        return float(np.pi * (self.outer_diameter**2 - self.inner_diameter**2) / 4)

    @property
    def second_moment(self) -> float:
        """Second moment of area I_r [m^4]."""
        return float(np.pi * (self.outer_diameter**4 - self.inner_diameter**4) / 64)


class SafetyFactors(BaseModel):
    """Factors of safety applied to the member demands."""

    string: float = Field(default=1.5, ge=1, description="eta_s")
    rod_yield: float = Field(default=1.5, ge=1, description="eta_r1")
    rod_buckling: float = Field(default=2.0, ge=1, description="eta_r2")


class MaterialSpec(BaseModel):
    """Member materials and safety factors used for component selection."""

    string: StringMaterial = StringMaterial()
    rod: RodMaterial = RodMaterial()
    safety: SafetyFactors = SafetyFactors()


class ImpactConfig(BaseModel):
    """Collision scenario. f_max overrides the energy estimate when set."""

    speed: float = Field(default=6.5, ge=0, description="approach speed [m/s]")
    stopping_distance: float = Field(default=0.02, gt=0, description="[m]")
    f_max: float | None = Field(default=None, gt=0, description="[N]")


class ControllerGains(BaseModel):
    """Gains of the cascaded flight controller."""

    zeta_p: float = Field(default=0.7, gt=0, le=2)
    omega_p: float = Field(default=2.0, gt=0, description="[rad/s]")
    tau_att: float = Field(default=0.08, gt=0, description="attitude time constant [s]")
    tau: float = Field(default=0.04, gt=0, description="rate time constant [s]")


class VehicleParams(BaseModel):
    """Rigid-body and propeller parameters of the vehicle (body frame)."""

    mass: float = Field(default=0.252, gt=0, description="[kg]")
    frame_mass: float = Field(default=0.050, gt=0, description="tensegrity mass [kg]")
    inertia: list[list[float]] = Field(
        default=[[1.1e-3, 0.0, 0.0], [0.0, 1.1e-3, 0.0], [0.0, 0.0, 1.6e-3]],
        description="J [kg m^2]",
    )
    propeller_positions: list[tuple[float, float, float]] = Field(
        default=[(0.06, 0.06, 0.0), (-0.06, 0.06, 0.0), (-0.06, -0.06, 0.0), (0.06, -0.06, 0.0)],
        description="r_i [m]",
    )
    spin_directions: list[int] = Field(default=[1, -1, 1, -1])
    torque_constant: float = Field(default=0.016, gt=0, description="kappa [m]")
    thrust_min: float = Field(default=-2.125, description="per propeller [N]")
    thrust_max: float = Field(default=2.125, gt=0, description="per propeller [N]")
    gravity: float = Field(default=GRAVITY, gt=0, description="[m/s^2]")

    @field_validator("inertia")
    @classmethod
    def check_inertia(cls, value: list[list[float]]) -> list[list[float]]:
        """J must be a symmetric positive definite 3x3 matrix."""
        matrix = np.asarray(value, dtype=float)
        if matrix.shape != (3, 3):
            raise ValueError("inertia must be 3x3")
        if not np.allclose(matrix, matrix.T, atol=1e-12):
            raise ValueError("inertia must be symmetric")
        if np.min(np.linalg.eigvalsh(matrix)) <= 0:
            raise ValueError("inertia must be positive definite")
        return value

    @model_validator(mode="after")
    def check_propellers(self) -> "VehicleParams":
        """Four propellers with nonzero arms and a valid thrust range."""
        if len(self.propeller_positions) != 4 or len(self.spin_directions) != 4:
            raise ValueError("exactly four propellers are supported")
        if any(abs(x) < 1e-9 or abs(y) < 1e-9 for x, y, _ in self.propeller_positions):
            raise ValueError("propeller positions need nonzero x and y components")
        if any(s not in (-1, 1) for s in self.spin_directions):
            raise ValueError("spin directions must be +1 or -1")
        if self.thrust_min >= self.thrust_max:
            raise ValueError("thrust_min must be below thrust_max")
        return self

    @property
    def inertia_matrix(self) -> NDArray[np.float64]:
        """J as a numpy array."""
        return np.asarray(self.inertia, dtype=float)

    @property
    def arms(self) -> NDArray[np.float64]:
        """Propeller positions as a 4x3 array."""
        return np.asarray(self.propeller_positions, dtype=float)


class EstimatorConfig(BaseModel):
    """Complementary filter settings."""

    alpha: float = Field(default=0.98, gt=0, lt=1)
    accel_gate_low: float = Field(default=0.5, gt=0, description="fraction of g")
    accel_gate_high: float = Field(default=1.5, gt=0, description="fraction of g")


class SimulationConfig(BaseModel):
    """Time steps, sensor noise and limits of the closed-loop simulations."""

    dynamics_dt: float = Field(default=0.001, gt=0, le=0.01)
    control_dt: float = Field(default=0.002, gt=0, le=0.01)
    timeout: float = Field(default=30.0, gt=0, description="[s]")
    rotate_timeout: float = Field(default=3.0, gt=0, description="per pivot [s]")
    settle_time: float = Field(default=0.3, gt=0, description="[s]")
    quiet_rate: float = Field(default=0.05, gt=0, description="settled gyro norm [rad/s]")
    restitution: float = Field(default=0.0, ge=0, le=1)
    gyro_noise_std: float = Field(default=0.0, ge=0, description="[rad/s]")
    accel_noise_std: float = Field(default=0.0, ge=0, description="[m/s^2]")
    gyro_bias: tuple[float, float, float] = (0.0, 0.0, 0.0)
    initial_yaw: float = Field(default=0.0, description="[rad]")
    seed: int = 0

    @model_validator(mode="after")
    def check_rates(self) -> "SimulationConfig":
        """The controller cannot run faster than the dynamics."""
        if self.control_dt < self.dynamics_dt:
            raise ValueError("control_dt must not be smaller than dynamics_dt")
        return self


class SpecialMoveConfig(BaseModel):
    """A node-pivot move from one contact face to another through a shared node."""

    from_face: int = Field(ge=1, le=20)
    to_face: int = Field(ge=1, le=20)


class ReorientationConfig(BaseModel):
    """Face graph pruning and state machine settings."""

    goal_face: int = Field(default=1, ge=1, le=20)
    prune_by_torque: bool = True
    torque_margin: float = Field(default=2.0, ge=1)
    special_move_margin: float = Field(default=1.2, ge=1)
    infeasible_transitions: list[tuple[int, int]] = []
    special_moves: list[SpecialMoveConfig] | None = None
    special_move_cost: float = Field(default=1.5, gt=0)
    debounce_steps: int = Field(default=10, ge=1)


class RunConfig(BaseModel):
    """Configuration of a toolkit run."""

    schema_version: int = SCHEMA_VERSION
    geometry: GeometryConfig = GeometryConfig()
    materials: MaterialSpec = MaterialSpec()
    impact: ImpactConfig = ImpactConfig()
    controller: ControllerGains = ControllerGains()
    vehicle: VehicleParams = VehicleParams()
    estimator: EstimatorConfig = EstimatorConfig()
    simulation: SimulationConfig = SimulationConfig()
    reorientation: ReorientationConfig = ReorientationConfig()
    output_dir: str | None = Field(default=None, description="falls back to the OUTPUT_DIR setting")

    @field_validator("schema_version")
    @classmethod
    def check_schema_version(cls, value: int) -> int:
        """Only the current schema is understood."""
        if value != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {value}, expected {SCHEMA_VERSION}")
        return value


def config_hash(config: RunConfig) -> str:
    """SHA-256 of the canonical JSON dump of the configuration."""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def find_config_file(start_path: Path, target: str) -> Path:
    """
    Recursively search for the target config file starting from start_path.

    Args:
        start_path (Path): The directory to start searching from.
        target (str): The relative path to the config file.

    Returns:
        Path: The path to the config file.

    Raises:
        FileNotFoundError: If the config file is not found.
    """
    for parent in [start_path] + list(start_path.parents):
        potential_path = parent / target
        if potential_path.is_file():
            return potential_path
    raise FileNotFoundError(f"{target} not found in any parent directories of {start_path}")


def get_config(path: Path | None = None) -> RunConfig:
    """
    Load and validate the run configuration.

    Args:
        path: Explicit config file. When omitted the file named by CONFIG_PATH
            (default config/config.json) is searched upwards from this module.

    Returns:
        RunConfig: The validated configuration, defaults filled in.
    """
    if path is None:
        current_file_path = Path(__file__).resolve()
        target_config_file = os.environ.get("CONFIG_PATH", "config/config.json")
        path = find_config_file(current_file_path.parent, target_config_file)

    logger.info(f"Loading run config from: {path}")
    try:
        with path.open() as file:
            data = json.load(file)
        sections = {key: value for key, value in data.items() if key in RunConfig.model_fields}
        return RunConfig(**sections)
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON format in config file {path}: {e}")
        raise
    except Exception as e:
        logger.error(f"Error loading config from {path}: {e}")
        raise
