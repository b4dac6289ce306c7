"""Simulated inertial measurement unit."""

import numpy as np

from geometry.rotations import Vector3
from utils.config import SimulationConfig


class ImuModel:
    """Gyro and accelerometer with Gaussian noise per axis and a constant gyro bias."""

    def __init__(self, config: SimulationConfig, seed: int | None = None):
        self.gyro_noise_std = config.gyro_noise_std
        self.accel_noise_std = config.accel_noise_std
        self.gyro_bias = np.asarray(config.gyro_bias, dtype=float)
        self._rng = np.random.default_rng(config.seed if seed is None else seed)

    def measure(self, omega: Vector3, specific_force: Vector3) -> tuple[Vector3, Vector3]:
        """Noisy gyro [rad/s] and accelerometer [m/s^2] readings."""
        gyro = np.asarray(omega, dtype=float) + self.gyro_bias
        accel = np.asarray(specific_force, dtype=float)
        if self.gyro_noise_std > 0:
            gyro = gyro + self._rng.normal(0.0, self.gyro_noise_std, 3)
        if self.accel_noise_std > 0:
            accel = accel + self._rng.normal(0.0, self.accel_noise_std, 3)
        return gyro, accel
