from typing import Any


class ExcessiveTimestepError(Exception):
    """Raised when an integration step is not in (0, 0.01] s."""


class SimulationTimeoutError(Exception):
    """Raised when a reorientation run does not reach the goal face in time."""

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result


class GroundPenetrationError(Exception):
    """Raised when a node pivot would push a node below the ground."""
