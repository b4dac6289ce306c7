class NotAdjacentError(Exception):
    """Raised when two faces share neither the edge nor the node a move needs."""


class DisconnectedGraphError(Exception):
    """Raised when some contact face cannot reach the goal face in the rotation graph."""


class NoPathError(Exception):
    """Raised when the planner finds no path from the start face to the goal."""
