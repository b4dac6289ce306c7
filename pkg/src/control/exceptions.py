class DegenerateCommandError(Exception):
    """Raised when the commanded acceleration is too small to define a thrust direction."""


class SingularAllocationError(Exception):
    """Raised when the propeller geometry gives a singular allocation matrix."""
