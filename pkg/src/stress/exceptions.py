class InvalidLoadCaseError(Exception):
    """Raised when a load case does not fit the model (bad faces or loaded node subset)."""


class InvalidImpactInputError(Exception):
    """Raised when the impact scenario has a nonpositive mass or stopping distance, or a negative speed."""
