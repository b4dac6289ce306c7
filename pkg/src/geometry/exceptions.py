class InvalidFaceError(Exception):
    """Raised when a face index is outside 1..20."""


class DegenerateFaceError(Exception):
    """Raised when the three nodes of a face are collinear."""


class InvalidModelError(Exception):
    """Raised when a deserialized model violates the icosahedron tensegrity invariants."""
