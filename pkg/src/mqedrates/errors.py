class DomainError(ValueError):
    """Input outside the physical domain of an operation."""


class GeometryError(DomainError):
    """Invalid point configuration (coincident points, point behind a surface, ...)."""


class SingularityError(DomainError):
    """Evaluation hit a pole of a closed-form expression."""
