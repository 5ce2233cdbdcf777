"""Environment-modified spontaneous emission, ICD and Auger rates from
dyadic Green's tensors in macroscopic QED."""

from mqedrates.errors import DomainError, GeometryError, SingularityError

__version__ = "0.1.0"

__all__ = ["DomainError", "GeometryError", "SingularityError", "__version__"]
