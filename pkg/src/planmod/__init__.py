"""planmod: graph modification to planarity plus a first-order property, at desk scale."""

from .graphs import Graph
from .errors import InputError, ResourceLimitError, FormulaSyntaxError

__all__ = ["Graph", "InputError", "ResourceLimitError", "FormulaSyntaxError"]
__version__ = "0.1.0"
