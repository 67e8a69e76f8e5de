"""Exact census of elliptic curves in one-parameter families with prescribed entanglement."""
from .family import AssumptionError, FamilySpec, builtin, from_config, j_invariant, jmap_value
from .poly import HomogeneousPoly, UniPoly

__version__ = "0.1.0"

__all__ = [
    "AssumptionError",
    "FamilySpec",
    "HomogeneousPoly",
    "UniPoly",
    "builtin",
    "from_config",
    "j_invariant",
    "jmap_value",
]
