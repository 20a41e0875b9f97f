"""
epsk - proof kernel, Kripke semantics and bounded search for
intuitionistic predicate logic with Hilbert's ε-terms.

Derivations and finite models are the only trusted outputs: every search
result is re-checked by the kernel or by model validation before it is
reported.
"""

__version__ = "0.1.0"

from .core.kernel import CalculusConfig, Derivation, check_derivation
from .core.natded import NJDerivation, check_nj
from .core.parser import parse
from .core.printer import to_text
from .search.decide import Countermodel, Exhausted, Proof, decide
from .search.saturation import SearchConfig
from .semantics.model import KripkeEpsilonModel
from .semantics.validation import validate_model

__all__ = [
    "CalculusConfig",
    "Countermodel",
    "Derivation",
    "Exhausted",
    "KripkeEpsilonModel",
    "NJDerivation",
    "Proof",
    "SearchConfig",
    "check_derivation",
    "check_nj",
    "decide",
    "parse",
    "to_text",
    "validate_model",
]
