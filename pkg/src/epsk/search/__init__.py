"""Bounded proof and countermodel search."""

from .countermodel import AuditFailed, TreeBuilder, build_countermodel
from .decide import Countermodel, Exhausted, Proof, SearchResult, decide, prove, refute
from .prover import ProofSearch, widen
from .saturation import (
    BudgetExhausted,
    Closed,
    SaturatedSequent,
    SearchConfig,
    saturate,
    saturation_gaps,
)

__all__ = [
    "AuditFailed",
    "BudgetExhausted",
    "Closed",
    "Countermodel",
    "Exhausted",
    "Proof",
    "ProofSearch",
    "SaturatedSequent",
    "SearchConfig",
    "SearchResult",
    "TreeBuilder",
    "build_countermodel",
    "decide",
    "prove",
    "refute",
    "saturate",
    "saturation_gaps",
    "widen",
]
