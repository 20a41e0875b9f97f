"""Kripke ε-models: evaluation, validation and the conservativity constructions."""

from .construction import (
    PreconditionKind,
    PreconditionViolation,
    as_term_model,
    extend_with_epsilon,
    strictify_domains,
)
from .model import (
    Flavor,
    KripkeEpsilonModel,
    ModelError,
    UnTrackedEpsilonTerm,
    defined_at,
    forces,
    sequent_valid,
)
from .validation import ModelViolation, ModelViolationKind, ValidationReport, validate_model

__all__ = [
    "Flavor",
    "KripkeEpsilonModel",
    "ModelError",
    "ModelViolation",
    "ModelViolationKind",
    "PreconditionKind",
    "PreconditionViolation",
    "UnTrackedEpsilonTerm",
    "ValidationReport",
    "as_term_model",
    "defined_at",
    "extend_with_epsilon",
    "forces",
    "sequent_valid",
    "strictify_domains",
    "validate_model",
]
