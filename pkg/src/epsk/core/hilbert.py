"""Hilbert-style ε axiom schemas: recognition and sequent derivations.

    EpsQ1     (t↓ & ∀xA(x)) -> A(t)
    EpsQ2     (t↓ & A(t)) -> ∃xA(x)
    Critical  ∃xA(x) -> A(εxA(x))
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from .kernel import Derivation
from .printer import to_text
from .syntax import (
    TOP,
    And,
    Eps,
    EpskError,
    Exists,
    Forall,
    Formula,
    Imp,
    Param,
    Sequent,
    Term,
    definedness_formula,
    fresh_name,
    free_params,
    has_loose,
    instantiate,
    match_instance,
    term_of_definedness,
)

logger = logging.getLogger(__name__)


class InvalidInstantiation(EpskError):
    """The schema cannot be instantiated with the given data."""


class Schema(str, Enum):
    EPS_Q1 = "EpsQ1"
    EPS_Q2 = "EpsQ2"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class HilbertInstance:
    """A schema together with the quantified body A (bound as ``var``) and t."""

    schema: Schema
    var: str
    body: Formula
    term: Term

    @property
    def formula(self) -> Formula:
        instance = instantiate(self.body, self.term)
        if self.schema is Schema.CRITICAL:
            return Imp(Exists(self.var, self.body), instance)
        guard = definedness_formula(self.term)
        if self.schema is Schema.EPS_Q1:
            return Imp(And(guard, Forall(self.var, self.body)), instance)
        return Imp(And(guard, instance), Exists(self.var, self.body))


def _guard_terms(guard: Formula, body: Formula, instance: Formula,
                 context: Formula) -> List[Term]:
    """Candidate terms t for a schema with guard t↓ and instance A(t)."""
    candidates: List[Term] = []
    eps = term_of_definedness(guard)
    if eps is not None:
        candidates.append(eps)
    matched, term = match_instance(body, instance)
    if matched:
        if term is not None:
            candidates.append(term)
        elif guard == TOP:
            params = sorted(free_params(context))
            candidates.append(Param(params[0] if params else fresh_name(())))
    return candidates


def recognize_hilbert_axiom(formula: Formula) -> Optional[HilbertInstance]:
    """The schema ``formula`` instantiates (modulo alpha), or None."""
    if not isinstance(formula, Imp):
        return None
    left, right = formula.left, formula.right
    if isinstance(left, Exists):
        term = Eps(left.var, left.body)
        if instantiate(left.body, term) == right:
            return HilbertInstance(Schema.CRITICAL, left.var, left.body, term)
    if not isinstance(left, And):
        return None
    guard = left.left
    if isinstance(left.right, Forall):
        quantified = left.right
        for term in _guard_terms(guard, quantified.body, right, formula):
            found = HilbertInstance(Schema.EPS_Q1, quantified.var, quantified.body, term)
            if found.formula == formula:
                return found
    if isinstance(right, Exists):
        for term in _guard_terms(guard, right.body, left.right, formula):
            found = HilbertInstance(Schema.EPS_Q2, right.var, right.body, term)
            if found.formula == formula:
                return found
    return None


def hilbert_axiom_derivation(instance: HilbertInstance) -> Derivation:
    """A cut-free IPCε derivation of ``=> instance.formula``.

    Raises:
        InvalidInstantiation: if the term is not closed, or the critical
            schema is given a term other than εxA.
    """
    if has_loose(instance.term):
        raise InvalidInstantiation(f"{instance.schema.value}: term has unbound variables")
    if instance.schema is Schema.CRITICAL and instance.term != Eps(instance.var, instance.body):
        raise InvalidInstantiation(
            f"Critical: the term must be the ε-term of the body, got {to_text(instance.term)}"
        )
    target = instance.formula
    assert isinstance(target, Imp)
    term = instance.term
    result = instantiate(instance.body, term)

    if instance.schema is Schema.CRITICAL:
        # => ∃xA -> A(e)  <-  ∃xA => A(e)  <-  A(e) => A(e)
        axiom = Derivation(Sequent.of([result], [result]), "Ax")
        core = Derivation(Sequent.of([target.left], [result]), "ExLEps", (axiom,))
    else:
        guard = definedness_formula(term)
        conjunction = target.left
        assert isinstance(conjunction, And)
        context = frozenset({guard, conjunction.right})
        goal = result if instance.schema is Schema.EPS_Q1 else target.right
        if instance.schema is Schema.EPS_Q1:
            main = Derivation(Sequent(context | {result}, frozenset({result})), "Ax")
            rule = "AllL"
        else:
            main = Derivation(Sequent(context, frozenset({result})), "Ax")
            rule = "ExR"
        premises = (main,)
        if guard != TOP:
            premises = (Derivation(Sequent(context, frozenset({guard})), "Ax"), main)
        step = Derivation(Sequent(context, frozenset({goal})), rule, premises, witness=term)
        core = Derivation(Sequent.of([conjunction], [goal]), "AndL", (step,))
    derivation = Derivation(Sequent.of([], [target]), "ImpR", (core,))
    logger.debug("Derived %s instance %s", instance.schema.value, to_text(target))
    return derivation
