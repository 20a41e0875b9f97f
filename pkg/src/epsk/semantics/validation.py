"""Model conditions for both flavors of Kripke ε-models."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from ..core.printer import canonical, to_text
from ..core.syntax import Eps, Param, existential_of, free_params, has_loose, instantiate
from .model import Flavor, KripkeEpsilonModel, World, subterm_closure

logger = logging.getLogger(__name__)


class ModelViolationKind(str, Enum):
    ORDER = "OrderViolation"
    EMPTY_DOMAIN = "EmptyDomain"
    DOMAIN_MONOTONICITY = "DomainMonotonicityViolation"
    MONOTONICITY = "MonotonicityViolation"
    UNKNOWN_ELEMENT = "UnknownElement"
    UNDEFINED_ELEMENT = "UndefinedElementViolation"
    TRACKED_NOT_CLOSED = "TrackedNotClosed"
    MISSING_VALUE = "MissingValuation"
    DEFINED_VALUE = "DefinedValueViolation"
    UNDEFINED_VALUE = "UndefinedValueViolation"
    STABILITY = "StabilityViolation"
    COMPOSITION = "CompositionViolation"
    CRITICAL = "CriticalViolation"


@dataclass(frozen=True)
class ModelViolation:
    kind: ModelViolationKind
    world: Optional[World]
    term: Optional[str]
    message: str

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind.value, "world": self.world, "term": self.term,
                "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[ModelViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def kinds(self) -> List[ModelViolationKind]:
        return [v.kind for v in self.violations]

    def to_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


class ModelValidator:
    """Collects every violated condition of one model."""

    def __init__(self, model: KripkeEpsilonModel, tracked: Optional[Iterable[Eps]] = None,
                 critical: bool = True):
        self.model = model
        self.tracked = frozenset(model.tracked if tracked is None else tracked)
        self.critical = critical
        self.violations: List[ModelViolation] = []

    def add(self, kind: ModelViolationKind, world: Optional[World], message: str,
            term: Optional[Eps] = None) -> None:
        self.violations.append(ModelViolation(
            kind, world, None if term is None else to_text(term), message))

    def run(self) -> ValidationReport:
        self._frame()
        if not self.violations:
            self._atoms()
            self._epsilon()
        if self.violations:
            logger.debug("Model rejected: %s", ", ".join(v.kind.value for v in self.violations))
        return ValidationReport(tuple(self.violations))

    # -- frame, domains, atoms ---------------------------------------------------

    def _frame(self) -> None:
        model = self.model
        known = set(model.worlds)
        for a, b in sorted(model.order):
            if a not in known or b not in known:
                self.add(ModelViolationKind.ORDER, a, f"order mentions unknown world in {a}<{b}")
            elif a == b:
                self.add(ModelViolationKind.ORDER, a, f"order is not irreflexive at {a}")
        for a, b in sorted(model.order):
            for c, d in sorted(model.order):
                if b == c and (a, d) not in model.order:
                    self.add(ModelViolationKind.ORDER, a, f"order is not transitive: {a}<{b}<{d}")
        for world in model.worlds:
            if not model.domains.get(world):
                self.add(ModelViolationKind.EMPTY_DOMAIN, world, "empty domain")
        for a, b in sorted(model.order):
            if a in known and b in known and not model.domains.get(a, frozenset()) <= \
                    model.domains.get(b, frozenset()):
                self.add(ModelViolationKind.DOMAIN_MONOTONICITY, a,
                         f"D({a}) is not contained in D({b})")

    def _atoms(self) -> None:
        model = self.model
        universe = model.universe
        for world in model.worlds:
            facts = model.atoms.get(world, frozenset())
            for fact in canonical(facts):
                if model.flavor is Flavor.EPSBOT:
                    outside = [a for a in fact.args if a not in universe]
                else:
                    outside = [a for a in fact.args if has_loose(a)]
                if outside:
                    self.add(ModelViolationKind.UNKNOWN_ELEMENT, world,
                             f"{to_text(fact)} mentions elements outside every domain")
                elif model.flavor is Flavor.EPSBOT and any(
                        a not in model.domains[world] for a in fact.args):
                    self.add(ModelViolationKind.UNDEFINED_ELEMENT, world,
                             f"{to_text(fact)} holds but mentions an element outside D({world})")
                for later in model.above(world)[1:]:
                    if fact not in model.atoms.get(later, frozenset()):
                        self.add(ModelViolationKind.MONOTONICITY, world,
                                 f"{to_text(fact)} holds at {world} but not at {later}")

    # -- ε-terms ---------------------------------------------------------------

    def _epsilon(self) -> None:
        model = self.model
        for term in canonical(subterm_closure(self.tracked) - self.tracked):
            self.add(ModelViolationKind.TRACKED_NOT_CLOSED, None,
                     "subterm of a tracked term is not tracked", term)
        for term in canonical(self.tracked):
            if any(Param(name) not in model.universe for name in free_params(term)):
                self.add(ModelViolationKind.UNKNOWN_ELEMENT, None,
                         "tracked term mentions parameters outside every domain", term)
                continue
            if model.flavor is Flavor.EPSBOT and not all(
                    model.has_value(term, w) for w in model.worlds):
                self.add(ModelViolationKind.MISSING_VALUE, None, "no value at some world", term)
                continue
            for world in model.worlds:
                self._term_at(term, world)

    def _term_at(self, term: Eps, world: World) -> None:
        model = self.model
        value = model.value(term, world)
        domain = model.domains[world]
        defined = model.defined_at(world, term)
        if model.flavor is Flavor.EPSBOT:
            if value not in model.universe:
                self.add(ModelViolationKind.MISSING_VALUE, world,
                         f"value {to_text(value)} is not an element", term)
                return
            self._composition(term, world)
            if defined and value not in domain:
                self.add(ModelViolationKind.DEFINED_VALUE, world,
                         f"defined but its value {to_text(value)} is outside D({world})", term)
            if not defined and value in domain:
                self.add(ModelViolationKind.UNDEFINED_VALUE, world,
                         f"undefined but its value {to_text(value)} lies in D({world})", term)
        elif defined and value not in domain:
            self.add(ModelViolationKind.DEFINED_VALUE, world,
                     f"defined but not an element of D({world})", term)
        if defined:
            for later in model.above(world)[1:]:
                if model.value(term, later) != value:
                    self.add(ModelViolationKind.STABILITY, world,
                             f"value changes between {world} and {later}", term)
        if self.critical and model.forces(world, existential_of(term)) and not model.forces(
                world, instantiate(term.body, value)):
            self.add(ModelViolationKind.CRITICAL, world,
                     "the existential holds but not at the chosen value", term)

    def _composition(self, term: Eps, world: World) -> None:
        model = self.model
        direct = model.valuation.get((world, term))
        reduced = model.valuation.get((world, model.reduce(term, world)))
        if direct is not None and reduced is not None and direct != reduced:
            self.add(ModelViolationKind.COMPOSITION, world,
                     f"value {to_text(direct)} differs from the value of its reduct "
                     f"{to_text(reduced)}", term)


def validate_model(model: KripkeEpsilonModel, tracked: Optional[Iterable[Eps]] = None,
                   critical: bool = True) -> ValidationReport:
    """Check every model condition over ``tracked`` (default: model.tracked).

    Never raises; violations are listed with their world and term.
    """
    return ModelValidator(model, tracked, critical).run()
