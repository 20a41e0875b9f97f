"""Finite Kripke ε-models and forcing.

Two flavors share one representation:

* ``epsbot``: elements are opaque constants, an ε-term is interpreted by
  the valuation V(e, w), and an atom is false at w as soon as one of its
  arguments denotes an element outside D(w);
* ``term``: elements are closed terms, V is the identity and atoms are a
  plain table lookup.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Set, Tuple

from ..core.printer import to_text
from ..core.syntax import (
    And,
    Atom,
    Bot,
    Eps,
    EpskError,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Param,
    Sequent,
    Term,
    Top,
    definedness_formula,
    eps_terms,
    free_params,
    has_loose,
    instantiate,
)

logger = logging.getLogger(__name__)

World = str


class ModelError(EpskError):
    """A model is malformed or cannot be evaluated."""


class UnTrackedEpsilonTerm(ModelError):
    """An ε-term without a value was evaluated in an ε⊥-model."""


class Flavor(str, Enum):
    EPSBOT = "epsbot"
    TERM = "term"


def close_order(pairs: Iterable[Tuple[World, World]]) -> FrozenSet[Tuple[World, World]]:
    """Transitive closure of a relation given as pairs."""
    closure: Set[Tuple[World, World]] = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return frozenset(closure)


@dataclass
class KripkeEpsilonModel:
    """A finite Kripke model with an ε-valuation.

    ``order`` holds the strict pairs w < w' (already transitively closed).
    ``valuation`` maps (world, ε-term) to an element; keys may be written
    with inner ε-terms or with their values substituted.
    ``element_order`` is the order ≺ on elements used by constructions.
    """

    worlds: Tuple[World, ...]
    order: FrozenSet[Tuple[World, World]]
    domains: Mapping[World, FrozenSet[Term]]
    atoms: Mapping[World, FrozenSet[Atom]]
    flavor: Flavor = Flavor.TERM
    valuation: Mapping[Tuple[World, Eps], Term] = field(default_factory=dict)
    tracked: FrozenSet[Eps] = frozenset()
    element_order: Tuple[Term, ...] = ()
    _cache: Dict[Tuple[World, Formula], bool] = field(
        default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.element_order:
            seen: List[Term] = []
            for world in self.worlds:
                for element in sorted(self.domains.get(world, ()), key=to_text):
                    if element not in seen:
                        seen.append(element)
            self.element_order = tuple(seen)
        self._up = {w: (w,) + tuple(v for v in self.worlds if (w, v) in self.order)
                    for w in self.worlds}

    # -- frame -----------------------------------------------------------------

    def above(self, world: World) -> Tuple[World, ...]:
        """Worlds w' with world <= w', world itself first."""
        return self._up[world]

    def below(self, world: World) -> Tuple[World, ...]:
        return tuple(v for v in self.worlds if (v, world) in self.order)

    def roots(self) -> Tuple[World, ...]:
        return tuple(w for w in self.worlds if not self.below(w))

    def successors(self, world: World) -> Tuple[World, ...]:
        """Immediate successors of ``world``."""
        later = [v for v in self.above(world) if v != world]
        return tuple(v for v in later
                     if not any((u, v) in self.order for u in later if u != v))

    @property
    def universe(self) -> FrozenSet[Term]:
        return frozenset().union(*(self.domains.get(w, frozenset()) for w in self.worlds))

    def domain(self, world: World) -> List[Term]:
        """D(world) in ≺ order."""
        members = self.domains.get(world, frozenset())
        return [e for e in self.element_order if e in members]

    # -- terms -----------------------------------------------------------------

    def reduce(self, term: Term, world: World) -> Term:
        """Replace closed inner ε-subterms by their values (innermost first)."""
        if not isinstance(term, Eps):
            return term
        return Eps(term.var, self._reduce_formula(term.body, world))

    def _reduce_formula(self, formula: Formula, world: World) -> Formula:
        if isinstance(formula, Atom):
            return Atom(formula.pred, tuple(self._reduce_arg(a, world) for a in formula.args))
        if isinstance(formula, (Bot, Top)):
            return formula
        if isinstance(formula, (And, Or, Imp)):
            return type(formula)(self._reduce_formula(formula.left, world),
                                 self._reduce_formula(formula.right, world))
        assert isinstance(formula, (Forall, Exists))
        return type(formula)(formula.var, self._reduce_formula(formula.body, world))

    def _reduce_arg(self, term: Term, world: World) -> Term:
        if isinstance(term, Eps):
            if has_loose(term):
                return Eps(term.var, self._reduce_formula(term.body, world))
            return self.value(term, world)
        return term

    def value(self, term: Term, world: World) -> Term:
        """V(term, world); the identity on parameters and in the term flavor."""
        if not isinstance(term, Eps) or self.flavor is Flavor.TERM:
            return term
        direct = self.valuation.get((world, term))
        if direct is not None:
            return direct
        reduced = self.reduce(term, world)
        found = self.valuation.get((world, reduced))
        if found is None:
            raise UnTrackedEpsilonTerm(f"no value for {to_text(term)} at {world}")
        return found

    def has_value(self, term: Eps, world: World) -> bool:
        try:
            self.value(term, world)
        except UnTrackedEpsilonTerm:
            return False
        return True

    # -- forcing ---------------------------------------------------------------

    def forces(self, world: World, formula: Formula) -> bool:
        key = (world, formula)
        cached = self._cache.get(key)
        if cached is None:
            cached = self._cache[key] = self._forces(world, formula)
        return cached

    def _forces(self, world: World, formula: Formula) -> bool:
        if isinstance(formula, Atom):
            values = tuple(self.value(a, world) for a in formula.args)
            if self.flavor is Flavor.EPSBOT:
                domain = self.domains[world]
                if any(v not in domain for v in values):
                    return False
            return Atom(formula.pred, values) in self.atoms.get(world, frozenset())
        if isinstance(formula, Bot):
            return False
        if isinstance(formula, Top):
            return True
        if isinstance(formula, And):
            return self.forces(world, formula.left) and self.forces(world, formula.right)
        if isinstance(formula, Or):
            return self.forces(world, formula.left) or self.forces(world, formula.right)
        if isinstance(formula, Imp):
            return all(not self.forces(v, formula.left) or self.forces(v, formula.right)
                       for v in self.above(world))
        if isinstance(formula, Forall):
            return all(self.forces(v, instantiate(formula.body, d))
                       for v in self.above(world) for d in self.domain(v))
        if isinstance(formula, Exists):
            return any(self.forces(world, instantiate(formula.body, d))
                       for d in self.domain(world))
        raise TypeError(f"Unexpected formula: {formula!r}")

    def defined_at(self, world: World, term: Term) -> bool:
        if isinstance(term, Param):
            return True
        return self.forces(world, definedness_formula(term))

    def interprets(self, world: World, obj: object) -> bool:
        """True if every parameter of ``obj`` is an element of D(world)."""
        domain = self.domains[world]
        return all(Param(name) in domain for name in free_params(obj))

    def refutes(self, world: World, sequent: Sequent) -> bool:
        return (all(self.forces(world, f) for f in sequent.antecedent)
                and not any(self.forces(world, f) for f in sequent.succedent))

    def sequent_valid(self, sequent: Sequent) -> bool:
        """No world interpreting the sequent forces Γ and refutes all of Δ."""
        return not any(self.interprets(w, sequent) and self.refutes(w, sequent)
                       for w in self.worlds)

    def refuting_worlds(self, sequent: Sequent) -> List[World]:
        return [w for w in self.worlds
                if self.interprets(w, sequent) and self.refutes(w, sequent)]

    def evaluate(self, formula: Formula) -> Dict[World, bool]:
        return {w: self.forces(w, formula) for w in self.worlds}


def forces(model: KripkeEpsilonModel, world: World, formula: Formula) -> bool:
    return model.forces(world, formula)


def defined_at(model: KripkeEpsilonModel, world: World, term: Term) -> bool:
    return model.defined_at(world, term)


def sequent_valid(model: KripkeEpsilonModel, sequent: Sequent) -> bool:
    return model.sequent_valid(sequent)


def subterm_closure(terms: Iterable[Term]) -> FrozenSet[Eps]:
    """Closed ε-subterms of ``terms``, the terms themselves included."""
    return eps_terms(list(terms))


__all__ = [
    "Flavor",
    "KripkeEpsilonModel",
    "ModelError",
    "UnTrackedEpsilonTerm",
    "World",
    "close_order",
    "defined_at",
    "forces",
    "sequent_valid",
    "subterm_closure",
]
