"""Conservativity constructions on finite Kripke models.

``strictify_domains`` makes domains strictly increasing along the order by
adding duplicates of a root element; ``extend_with_epsilon`` then turns an
ε-free model into an ε⊥-model by choosing a value for every ε-term, and
``as_term_model`` reads the result in the term flavor.
"""

import itertools
import logging
import re
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ..core.printer import to_text
from ..core.syntax import (
    Atom,
    Eps,
    Imp,
    Param,
    Term,
    contains_eps,
    definedness_formula,
    existential_of,
    free_params,
    has_loose,
    instantiate,
)
from .model import Flavor, KripkeEpsilonModel, ModelError, World, subterm_closure

logger = logging.getLogger(__name__)


class PreconditionKind(str, Enum):
    NO_TREE = "NoTree"
    DOMAINS_NOT_STRICT = "DomainsNotStrict"
    NO_UNDEFINED_SLOT = "NoUndefinedSlot"
    EMPTY_ROOT_DOMAIN = "EmptyRootDomain"


class PreconditionViolation(ModelError):
    """The input model does not meet the requirements of a construction."""

    def __init__(self, kind: PreconditionKind, message: str):
        self.kind = kind
        super().__init__(f"{kind.value}: {message}")


# ---------------------------------------------------------------------------
# Frame checks


def chain_to(model: KripkeEpsilonModel, world: World) -> List[World]:
    """Worlds v <= ``world``, root first (the frame must be a tree)."""
    return sorted(model.below(world), key=lambda v: len(model.below(v))) + [world]


def require_tree(model: KripkeEpsilonModel) -> World:
    """Return the root of a tree frame or raise NoTree."""
    roots = model.roots()
    if len(roots) != 1:
        raise PreconditionViolation(PreconditionKind.NO_TREE,
                                    f"expected one root, found {len(roots)}")
    for world in model.worlds:
        below = model.below(world)
        for a in below:
            for b in below:
                if a != b and (a, b) not in model.order and (b, a) not in model.order:
                    raise PreconditionViolation(
                        PreconditionKind.NO_TREE,
                        f"{a} and {b} are incomparable predecessors of {world}")
    return roots[0]


def require_strict(model: KripkeEpsilonModel) -> None:
    for world in model.worlds:
        for later in model.successors(world):
            if not model.domains[world] < model.domains[later]:
                raise PreconditionViolation(
                    PreconditionKind.DOMAINS_NOT_STRICT,
                    f"D({world}) is not a proper subset of D({later})")


# ---------------------------------------------------------------------------
# Strictly increasing domains


def _duplicate_name(element: Term, world: World, taken: Set[str]) -> str:
    base = f"{to_text(element)}_{re.sub(r'[^A-Za-z0-9_]', '_', world)}"
    name = base
    index = 1
    while name in taken:
        name = f"{base}_{index}"
        index += 1
    taken.add(name)
    return name


def _variants(fact: Atom, element: Term, copies: Sequence[Term]) -> Set[Atom]:
    """Every way of replacing occurrences of ``element`` by one of ``copies``."""
    options = [[arg] + list(copies) if arg == element else [arg] for arg in fact.args]
    results: Set[Atom] = {Atom(fact.pred, ())}
    for choices in options:
        results = {Atom(fact.pred, partial.args + (c,)) for partial in results for c in choices}
    return results


def strictify_domains(model: KripkeEpsilonModel) -> KripkeEpsilonModel:
    """Add a fresh duplicate e_w of the ≺-first root element to every world.

    e_w enters at w and behaves as e in every atom, so forcing of formulas
    over the original elements is unchanged.

    Raises:
        PreconditionViolation: NoTree or EmptyRootDomain.
    """
    if contains_eps(list(model.atoms.values())):
        raise ModelError("strictify_domains expects an ε-free model")
    root = require_tree(model)
    candidates = model.domain(root)
    if not candidates:
        raise PreconditionViolation(PreconditionKind.EMPTY_ROOT_DOMAIN,
                                    f"D({root}) is empty")
    element = candidates[0]
    taken = set(free_params(list(model.universe)))
    copies: Dict[World, Term] = {
        w: Param(_duplicate_name(element, w, taken)) for w in model.worlds
    }

    domains: Dict[World, FrozenSet[Term]] = {}
    atoms: Dict[World, FrozenSet[Atom]] = {}
    for world in model.worlds:
        available = [copies[v] for v in chain_to(model, world)]
        domains[world] = model.domains[world] | frozenset(available)
        facts: Set[Atom] = set()
        for fact in model.atoms.get(world, frozenset()):
            facts |= _variants(fact, element, available)
        atoms[world] = frozenset(facts)
    logger.debug("Duplicated %s into %s", to_text(element),
                 ", ".join(to_text(c) for c in copies.values()))
    return KripkeEpsilonModel(
        worlds=model.worlds,
        order=model.order,
        domains=domains,
        atoms=atoms,
        flavor=Flavor.EPSBOT,
        element_order=tuple(model.element_order) + tuple(copies[w] for w in model.worlds),
    )


# ---------------------------------------------------------------------------
# ε-extension


class _ChoiceModel(KripkeEpsilonModel):
    """ε⊥-model whose valuation is filled in on demand by the choice rule."""

    def value(self, term: Term, world: World) -> Term:
        if not isinstance(term, Eps):
            return term
        direct = self.valuation.get((world, term))
        if direct is not None:
            return direct
        reduced = self.reduce(term, world)
        found = self.valuation.get((world, reduced))
        if found is None:
            found = self._choose(reduced, world)
            self.valuation[(world, reduced)] = found  # type: ignore[index]
        return found

    def _choose(self, term: Eps, world: World) -> Term:
        guard = definedness_formula(term)
        for early in chain_to(self, world):
            if not self.forces(early, guard):
                continue
            for element in self.domain(early):
                if self.forces(early, Imp(existential_of(term), instantiate(term.body, element))):
                    return element
        for element in self.element_order:
            if element not in self.domains[world]:
                return element
        raise PreconditionViolation(
            PreconditionKind.NO_UNDEFINED_SLOT,
            f"{to_text(term)} is undefined at {world} but D({world}) is the whole universe")


def extend_with_epsilon(model: KripkeEpsilonModel, tracked: Iterable[Eps],
                        element_order: Optional[Sequence[Term]] = None,
                        check_strict: bool = True) -> KripkeEpsilonModel:
    """Give every tracked ε-term a value at every world.

    If e↓ holds at w, V(e, w) is the ≺-first d in D(v) with v ⊨ ∃xA -> A(d),
    v the least world below w where e↓ holds; otherwise it is the ≺-first
    element outside D(w). Values are stored for terms whose inner ε-terms
    are already replaced by elements.

    Raises:
        PreconditionViolation: NoTree, DomainsNotStrict or NoUndefinedSlot.
        ModelError: the input is not ε-free or a tracked term is not closed.
    """
    if contains_eps(list(model.atoms.values())):
        raise ModelError("extend_with_epsilon expects an ε-free model")
    require_tree(model)
    if check_strict:
        require_strict(model)
    terms = list(tracked)
    for term in terms:
        if has_loose(term):
            raise ModelError(f"tracked term {to_text(term)} has unbound variables")
        if any(Param(name) not in model.universe for name in free_params(term)):
            raise ModelError(f"tracked term {to_text(term)} mentions unknown elements")
    closure = subterm_closure(terms)

    order = tuple(element_order) if element_order else tuple(model.element_order)
    if set(order) != set(model.universe):
        raise ModelError("the element order must list every element exactly once")

    atoms: Dict[World, FrozenSet[Atom]] = {}
    for world in model.worlds:
        facts = model.atoms.get(world, frozenset())
        kept = frozenset(f for f in facts if all(a in model.domains[world] for a in f.args))
        if kept != facts:
            logger.warning("Dropped %d atoms at %s mentioning elements outside its domain",
                           len(facts - kept), world)
        atoms[world] = kept

    chooser = _ChoiceModel(
        worlds=model.worlds, order=model.order, domains=model.domains, atoms=atoms,
        flavor=Flavor.EPSBOT, valuation={}, tracked=closure, element_order=order,
    )
    for term in sorted(closure, key=to_text):
        for world in model.worlds:
            value = chooser.value(term, world)
            # the forcing used by validation must not need further choices
            chooser.defined_at(world, term)
            chooser.forces(world, existential_of(term))
            chooser.forces(world, instantiate(term.body, value))
    logger.info("Extended model with %d ε-terms (%d values)", len(closure),
                len(chooser.valuation))
    return KripkeEpsilonModel(
        worlds=model.worlds, order=model.order, domains=model.domains, atoms=atoms,
        flavor=Flavor.EPSBOT, valuation=dict(chooser.valuation), tracked=closure,
        element_order=order,
    )


def as_term_model(model: KripkeEpsilonModel) -> KripkeEpsilonModel:
    """The term-flavored reading of an ε⊥-model.

    Wherever a tracked term is defined it joins D(w) as an element of its
    own and shares every atom of its value there; an undefined term stays
    outside the domain and satisfies no atom.
    """
    if model.flavor is not Flavor.EPSBOT:
        raise ModelError("as_term_model expects an ε⊥-model")
    domains: Dict[World, FrozenSet[Term]] = {}
    atoms: Dict[World, FrozenSet[Atom]] = {}
    for world in model.worlds:
        named: Dict[Term, List[Term]] = {}
        for term in sorted(model.tracked, key=to_text):
            if model.defined_at(world, term):
                named.setdefault(model.value(term, world), []).append(term)
        domains[world] = frozenset(model.domains[world]).union(*named.values())
        facts: Set[Atom] = set()
        for fact in model.atoms.get(world, frozenset()):
            choices = [[arg] + named.get(arg, []) for arg in fact.args]
            facts.update(Atom(fact.pred, tuple(args)) for args in itertools.product(*choices))
        atoms[world] = frozenset(facts)
    order = tuple(model.element_order) + tuple(sorted(model.tracked, key=to_text))
    return KripkeEpsilonModel(
        worlds=model.worlds, order=model.order, domains=domains, atoms=atoms,
        flavor=Flavor.TERM, tracked=model.tracked, element_order=order,
    )


def agreement_failures(left: KripkeEpsilonModel, right: KripkeEpsilonModel,
                       formulas: Iterable) -> List[Tuple[World, str]]:
    """(world, formula) pairs where two models over the same frame disagree.

    Only formulas whose parameters are elements of D(w) in both models are
    compared at w.
    """
    failures: List[Tuple[World, str]] = []
    for formula in formulas:
        for world in left.worlds:
            if not (left.interprets(world, formula) and right.interprets(world, formula)):
                continue
            if left.forces(world, formula) != right.forces(world, formula):
                failures.append((world, to_text(formula)))
    return failures
