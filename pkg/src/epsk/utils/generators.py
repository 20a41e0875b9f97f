"""Seeded random formulas, sequents and models for property sweeps."""

import itertools
import logging
import random
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from ..core.syntax import (
    BOT,
    TOP,
    And,
    Atom,
    Eps,
    Formula,
    Imp,
    Or,
    Param,
    Sequent,
    Term,
    eps_,
    exists_,
    forall_,
    neg,
)
from ..semantics.construction import (
    PreconditionViolation,
    as_term_model,
    extend_with_epsilon,
    strictify_domains,
)
from ..semantics.model import Flavor, KripkeEpsilonModel, World, close_order
from ..semantics.validation import validate_model

logger = logging.getLogger(__name__)

DEFAULT_SIGNATURE: Dict[str, int] = {"P": 1, "Q": 1, "R": 2, "C": 0}
BINDERS = ("x", "y", "z", "u", "v", "w")


class FormulaGenerator:
    """Random formulas over a signature.

    ``params`` are the free names atoms may mention; ``closed_terms`` are
    extra closed terms (typically tracked ε-terms) used as leaves.
    ``eps_nesting`` bounds the nesting of newly built ε-terms; 0 builds none.
    """

    def __init__(self, seed: int = 0, signature: Optional[Mapping[str, int]] = None,
                 params: Sequence[str] = ("a", "b"), closed_terms: Sequence[Term] = (),
                 eps_nesting: int = 1, quantifiers: bool = True):
        self.rng = random.Random(seed)
        self.signature = dict(signature or DEFAULT_SIGNATURE)
        self.params = tuple(params)
        self.closed_terms = tuple(closed_terms)
        self.eps_nesting = eps_nesting
        self.quantifiers = quantifiers

    def term(self, scope: Sequence[str] = (), eps_budget: Optional[int] = None,
             depth: int = 1) -> Term:
        budget = self.eps_nesting if eps_budget is None else eps_budget
        if budget > 0 and self.rng.random() < 0.2:
            return self.eps_term(scope, budget, depth)
        pool: List[Term] = [Param(n) for n in tuple(self.params) + tuple(scope)]
        pool += self.closed_terms
        return self.rng.choice(pool)

    def eps_term(self, scope: Sequence[str] = (), eps_budget: Optional[int] = None,
                 depth: int = 1) -> Eps:
        budget = self.eps_nesting if eps_budget is None else eps_budget
        var = self._binder(scope) or BINDERS[0]
        body = self.formula(max(depth - 1, 0), tuple(scope) + (var,), max(budget - 1, 0),
                            require=var)
        return eps_(var, body)

    def atom(self, scope: Sequence[str] = (), eps_budget: int = 0, depth: int = 1,
             require: Optional[str] = None) -> Formula:
        names = sorted(self.signature)
        if require is not None:
            names = [n for n in names if self.signature[n] > 0] or names
        pred = self.rng.choice(names)
        args = [self.term(scope, eps_budget, depth) for _ in range(self.signature[pred])]
        if require is not None and args:
            args[self.rng.randrange(len(args))] = Param(require)
        return Atom(pred, tuple(args))

    def formula(self, depth: int = 3, scope: Sequence[str] = (),
                eps_budget: Optional[int] = None, require: Optional[str] = None) -> Formula:
        """A formula of depth at most ``depth``; ``require`` names a variable it must use."""
        budget = self.eps_nesting if eps_budget is None else eps_budget
        if depth <= 0 or self.rng.random() < 0.15:
            roll = self.rng.random()
            if require is None and roll < 0.08:
                return BOT
            if require is None and roll < 0.12:
                return TOP
            return self.atom(scope, budget, depth, require)
        kinds = ["and", "or", "imp", "neg"]
        if self.quantifiers and self._binder(scope) is not None:
            kinds += ["forall", "exists"]
        kind = self.rng.choice(kinds)
        if kind == "neg":
            return neg(self.formula(depth - 1, scope, budget, require))
        if kind in ("forall", "exists"):
            var = self._binder(scope)
            assert var is not None
            body = self.formula(depth - 1, tuple(scope) + (var,), budget, require)
            return forall_(var, body) if kind == "forall" else exists_(var, body)
        left_req, right_req = (require, None) if self.rng.random() < 0.5 else (None, require)
        left = self.formula(depth - 1, scope, budget, left_req)
        right = self.formula(depth - 1, scope, budget, right_req)
        return {"and": And, "or": Or, "imp": Imp}[kind](left, right)

    def sequent(self, depth: int = 3, max_antecedent: int = 2,
                multiple: bool = False) -> Sequent:
        antecedent = [self.formula(depth) for _ in range(self.rng.randint(0, max_antecedent))]
        count = self.rng.randint(0, 2) if multiple else 1
        return Sequent.of(antecedent, [self.formula(depth) for _ in range(count)])

    def _binder(self, scope: Sequence[str]) -> Optional[str]:
        taken = set(scope) | set(self.params)
        return next((n for n in BINDERS if n not in taken), None)


# ---------------------------------------------------------------------------
# Models


def random_tree_model(rng: random.Random, max_worlds: int = 3, max_elements: int = 3,
                      signature: Optional[Mapping[str, int]] = None,
                      flavor: Flavor = Flavor.EPSBOT) -> KripkeEpsilonModel:
    """An ε-free model on a random tree with increasing domains and atoms."""
    signature = dict(signature or {"P": 1, "Q": 1, "C": 0})
    elements = [Param(f"d{i}") for i in range(1, max_elements + 1)]
    worlds: List[World] = [f"w{i}" for i in range(rng.randint(1, max_worlds))]
    parent: Dict[World, Optional[World]] = {worlds[0]: None}
    for index, world in enumerate(worlds[1:], 1):
        parent[world] = worlds[rng.randrange(index)]

    domains: Dict[World, frozenset] = {}
    atoms: Dict[World, frozenset] = {}
    for world in worlds:
        above = parent[world]
        base = set(domains[above]) if above else {elements[0]}
        base |= {e for e in elements if rng.random() < 0.3}
        domains[world] = frozenset(base)
        facts: Set[Atom] = set(atoms[above]) if above else set()
        for pred, arity in sorted(signature.items()):
            for args in itertools.product(sorted(base, key=lambda p: p.name), repeat=arity):
                if rng.random() < 0.3:
                    facts.add(Atom(pred, tuple(args)))
        atoms[world] = frozenset(facts)

    order = close_order((p, w) for w, p in parent.items() if p is not None)
    return KripkeEpsilonModel(worlds=tuple(worlds), order=order, domains=domains,
                              atoms=atoms, flavor=flavor)


def random_epsbot_model(seed: int, tracked_terms: int = 2, max_worlds: int = 3,
                        attempts: int = 50,
                        tracked: Optional[Sequence[Eps]] = None) -> KripkeEpsilonModel:
    """A validated ε⊥-model: random tree, strictified, then ε-extended.

    ``tracked`` fixes the ε-terms to extend with (they must be closed and
    mention no parameters); by default ``tracked_terms`` random ones are drawn.

    Raises:
        RuntimeError: if no attempt yields a valid model.
    """
    rng = random.Random(seed)
    signature = {"P": 1, "Q": 1, "C": 0}
    for attempt in range(attempts):
        base = strictify_domains(random_tree_model(rng, max_worlds, signature=signature))
        root_names = sorted(p.name for p in base.domains[base.roots()[0]]
                            if isinstance(p, Param))
        terms = FormulaGenerator(rng.randrange(1 << 30), signature, root_names,
                                 eps_nesting=2, quantifiers=False)
        chosen = list(tracked) if tracked is not None else [
            terms.eps_term(depth=2) for _ in range(tracked_terms)]
        try:
            model = extend_with_epsilon(base, chosen)
        except PreconditionViolation as exc:
            logger.debug("Attempt %d for seed %d: %s", attempt, seed, exc)
            continue
        if validate_model(model).ok:
            return model
    raise RuntimeError(f"no valid ε⊥-model for seed {seed}")


def random_term_model(seed: int, max_worlds: int = 3) -> KripkeEpsilonModel:
    """A term-flavored model without tracked ε-terms."""
    return random_tree_model(random.Random(seed), max_worlds, flavor=Flavor.TERM)


def model_fleet(seed: int = 0, size: int = 12,
                tracked: Optional[Sequence[Eps]] = None) -> List[KripkeEpsilonModel]:
    """``size`` validated models, alternating ε⊥ and term flavor.

    With ``tracked`` every model interprets those ε-terms; the term-flavored
    ones are then read off ε⊥-models with as_term_model.
    """
    fleet = []
    for index in range(size):
        if index % 2 == 0:
            fleet.append(random_epsbot_model(seed + index, tracked=tracked))
        elif tracked is not None:
            fleet.append(as_term_model(random_epsbot_model(seed + index, tracked=tracked)))
        else:
            fleet.append(random_term_model(seed + index))
    return fleet


def enumerate_epsbot_models(tracked: Eps, max_worlds: int = 2, max_elements: int = 3,
                            predicate: str = "P") -> Iterator[KripkeEpsilonModel]:
    """Every ε⊥-model candidate over one unary predicate, unvalidated.

    Frames are a single world, a two-world chain and two incomparable
    worlds; the domains cover d1..dn exactly and ``tracked`` gets every
    possible value at every world.
    """
    frames: List[Tuple[Tuple[World, ...], frozenset]] = [(("w0",), frozenset())]
    if max_worlds >= 2:
        frames.append((("w0", "w1"), frozenset({("w0", "w1")})))
        frames.append((("w0", "w1"), frozenset()))
    for count in range(1, max_elements + 1):
        elements = [Param(f"d{i}") for i in range(1, count + 1)]
        subsets = [frozenset(c) for r in range(1, count + 1)
                   for c in itertools.combinations(elements, r)]
        for worlds, order in frames:
            for domains in itertools.product(subsets, repeat=len(worlds)):
                if frozenset().union(*domains) != frozenset(elements):
                    continue
                if any(not domains[worlds.index(a)] <= domains[worlds.index(b)]
                       for a, b in order):
                    continue
                yield from _fill(worlds, order, dict(zip(worlds, domains)), elements,
                                 tracked, predicate)


def _fill(worlds, order, domains, elements, tracked, predicate) -> Iterator[KripkeEpsilonModel]:
    facts_per_world = []
    for world in worlds:
        members = sorted(domains[world], key=lambda p: p.name)
        facts_per_world.append([frozenset(Atom(predicate, (e,)) for e in chosen)
                                for r in range(len(members) + 1)
                                for chosen in itertools.combinations(members, r)])
    for facts in itertools.product(*facts_per_world):
        atoms = dict(zip(worlds, facts))
        if any(not atoms[a] <= atoms[b] for a, b in order):
            continue
        for values in itertools.product(elements, repeat=len(worlds)):
            yield KripkeEpsilonModel(
                worlds=worlds,
                order=order,
                domains=domains,
                atoms=atoms,
                flavor=Flavor.EPSBOT,
                valuation={(w, tracked): v for w, v in zip(worlds, values)},
                tracked=frozenset({tracked}),
                element_order=tuple(elements),
            )
