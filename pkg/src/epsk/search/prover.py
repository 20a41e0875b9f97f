"""Bounded backward proof search producing kernel derivations.

The search is LJ-style over single-succedent sequents: invertible rules are
applied eagerly and without backtracking, the remaining rules are tried in
canonical order with loop checking on the current branch. Definedness
cuts are tried last when the cut policy admits them.
"""

import logging
from dataclasses import replace
from typing import FrozenSet, List, Optional

from ..core.checker import rename_param
from ..core.kernel import CutPolicy, Derivation
from ..core.printer import canonical, to_text
from ..core.syntax import (
    BOT,
    TOP,
    And,
    Eps,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Param,
    Sequent,
    Term,
    definedness_formula,
    eps_degree,
    eps_terms,
    fresh_name,
    free_params,
    instantiate,
    term_of_definedness,
)
from .saturation import BudgetExhausted, SearchConfig

logger = logging.getLogger(__name__)

Context = FrozenSet[Formula]


def _sequent(gamma: Context, goal: Optional[Formula]) -> Sequent:
    return Sequent(gamma, frozenset() if goal is None else frozenset({goal}))


class ProofSearch:
    """Depth-first search for a derivation of one sequent."""

    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.steps = 0
        self.cut_allowed = cfg.epsilon and cfg.cut_policy is not CutPolicy.NONE

    def prove(self, sequent: Sequent) -> Optional[Derivation]:
        """A derivation of ``sequent`` or None.

        A sequent with several succedent formulas is proved from one of
        them and widened (the result needs the multiple-succedent kernel).

        Raises:
            BudgetExhausted: the step budget ran out.
        """
        gamma = sequent.antecedent
        if len(sequent.succedent) <= 1:
            return self._search(gamma, sequent.goal, frozenset(), frozenset())
        for goal in canonical(sequent.succedent):
            found = self._search(gamma, goal, frozenset(), frozenset())
            if found is not None:
                return widen(found, sequent.succedent - {goal})
        return None

    # -- search ------------------------------------------------------------------

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.cfg.step_budget:
            raise BudgetExhausted(f"proof search stopped after {self.cfg.step_budget} steps")

    def _search(self, gamma: Context, goal: Optional[Formula], history: frozenset,
                cuts: FrozenSet[Term]) -> Optional[Derivation]:
        self._tick()
        key = (gamma, goal)
        if key in history or len(gamma) > self.cfg.formula_budget:
            return None
        history = history | {key}
        conclusion = _sequent(gamma, goal)

        if goal is not None and goal in gamma:
            return Derivation(conclusion, "Ax")
        if BOT in gamma:
            return Derivation(conclusion, "AxBot")
        if goal == TOP:
            return Derivation(conclusion, "AxTop")

        def search(context: Context, target: Optional[Formula]) -> Optional[Derivation]:
            return self._search(context, target, history, cuts)

        left = self._invertible_left(gamma, goal, conclusion, search)
        if left is not False:
            return left  # type: ignore[return-value]
        right = self._invertible_right(gamma, goal, conclusion, search)
        if right is not False:
            return right  # type: ignore[return-value]
        found = self._choices(gamma, goal, conclusion, search)
        if found is None and self.cut_allowed:
            found = self._cuts(gamma, goal, conclusion, history, cuts)
        return found

    def _invertible_left(self, gamma, goal, conclusion, search):
        """Result of the first invertible left rule, False if none applies."""
        for f in canonical(gamma):
            rest = gamma - {f}
            if isinstance(f, And):
                premise = search(rest | {f.left, f.right}, goal)
                return premise and Derivation(conclusion, "AndL", (premise,))
            if isinstance(f, Or):
                first = search(rest | {f.left}, goal)
                second = first and search(rest | {f.right}, goal)
                return second and Derivation(conclusion, "OrL", (first, second))
            if isinstance(f, Exists):
                if self.cfg.epsilon:
                    # e↓ is only ever used as a guard
                    if term_of_definedness(f) is not None:
                        continue
                    term = Eps(f.var, f.body)
                    instance = instantiate(f.body, term)
                    if self.cfg.augmented:
                        added = {instance, definedness_formula(term)}
                        context = rest
                    else:
                        added = {instance}
                        context = gamma
                    if added <= gamma:
                        continue
                    premise = search(context | added, goal)
                    return premise and Derivation(conclusion, "ExLEps", (premise,))
                eigen = fresh_name(free_params(conclusion))
                premise = search(rest | {instantiate(f.body, Param(eigen))}, goal)
                return premise and Derivation(conclusion, "ExL", (premise,), eigen=eigen)
        return False

    def _invertible_right(self, gamma, goal, conclusion, search):
        if isinstance(goal, And):
            first = search(gamma, goal.left)
            second = first and search(gamma, goal.right)
            return second and Derivation(conclusion, "AndR", (first, second))
        if isinstance(goal, Imp):
            premise = search(gamma | {goal.left}, goal.right)
            return premise and Derivation(conclusion, "ImpR", (premise,))
        if isinstance(goal, Forall):
            eigen = fresh_name(free_params(conclusion))
            premise = search(gamma, instantiate(goal.body, Param(eigen)))
            return premise and Derivation(conclusion, "AllR", (premise,), eigen=eigen)
        return False

    def witnesses(self, gamma: Context, goal: Optional[Formula]) -> List[Term]:
        """Candidate instantiation terms, those with trivial guards first."""
        sequent = _sequent(gamma, goal)
        terms: List[Term] = [Param(n) for n in sorted(free_params(sequent))]
        if not terms:
            terms.append(Param(fresh_name(())))
        if self.cfg.epsilon:
            eps = [t for t in canonical(eps_terms(sequent))
                   if eps_degree(t) <= self.cfg.eps_nesting]
            terms += [t for t in eps if definedness_formula(t) in gamma]
            terms += [t for t in eps if definedness_formula(t) not in gamma]
        return terms

    def _guarded(self, gamma: Context, term: Term, search) -> Optional[tuple]:
        """Guard premises for ``term``: () if trivial, None if unprovable."""
        guard = definedness_formula(term)
        if guard == TOP:
            return ()
        side = search(gamma, guard)
        return None if side is None else (side,)

    def _choices(self, gamma, goal, conclusion, search) -> Optional[Derivation]:
        if isinstance(goal, Or):
            for rule, part in (("OrR1", goal.left), ("OrR2", goal.right)):
                premise = search(gamma, part)
                if premise is not None:
                    return Derivation(conclusion, rule, (premise,))
        if isinstance(goal, Exists):
            for term in self.witnesses(gamma, goal):
                guards = self._guarded(gamma, term, search)
                if guards is None:
                    continue
                main = search(gamma, instantiate(goal.body, term))
                if main is not None:
                    return Derivation(conclusion, "ExR", guards + (main,), witness=term)
        for f in canonical(gamma):
            if isinstance(f, Imp) and f.right not in gamma:
                minor = search(gamma, f.left)
                major = minor and search((gamma - {f}) | {f.right}, goal)
                if major:
                    return Derivation(conclusion, "ImpL", (minor, major))
        for f in canonical(gamma):
            if not isinstance(f, Forall):
                continue
            terms = self.witnesses(gamma, goal)
            used = sum(1 for t in terms if instantiate(f.body, t) in gamma)
            for term in terms:
                if used >= self.cfg.instantiation_depth:
                    break
                instance = instantiate(f.body, term)
                if instance in gamma:
                    continue
                used += 1
                guards = self._guarded(gamma, term, search)
                if guards is None:
                    continue
                main = search(gamma | {instance}, goal)
                if main is not None:
                    return Derivation(conclusion, "AllL", guards + (main,), witness=term)
        return None

    def _cuts(self, gamma, goal, conclusion, history, cuts) -> Optional[Derivation]:
        for term in canonical(eps_terms(conclusion)):
            cut = definedness_formula(term)
            if term in cuts or cut in gamma or eps_degree(term) > self.cfg.eps_nesting:
                continue
            left = self._search(gamma, cut, history, cuts | {term})
            if left is None:
                continue
            right = self._search(gamma | {cut}, goal, history, cuts | {term})
            if right is not None:
                logger.debug("Definedness cut on %s", to_text(term))
                return Derivation(conclusion, "Cut", (left, right), cut_formula=cut)
        return None


# Premises that keep their own succedent when the conclusion is widened.
_FIXED = {"ImpR": (0,), "AllR": (0,), "ImpL": (0,), "Cut": (0,)}


def widen(tree: Derivation, extra: FrozenSet[Formula]) -> Derivation:
    """Add ``extra`` to the succedent of ``tree`` (multiple-succedent kernel)."""
    if not extra:
        return tree
    clash = free_params(extra)
    if tree.eigen is not None and tree.eigen in clash:
        fresh = fresh_name(clash | free_params([n.conclusion for _, n in tree.walk()]),
                           tree.eigen)
        tree = rename_param(tree, tree.eigen, fresh)
    fixed = _FIXED.get(tree.rule, ())
    if tree.rule in ("ExR", "AllL") and len(tree.premises) == 2:
        fixed = (0,)
    premises = tuple(p if i in fixed else widen(p, extra)
                     for i, p in enumerate(tree.premises))
    return replace(tree, conclusion=Sequent(tree.conclusion.antecedent,
                                            tree.conclusion.succedent | extra),
                   premises=premises)
