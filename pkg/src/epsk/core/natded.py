"""NJε: natural deduction in sequent style (Γ ⇒ A, contexts shared)."""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from .checker import BaseChecker, CheckReport, Outcome, ProofTree, ViolationCode
from .kernel import EpsMode, instance_at, instances_of
from .printer import to_text
from .syntax import (
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
    Term,
    definedness_formula,
    instantiate,
)

logger = logging.getLogger(__name__)

NJ_RULES = (
    "Assume", "TopI", "AndI", "AndE1", "AndE2", "OrI1", "OrI2", "OrE", "ImpI", "ImpE",
    "BotE", "AllI", "AllEG", "ExIG", "ExInst", "ExDef",
)


@dataclass(frozen=True)
class NJDerivation(ProofTree):
    """Natural deduction tree; each conclusion reads "goal from antecedent"."""


class NJChecker(BaseChecker):
    mismatch = ViolationCode.NJ_RULE_MISMATCH

    def __init__(self, eps_mode: EpsMode = EpsMode.AUGMENTED):
        super().__init__()
        self.eps_mode = eps_mode

    def rules(self) -> Dict[str, Callable[[ProofTree], Outcome]]:
        return {
            "Assume": self._assume,
            "TopI": self._top_i,
            "AndI": self._and_i,
            "AndE1": lambda node: self._and_e(node, "left"),
            "AndE2": lambda node: self._and_e(node, "right"),
            "OrI1": lambda node: self._or_i(node, "left"),
            "OrI2": lambda node: self._or_i(node, "right"),
            "OrE": self._or_e,
            "ImpI": self._imp_i,
            "ImpE": self._imp_e,
            "BotE": self._bot_e,
            "AllI": self._all_i,
            "AllEG": self._all_e,
            "ExIG": self._ex_i,
            "ExInst": self._ex_inst,
            "ExDef": self._ex_def,
        }

    def precheck(self, node: ProofTree) -> Outcome:
        if not node.conclusion.succedent and node.rule == "BotE":
            return None
        if len(node.conclusion.succedent) != 1:
            return (ViolationCode.SUCCEDENT_ARITY,
                    "a natural deduction sequent has exactly one conclusion"
                    " (only BotE may conclude nothing)")
        return None

    # -- helpers -------------------------------------------------------------

    @staticmethod
    def _goal(node: ProofTree) -> Formula:
        goal = node.conclusion.goal
        assert goal is not None
        return goal

    def _proves(self, premise: ProofTree, node: ProofTree, goal: Formula,
                extra: Optional[Formula] = None) -> bool:
        """``premise`` is Γ ⇒ goal (Γ, extra ⇒ goal with a hypothesis)."""
        context = node.conclusion.antecedent
        if extra is not None:
            context = context | {extra}
        return (premise.conclusion.antecedent == context
                and premise.conclusion.succedent == {goal})

    def _premise_goal(self, premise: ProofTree, node: ProofTree) -> Optional[Formula]:
        if premise.conclusion.antecedent != node.conclusion.antecedent:
            return None
        return premise.conclusion.goal

    def _no(self, message: str) -> Outcome:
        return self.mismatch, message

    def _guard(self, node: ProofTree, term: Optional[Term],
               side: Optional[ProofTree]) -> Outcome:
        guard = TOP if term is None else definedness_formula(term)
        if side is None:
            if guard == TOP:
                return None
            return (ViolationCode.MISSING_DEFINEDNESS_PREMISE,
                    f"no premise deriving the definedness of {to_text(term)}")
        if self._proves(side, node, guard):
            return None
        return self._no(f"first premise is not Γ => {to_text(guard)}")

    # -- rules ---------------------------------------------------------------

    def _assume(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 0)
        if bad:
            return bad
        if self._goal(node) in node.conclusion.antecedent:
            return None
        return self._no("the conclusion is not among the assumptions")

    def _top_i(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 0)
        if bad:
            return bad
        return None if self._goal(node) == TOP else self._no("TopI concludes top")

    def _and_i(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 2)
        if bad:
            return bad
        goal = self._goal(node)
        if (isinstance(goal, And) and self._proves(node.premises[0], node, goal.left)
                and self._proves(node.premises[1], node, goal.right)):
            return None
        return self._no("premises do not prove both conjuncts")

    def _and_e(self, node: ProofTree, side: str) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad
        major = self._premise_goal(node.premises[0], node)
        if isinstance(major, And) and getattr(major, side) == self._goal(node):
            return None
        return self._no(f"premise is not a conjunction with {side} part the conclusion")

    def _or_i(self, node: ProofTree, side: str) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad
        goal = self._goal(node)
        if isinstance(goal, Or) and self._proves(node.premises[0], node, getattr(goal, side)):
            return None
        return self._no(f"premise does not prove the {side} disjunct")

    def _or_e(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 3)
        if bad:
            return bad
        major = self._premise_goal(node.premises[0], node)
        goal = self._goal(node)
        if (isinstance(major, Or)
                and self._proves(node.premises[1], node, goal, major.left)
                and self._proves(node.premises[2], node, goal, major.right)):
            return None
        return self._no("premises are not a disjunction and its two cases")

    def _imp_i(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad
        goal = self._goal(node)
        if isinstance(goal, Imp) and self._proves(node.premises[0], node, goal.right, goal.left):
            return None
        return self._no("premise does not discharge the antecedent of the implication")

    def _imp_e(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 2)
        if bad:
            return bad
        major = self._premise_goal(node.premises[0], node)
        if (isinstance(major, Imp) and major.right == self._goal(node)
                and self._proves(node.premises[1], node, major.left)):
            return None
        return self._no("premises are not A -> B and A")

    def _bot_e(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad
        return None if self._proves(node.premises[0], node, BOT) else self._no("premise is not Γ => bot")

    def _all_i(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad
        goal = self._goal(node)
        if not isinstance(goal, Forall):
            return self._no("AllI concludes a universal formula")
        premise = node.premises[0]
        def attempt(eigen: str) -> Outcome:
            if self._proves(premise, node, instantiate(goal.body, Param(eigen))):
                return self.eigen_outcome(node, eigen, [node.conclusion])
            return self._no("premise is not an instance of the conclusion")

        return self.first("eigen", ((e, attempt(e))
                                    for e in self.eigen_candidates(node, premise.conclusion)))

    def _all_e(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1, 2)
        if bad:
            return bad
        major = self._premise_goal(node.premises[-1], node)
        side = node.premises[0] if len(node.premises) == 2 else None
        if not isinstance(major, Forall):
            return self._no("last premise is not Γ => forall x. A")
        terms = [node.witness] if node.witness is not None else instances_of(
            major.body, [self._goal(node)])
        def attempt(term: Optional[Term]) -> Outcome:
            if instance_at(major.body, term) != self._goal(node):
                return self._no("conclusion is not an instance of the premise")
            return self._guard(node, term, side)

        return self.first("term", ((t, attempt(t)) for t in terms))

    def _ex_i(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1, 2)
        if bad:
            return bad
        goal = self._goal(node)
        main = node.premises[-1]
        side = node.premises[0] if len(node.premises) == 2 else None
        if not isinstance(goal, Exists) or main.conclusion.antecedent != node.conclusion.antecedent:
            return self._no("ExIG concludes Γ => exists x. A from Γ => A(t)")
        terms = [node.witness] if node.witness is not None else instances_of(
            goal.body, main.conclusion.succedent)
        def attempt(term: Optional[Term]) -> Outcome:
            if main.conclusion.succedent != {instance_at(goal.body, term)}:
                return self._no("premise is not an instance of the conclusion")
            return self._guard(node, term, side)

        return self.first("term", ((t, attempt(t)) for t in terms))

    def _ex_inst(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad
        major = self._premise_goal(node.premises[0], node)
        if isinstance(major, Exists) and instantiate(
                major.body, Eps(major.var, major.body)) == self._goal(node):
            return None
        return self._no("ExInst concludes A(eps x. A) from exists x. A")

    def _ex_def(self, node: ProofTree) -> Outcome:
        if self.eps_mode is not EpsMode.AUGMENTED:
            return self._no("ExDef is available in augmented mode only")
        bad = self.arity(node, 1)
        if bad:
            return bad
        major = self._premise_goal(node.premises[0], node)
        if isinstance(major, Exists) and definedness_formula(
                Eps(major.var, major.body)) == self._goal(node):
            return None
        return self._no("ExDef concludes the definedness of eps x. A from exists x. A")


def check_nj(derivation: ProofTree, eps_mode: EpsMode = EpsMode.AUGMENTED) -> CheckReport:
    """Check every node of an NJε derivation."""
    return NJChecker(eps_mode).check(derivation)
