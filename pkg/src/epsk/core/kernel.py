"""Trusted checker for IPCε (and plain IPC) sequent derivations."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional

from ..config.settings import DEFAULT_CALCULUS, DEFAULT_CUT_POLICY, DEFAULT_EPS_MODE
from .checker import (
    BaseChecker,
    CheckReport,
    Outcome,
    ProofTree,
    ViolationCode,
)
from .printer import canonical, to_text
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
    Sequent,
    Term,
    contains_eps,
    definedness_formula,
    eps_terms,
    instantiate,
    match_instance,
    term_of_definedness,
)

logger = logging.getLogger(__name__)

SEQUENT_RULES = (
    "Ax", "AxBot", "AxTop", "AndR", "AndL", "OrL", "OrR1", "OrR2", "ImpL", "ImpR",
    "AllR", "AllL", "ExR", "ExLEps", "ExL", "Cut",
)


class Calculus(str, Enum):
    IPC = "ipc"
    IPC_EPS = "ipce"


class EpsMode(str, Enum):
    """Whether ∃ε⇒ deposits only A(εxA), or also εxA↓."""

    LITERAL = "literal"
    AUGMENTED = "augmented"


class Succedents(str, Enum):
    SINGLE = "single"
    MULTIPLE = "multiple"


class CutPolicy(str, Enum):
    ANY = "any"
    DEFINEDNESS_ONLY = "definedness-only"
    NONE = "none"


@dataclass(frozen=True)
class CalculusConfig:
    calculus: Calculus = Calculus(DEFAULT_CALCULUS)
    eps_mode: EpsMode = EpsMode(DEFAULT_EPS_MODE)
    succedents: Succedents = Succedents.SINGLE
    cut_policy: CutPolicy = CutPolicy(DEFAULT_CUT_POLICY)

    @property
    def single(self) -> bool:
        return self.succedents is Succedents.SINGLE

    @property
    def epsilon(self) -> bool:
        return self.calculus is Calculus.IPC_EPS


@dataclass(frozen=True)
class Derivation(ProofTree):
    """A sequent-calculus derivation; rule tags are listed in SEQUENT_RULES."""


def instances_of(body: Formula, formulas: Iterable[Formula]) -> List[Optional[Term]]:
    """Terms t with instantiate(body, t) among ``formulas`` (None: vacuous)."""
    found: List[Optional[Term]] = []
    for formula in canonical(formulas):
        matched, term = match_instance(body, formula)
        if matched and term not in found:
            found.append(term)
    return found


def instance_at(body: Formula, term: Optional[Term]) -> Formula:
    return instantiate(body, term if term is not None else Param("a"))


class SequentChecker(BaseChecker):
    """Checks every node of a Derivation against one CalculusConfig."""

    def __init__(self, config: Optional[CalculusConfig] = None):
        super().__init__()
        self.config = config or CalculusConfig()

    def rules(self) -> Dict[str, Callable[[ProofTree], Outcome]]:
        return {
            "Ax": self._ax,
            "AxBot": self._ax_bot,
            "AxTop": self._ax_top,
            "AndR": self._and_r,
            "AndL": self._and_l,
            "OrL": self._or_l,
            "OrR1": self._or_r1,
            "OrR2": self._or_r2,
            "ImpL": self._imp_l,
            "ImpR": self._imp_r,
            "AllR": self._all_r,
            "AllL": self._all_l,
            "ExR": self._ex_r,
            "ExLEps": self._ex_l_eps,
            "ExL": self._ex_l,
            "Cut": self._cut,
        }

    def precheck(self, node: ProofTree) -> Outcome:
        if not self.config.epsilon:
            extras = [f for f in (node.witness, node.cut_formula) if f is not None]
            if contains_eps(node.conclusion) or contains_eps(extras):
                return ViolationCode.EPSILON_TERM_IN_IPC, "ε-term in an IPC derivation"
        if self.config.single and len(node.conclusion.succedent) > 1:
            return (ViolationCode.SUCCEDENT_ARITY,
                    f"{len(node.conclusion.succedent)} succedent formulas in single mode")
        return None

    # -- sequent shape helpers ---------------------------------------------

    def _left_ok(self, premise: ProofTree, node: ProofTree, principal: Formula,
                 added: Iterable[Formula]) -> bool:
        """Premise of a left rule: principal kept or dropped, ``added`` joined."""
        gamma = node.conclusion.antecedent
        added = frozenset(added)
        return (premise.conclusion.antecedent in (gamma | added, (gamma - {principal}) | added)
                and premise.conclusion.succedent == node.conclusion.succedent)

    def _right_ok(self, premise: ProofTree, node: ProofTree, principal: Formula,
                  added: Iterable[Formula]) -> bool:
        """Premise of a right rule over the unchanged antecedent."""
        if premise.conclusion.antecedent != node.conclusion.antecedent:
            return False
        added = frozenset(added)
        succedent = premise.conclusion.succedent
        if self.config.single:
            return succedent == added
        delta = node.conclusion.succedent
        return succedent in (added, delta | added, (delta - {principal}) | added)

    def _side_ok(self, premise: ProofTree, node: ProofTree, formula: Formula,
                 antecedents: Iterable[FrozenSet[Formula]] = ()) -> bool:
        """Side premise Γ ⇒ formula (Γ ⇒ Δ, formula in multiple mode)."""
        allowed = list(antecedents) or [node.conclusion.antecedent]
        if premise.conclusion.antecedent not in allowed:
            return False
        succedent = premise.conclusion.succedent
        if self.config.single:
            return succedent == {formula}
        return succedent in ({formula}, node.conclusion.succedent | {formula})

    def _principals(self, formulas: FrozenSet[Formula], kind: type) -> List[Formula]:
        return [f for f in canonical(formulas) if isinstance(f, kind)]

    def _try(self, candidates: Iterable[Formula],
             check: Callable[[Formula], Outcome]) -> Outcome:
        return self.first("principal", ((f, check(f)) for f in candidates))

    def _no(self, message: str) -> Outcome:
        return self.mismatch, message

    # -- axioms ------------------------------------------------------------

    def _ax(self, node: ProofTree) -> Outcome:
        seq = node.conclusion
        if node.premises:
            return self._no("axioms take no premises")
        if seq.antecedent & seq.succedent:
            return None
        return self._no("no formula occurs on both sides")

    def _ax_bot(self, node: ProofTree) -> Outcome:
        if node.premises:
            return self._no("axioms take no premises")
        return None if BOT in node.conclusion.antecedent else self._no("bot is not assumed")

    def _ax_top(self, node: ProofTree) -> Outcome:
        if node.premises:
            return self._no("axioms take no premises")
        return None if TOP in node.conclusion.succedent else self._no("top is not claimed")

    # -- propositional rules -------------------------------------------------

    def _and_r(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 2)
        if bad:
            return bad

        def check(f: Formula) -> Outcome:
            assert isinstance(f, And)
            left, right = node.premises
            if self._right_ok(left, node, f, {f.left}) and self._right_ok(right, node, f, {f.right}):
                return None
            return self._no(f"premises do not split {to_text(f)}")

        return self._try(self._principals(node.conclusion.succedent, And), check)

    def _or_r(self, node: ProofTree, side: str) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad

        def check(f: Formula) -> Outcome:
            if self._right_ok(node.premises[0], node, f, {getattr(f, side)}):
                return None
            return self._no(f"premise does not prove the {side} disjunct of {to_text(f)}")

        return self._try(self._principals(node.conclusion.succedent, Or), check)

    def _or_r1(self, node: ProofTree) -> Outcome:
        return self._or_r(node, "left")

    def _or_r2(self, node: ProofTree) -> Outcome:
        return self._or_r(node, "right")

    def _imp_r(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad
        premise = node.premises[0].conclusion

        def check(f: Formula) -> Outcome:
            assert isinstance(f, Imp)
            if (premise.antecedent == node.conclusion.antecedent | {f.left}
                    and premise.succedent == {f.right}):
                return None
            return self._no(f"premise is not {to_text(f.left)}, Γ => {to_text(f.right)}")

        return self._try(self._principals(node.conclusion.succedent, Imp), check)

    def _and_l(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad

        def check(f: Formula) -> Outcome:
            assert isinstance(f, And)
            if self._left_ok(node.premises[0], node, f, {f.left, f.right}):
                return None
            return self._no(f"premise does not unpack {to_text(f)}")

        return self._try(self._principals(node.conclusion.antecedent, And), check)

    def _or_l(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 2)
        if bad:
            return bad

        def check(f: Formula) -> Outcome:
            assert isinstance(f, Or)
            left, right = node.premises
            if self._left_ok(left, node, f, {f.left}) and self._left_ok(right, node, f, {f.right}):
                return None
            return self._no(f"premises do not split {to_text(f)}")

        return self._try(self._principals(node.conclusion.antecedent, Or), check)

    def _imp_l(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 2)
        if bad:
            return bad
        gamma = node.conclusion.antecedent

        def check(f: Formula) -> Outcome:
            assert isinstance(f, Imp)
            minor, major = node.premises
            if (self._side_ok(minor, node, f.left, [gamma, gamma - {f}])
                    and self._left_ok(major, node, f, {f.right})):
                return None
            return self._no(f"premises do not match {to_text(f)} on the left")

        return self._try(self._principals(gamma, Imp), check)

    # -- quantifier rules ----------------------------------------------------

    def _all_r(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1)
        if bad:
            return bad
        premise = node.premises[0]

        def check(f: Formula) -> Outcome:
            assert isinstance(f, Forall)
            def attempt(eigen: str) -> Outcome:
                instance = instantiate(f.body, Param(eigen))
                if (premise.conclusion.antecedent == node.conclusion.antecedent
                        and premise.conclusion.succedent == {instance}):
                    return self.eigen_outcome(node, eigen, [node.conclusion])
                return self._no(f"premise is not Γ => {to_text(instance)}")

            return self.first("eigen", ((e, attempt(e))
                                        for e in self.eigen_candidates(node, premise.conclusion)))

        return self._try(self._principals(node.conclusion.succedent, Forall), check)

    def _definedness(self, node: ProofTree, term: Optional[Term],
                     side: Optional[ProofTree]) -> Outcome:
        """The guard premise Γ ⇒ t↓ of ⇒∃ and ∀⇒."""
        guard = TOP if term is None else definedness_formula(term)
        if side is None:
            if guard == TOP:
                return None
            return (ViolationCode.MISSING_DEFINEDNESS_PREMISE,
                    f"no premise deriving the definedness of {to_text(term)}")
        if self._side_ok(side, node, guard):
            return None
        return self._no(f"first premise is not Γ => {to_text(guard)}")

    def _witnesses(self, node: ProofTree, body: Formula,
                   formulas: Iterable[Formula]) -> List[Optional[Term]]:
        if node.witness is not None:
            return [node.witness]
        return instances_of(body, formulas)

    def _ex_r(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1, 2)
        if bad:
            return bad
        main = node.premises[-1]
        side = node.premises[0] if len(node.premises) == 2 else None

        def check(f: Formula) -> Outcome:
            assert isinstance(f, Exists)
            def attempt(term: Optional[Term]) -> Outcome:
                if not self._right_ok(main, node, f, {instance_at(f.body, term)}):
                    return self._no(f"premise is not an instance of {to_text(f)}")
                return self._definedness(node, term, side)

            return self.first("term", ((t, attempt(t)) for t in
                                       self._witnesses(node, f.body, main.conclusion.succedent)))

        return self._try(self._principals(node.conclusion.succedent, Exists), check)

    def _all_l(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 1, 2)
        if bad:
            return bad
        main = node.premises[-1]
        side = node.premises[0] if len(node.premises) == 2 else None

        def check(f: Formula) -> Outcome:
            assert isinstance(f, Forall)
            def attempt(term: Optional[Term]) -> Outcome:
                if not self._left_ok(main, node, f, {instance_at(f.body, term)}):
                    return self._no(f"premise does not assume an instance of {to_text(f)}")
                return self._definedness(node, term, side)

            return self.first("term", ((t, attempt(t)) for t in
                                       self._witnesses(node, f.body, main.conclusion.antecedent)))

        return self._try(self._principals(node.conclusion.antecedent, Forall), check)

    def _ex_l_eps(self, node: ProofTree) -> Outcome:
        if not self.config.epsilon:
            return self._no("ExLEps is not a rule of IPC")
        bad = self.arity(node, 1)
        if bad:
            return bad
        premise = node.premises[0]
        augmented = self.config.eps_mode is EpsMode.AUGMENTED

        def check(f: Formula) -> Outcome:
            assert isinstance(f, Exists)
            term = Eps(f.var, f.body)
            instance = instantiate(f.body, term)
            if self._left_ok(premise, node, f, {instance}):
                return None
            if self._left_ok(premise, node, f, {instance, definedness_formula(term)}):
                if augmented:
                    return None
                return self._no("the definedness formula is deposited only in augmented mode")
            return self._no(f"premise does not assume {to_text(instance)}")

        return self._try(self._principals(node.conclusion.antecedent, Exists), check)

    def _ex_l(self, node: ProofTree) -> Outcome:
        if self.config.epsilon:
            return self._no("ExL is a rule of IPC only; use ExLEps")
        bad = self.arity(node, 1)
        if bad:
            return bad
        premise = node.premises[0]

        def check(f: Formula) -> Outcome:
            assert isinstance(f, Exists)
            def attempt(eigen: str) -> Outcome:
                if self._left_ok(premise, node, f, {instantiate(f.body, Param(eigen))}):
                    return self.eigen_outcome(node, eigen, [node.conclusion])
                return self._no(f"premise does not assume an instance of {to_text(f)}")

            return self.first("eigen", ((e, attempt(e))
                                        for e in self.eigen_candidates(node, premise.conclusion)))

        return self._try(self._principals(node.conclusion.antecedent, Exists), check)

    # -- cut -----------------------------------------------------------------

    def _cut(self, node: ProofTree) -> Outcome:
        bad = self.arity(node, 2)
        if bad:
            return bad
        left, right = node.premises
        if node.cut_formula is not None:
            candidates = [node.cut_formula]
        else:
            candidates = canonical(left.conclusion.succedent)

        def check(f: Formula) -> Outcome:
            if not (self._side_ok(left, node, f)
                    and right.conclusion.antecedent == node.conclusion.antecedent | {f}
                    and right.conclusion.succedent == node.conclusion.succedent):
                return self._no(f"premises do not cut on {to_text(f)}")
            return self._cut_policy(node, f)

        return self._try(candidates, check)

    def _cut_policy(self, node: ProofTree, formula: Formula) -> Outcome:
        policy = self.config.cut_policy
        if policy is CutPolicy.ANY:
            return None
        if policy is CutPolicy.NONE:
            return ViolationCode.CUT_POLICY_VIOLATION, "cuts are not admitted"
        term = term_of_definedness(formula)
        if term is not None and term in eps_terms(node.conclusion):
            return None
        return (ViolationCode.CUT_POLICY_VIOLATION,
                f"{to_text(formula)} is not the definedness formula of an ε-term "
                "of the conclusion")


def check_derivation(derivation: ProofTree,
                     config: Optional[CalculusConfig] = None) -> CheckReport:
    """Check every node of ``derivation``; never raises on bad proofs."""
    return SequentChecker(config).check(derivation)


def end_sequent(derivation: ProofTree) -> Sequent:
    return derivation.conclusion
