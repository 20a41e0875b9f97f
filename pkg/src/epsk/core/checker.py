"""Proof trees and the machinery shared by the sequent and NJ checkers."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from enum import Enum
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Tuple,
    TypeVar,
)

from .syntax import (
    Formula,
    Param,
    Sequent,
    Term,
    fresh_name,
    free_params,
    substitute,
    substitute_term,
)

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]


class ViolationCode(str, Enum):
    """Per-node error codes reported by the checkers."""

    MISSING_DEFINEDNESS_PREMISE = "MissingDefinednessPremise"
    EIGENVARIABLE_VIOLATION = "EigenvariableViolation"
    CUT_POLICY_VIOLATION = "CutPolicyViolation"
    RULE_MISMATCH = "RuleMismatch"
    EPSILON_TERM_IN_IPC = "EpsilonTermInIPC"
    NJ_RULE_MISMATCH = "NJRuleMismatch"
    SUCCEDENT_ARITY = "SuccedentArity"


@dataclass(frozen=True)
class Violation:
    path: Path
    code: ViolationCode
    message: str

    def to_dict(self) -> Dict[str, object]:
        return {"path": list(self.path), "code": self.code.value, "message": self.message}


@dataclass(frozen=True)
class CheckReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> List[ViolationCode]:
        return [v.code for v in self.violations]

    def at(self, path: Path) -> List[ViolationCode]:
        return [v.code for v in self.violations if v.path == path]

    def to_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


@dataclass(frozen=True)
class ProofTree:
    """A rule-labelled tree of sequents.

    ``premises`` are ordered as the rule lists them; ``witness`` is the
    instantiating term of a quantifier rule, ``eigen`` the fresh
    parameter of an eigenvariable rule.
    """

    conclusion: Sequent
    rule: str
    premises: Tuple["ProofTree", ...] = ()
    witness: Optional[Term] = None
    eigen: Optional[str] = None
    cut_formula: Optional[Formula] = None

    def walk(self, path: Path = ()) -> Iterator[Tuple[Path, "ProofTree"]]:
        """Pre-order traversal yielding (path, node)."""
        yield path, self
        for index, premise in enumerate(self.premises):
            yield from premise.walk(path + (index,))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def rules(self) -> FrozenSet[str]:
        return frozenset(node.rule for _, node in self.walk())

    def node(self, path: Path) -> "ProofTree":
        current = self
        for index in path:
            current = current.premises[index]
        return current

    @property
    def end_sequent(self) -> Sequent:
        return self.conclusion


T = TypeVar("T", bound=ProofTree)


@dataclass(frozen=True)
class Resolution:
    """How a correct node instantiates its rule."""

    principal: Optional[Formula] = None
    term: Optional[Term] = None
    eigen: Optional[str] = None

# A rule check returns None when the node is a correct instance, else a
# (code, message) pair.
Outcome = Optional[Tuple[ViolationCode, str]]


def best_outcome(outcomes: Iterable[Outcome], mismatch: ViolationCode) -> Outcome:
    """Combine the outcomes of alternative readings of one node.

    Any successful reading wins; otherwise a specific code is preferred
    over the generic mismatch.
    """
    fallback: Outcome = None
    seen = False
    for outcome in outcomes:
        seen = True
        if outcome is None:
            return None
        if fallback is None or (fallback[0] == mismatch and outcome[0] != mismatch):
            fallback = outcome
    if not seen:
        return mismatch, "no principal formula fits the rule"
    return fallback


class BaseChecker(ABC):
    """Walks a tree and collects the violations of every node."""

    mismatch: ViolationCode = ViolationCode.RULE_MISMATCH

    def __init__(self) -> None:
        self._found: Dict[str, object] = {}

    def resolve(self, node: ProofTree) -> Optional[Resolution]:
        """The principal formula, term and eigenvariable of a correct node."""
        self._found = {}
        if self.check_node(node):
            return None
        return Resolution(**self._found)  # type: ignore[arg-type]

    def check(self, tree: ProofTree) -> CheckReport:
        violations: List[Violation] = []
        for path, node in tree.walk():
            for code, message in self.check_node(node):
                violations.append(Violation(path, code, message))
        if violations:
            logger.debug("%s rejected %d node(s)", type(self).__name__, len(violations))
        return CheckReport(tuple(violations))

    def check_node(self, node: ProofTree) -> List[Tuple[ViolationCode, str]]:
        outcome = self.precheck(node)
        if outcome is None:
            handler = self.rules().get(node.rule)
            if handler is None:
                outcome = self.mismatch, f"unknown rule {node.rule!r}"
            else:
                outcome = handler(node)
        return [] if outcome is None else [outcome]

    def precheck(self, node: ProofTree) -> Outcome:
        """Node-level conditions checked before the rule itself."""
        return None

    @abstractmethod
    def rules(self) -> Dict[str, Callable[[ProofTree], Outcome]]:
        """Rule tag to handler."""

    # -- helpers shared by rule handlers -------------------------------------

    def first(self, slot: str, attempts: Iterable[Tuple[object, Outcome]]) -> Outcome:
        """First successful attempt, recorded under ``slot`` for resolve()."""
        outcomes: List[Outcome] = []
        for value, outcome in attempts:
            if outcome is None:
                self._found[slot] = value
                return None
            outcomes.append(outcome)
        return best_outcome(outcomes, self.mismatch)

    def arity(self, node: ProofTree, *counts: int) -> Outcome:
        if len(node.premises) not in counts:
            expected = " or ".join(str(c) for c in counts)
            return self.mismatch, f"{node.rule} takes {expected} premise(s), got {len(node.premises)}"
        return None

    def eigen_outcome(self, node: ProofTree, eigen: str,
                      context: Iterable[object]) -> Outcome:
        if eigen in free_params(list(context)):
            return (ViolationCode.EIGENVARIABLE_VIOLATION,
                    f"eigenvariable {eigen} occurs free in the conclusion")
        return None

    @staticmethod
    def eigen_candidates(node: ProofTree, premise: Sequent) -> List[str]:
        if node.eigen is not None:
            return [node.eigen]
        fresh = free_params(premise) - free_params(node.conclusion)
        return sorted(fresh) or sorted(free_params(premise))


def rename_param(tree: T, old: str, new: str) -> T:
    """Rename parameter ``old`` to ``new`` throughout ``tree``."""
    if old == new:
        return tree
    target = Param(new)

    def formula(f: Formula) -> Formula:
        return substitute(f, old, target)

    return replace(
        tree,
        conclusion=tree.conclusion.map(formula),
        premises=tuple(rename_param(p, old, new) for p in tree.premises),
        witness=None if tree.witness is None else substitute_term(tree.witness, old, target),
        eigen=new if tree.eigen == old else tree.eigen,
        cut_formula=None if tree.cut_formula is None else formula(tree.cut_formula),
    )


def weaken(tree: T, extra: Iterable[Formula]) -> T:
    """Add ``extra`` to every antecedent, renaming clashing eigenvariables."""
    extra = frozenset(extra)
    if not extra:
        return tree
    avoid = free_params(extra)
    local = free_params([p.conclusion for p in tree.premises]) - free_params(tree.conclusion)
    if tree.eigen is not None:
        local |= {tree.eigen}
    for name in sorted(local & avoid):
        used = avoid | free_params([n.conclusion for _, n in tree.walk()])
        tree = rename_param(tree, name, fresh_name(used, name))
    return replace(
        tree,
        conclusion=tree.conclusion.weaken(extra),
        premises=tuple(weaken(p, extra) for p in tree.premises),
    )


__all__ = [
    "BaseChecker",
    "CheckReport",
    "Outcome",
    "Path",
    "ProofTree",
    "Resolution",
    "Violation",
    "ViolationCode",
    "best_outcome",
    "rename_param",
    "weaken",
]
