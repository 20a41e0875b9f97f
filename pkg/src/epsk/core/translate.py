"""Translations between IPCε sequent derivations and NJε derivations.

Sequent to NJ: right rules become introductions; a left rule becomes its
premise composed, through →I/→E, with eliminations that supply the new
antecedent formulas from the principal one. Cut is the same composition.

NJ to sequent: introductions become right rules; an elimination becomes a
cut of its major premise against the left rule for the eliminated
connective.
"""

import logging
from typing import Callable, Dict, FrozenSet, Optional

from .checker import ProofTree, Resolution, weaken
from .kernel import (
    Calculus,
    CalculusConfig,
    CutPolicy,
    Derivation,
    EpsMode,
    SequentChecker,
    Succedents,
    check_derivation,
    instance_at,
)
from .natded import NJChecker, NJDerivation, check_nj
from .printer import canonical, to_text
from .syntax import (
    BOT,
    And,
    Eps,
    EpskError,
    Exists,
    Forall,
    Formula,
    Imp,
    Sequent,
    definedness_formula,
)

logger = logging.getLogger(__name__)


class InputUnchecked(EpskError):
    """The derivation handed to a translation is not accepted by its checker."""


class TranslationError(EpskError):
    """The derivation uses a rule without a counterpart in the target system."""


def goal_of(sequent: Sequent) -> Formula:
    """The single conclusion of a sequent; an empty succedent reads as bot.

    Only inner nodes are read this way: a root with an empty succedent is
    closed by a final BotE that concludes nothing.
    """
    goal = sequent.goal
    return BOT if goal is None else goal


def _nj(context: FrozenSet[Formula], goal: Formula, rule: str, *premises: ProofTree,
        **extra: object) -> NJDerivation:
    return NJDerivation(Sequent(context, frozenset({goal})), rule, tuple(premises), **extra)  # type: ignore[arg-type]


class _SequentToNJ:
    def __init__(self, config: CalculusConfig):
        self.checker = SequentChecker(config)

    def translate(self, node: ProofTree) -> NJDerivation:
        resolution = self.checker.resolve(node)
        if resolution is None:
            raise InputUnchecked(f"node {node.rule} does not check")
        handler: Optional[Callable[[ProofTree, Resolution], NJDerivation]] = getattr(
            self, f"_{node.rule.lower()}", None)
        if handler is None:
            raise TranslationError(f"{node.rule} has no natural deduction counterpart")
        return handler(node, resolution)

    # -- composition -----------------------------------------------------------

    def _assume(self, context: FrozenSet[Formula], formula: Formula) -> NJDerivation:
        return _nj(context, formula, "Assume")

    def _compose(self, main: NJDerivation, providers: Dict[Formula, NJDerivation],
                 context: FrozenSet[Formula]) -> NJDerivation:
        """Discharge main's extra assumptions using proofs of them from ``context``."""
        goal = goal_of(main.conclusion)
        pending = canonical(main.conclusion.antecedent - context)
        current = main
        while pending:
            formula = pending.pop()
            provider = providers.get(formula)
            if provider is None:
                raise TranslationError(f"no elimination supplies {to_text(formula)}")
            rest = context | frozenset(pending)
            lifted = _nj(rest, Imp(formula, goal), "ImpI", current)
            current = _nj(rest, goal, "ImpE", lifted, weaken(provider, pending))
        return current

    def _left(self, node: ProofTree, premise: ProofTree,
              providers: Dict[Formula, NJDerivation]) -> NJDerivation:
        context = node.conclusion.antecedent
        return self._compose(weaken(self.translate(premise), context), providers, context)

    # -- axioms ----------------------------------------------------------------

    def _ax(self, node: ProofTree, _: Resolution) -> NJDerivation:
        return self._assume(node.conclusion.antecedent, goal_of(node.conclusion))

    def _axbot(self, node: ProofTree, _: Resolution) -> NJDerivation:
        context, goal = node.conclusion.antecedent, goal_of(node.conclusion)
        falsum = self._assume(context, BOT)
        return falsum if goal == BOT else _nj(context, goal, "BotE", falsum)

    def _axtop(self, node: ProofTree, _: Resolution) -> NJDerivation:
        return _nj(node.conclusion.antecedent, goal_of(node.conclusion), "TopI")

    # -- right rules -------------------------------------------------------------

    def _intro(self, rule: str) -> Callable[[ProofTree, Resolution], NJDerivation]:
        def handler(node: ProofTree, resolution: Resolution) -> NJDerivation:
            premises = [self.translate(p) for p in node.premises]
            return _nj(node.conclusion.antecedent, goal_of(node.conclusion), rule, *premises,
                       witness=resolution.term, eigen=resolution.eigen)
        return handler

    def _andr(self, node: ProofTree, r: Resolution) -> NJDerivation:
        return self._intro("AndI")(node, r)

    def _orr1(self, node: ProofTree, r: Resolution) -> NJDerivation:
        return self._intro("OrI1")(node, r)

    def _orr2(self, node: ProofTree, r: Resolution) -> NJDerivation:
        return self._intro("OrI2")(node, r)

    def _impr(self, node: ProofTree, r: Resolution) -> NJDerivation:
        return self._intro("ImpI")(node, r)

    def _allr(self, node: ProofTree, r: Resolution) -> NJDerivation:
        return self._intro("AllI")(node, r)

    def _exr(self, node: ProofTree, r: Resolution) -> NJDerivation:
        return self._intro("ExIG")(node, r)

    # -- left rules and cut ------------------------------------------------------

    def _andl(self, node: ProofTree, r: Resolution) -> NJDerivation:
        context, principal = node.conclusion.antecedent, r.principal
        assert isinstance(principal, And)
        major = self._assume(context, principal)
        providers = {
            principal.left: _nj(context, principal.left, "AndE1", major),
            principal.right: _nj(context, principal.right, "AndE2", major),
        }
        return self._left(node, node.premises[0], providers)

    def _orl(self, node: ProofTree, r: Resolution) -> NJDerivation:
        context, principal = node.conclusion.antecedent, r.principal
        cases = [weaken(self.translate(p), context) for p in node.premises]
        return _nj(context, goal_of(node.conclusion), "OrE",
                   self._assume(context, principal), *cases)

    def _impl(self, node: ProofTree, r: Resolution) -> NJDerivation:
        context, principal = node.conclusion.antecedent, r.principal
        assert isinstance(principal, Imp)
        minor = weaken(self.translate(node.premises[0]), context)
        consequent = _nj(context, principal.right, "ImpE",
                         self._assume(context, principal), minor)
        return self._left(node, node.premises[1], {principal.right: consequent})

    def _alll(self, node: ProofTree, r: Resolution) -> NJDerivation:
        context, principal = node.conclusion.antecedent, r.principal
        assert isinstance(principal, Forall)
        instance = instance_at(principal.body, r.term)
        guards = [self.translate(p) for p in node.premises[:-1]]
        provider = _nj(context, instance, "AllEG", *guards,
                       self._assume(context, principal), witness=r.term)
        return self._left(node, node.premises[-1], {instance: provider})

    def _exleps(self, node: ProofTree, r: Resolution) -> NJDerivation:
        context, principal = node.conclusion.antecedent, r.principal
        assert isinstance(principal, Exists)
        term = Eps(principal.var, principal.body)
        major = self._assume(context, principal)
        instance = instance_at(principal.body, term)
        guard = definedness_formula(term)
        providers = {
            instance: _nj(context, instance, "ExInst", major),
            guard: _nj(context, guard, "ExDef", major),
        }
        return self._left(node, node.premises[0], providers)

    def _exl(self, node: ProofTree, _: Resolution) -> NJDerivation:
        raise TranslationError("ExL (IPC eigenvariable rule) has no NJε counterpart")

    def _cut(self, node: ProofTree, r: Resolution) -> NJDerivation:
        context, formula = node.conclusion.antecedent, r.principal
        assert formula is not None
        lemma = self.translate(node.premises[0])
        return self._compose(self.translate(node.premises[1]), {formula: lemma}, context)


class _NJToSequent:
    def __init__(self, eps_mode: EpsMode):
        self.checker = NJChecker(eps_mode)

    def translate(self, node: ProofTree) -> Derivation:
        resolution = self.checker.resolve(node)
        if resolution is None:
            raise InputUnchecked(f"node {node.rule} does not check")
        handler = getattr(self, f"_{node.rule.lower()}")
        return handler(node, resolution)

    @staticmethod
    def _seq(context: FrozenSet[Formula], goal: Formula, rule: str, *premises: ProofTree,
             **extra: object) -> Derivation:
        return Derivation(Sequent(context, frozenset({goal})), rule, tuple(premises), **extra)  # type: ignore[arg-type]

    def _eliminate(self, node: ProofTree, major: ProofTree, build: Callable[
            [FrozenSet[Formula], Formula, Formula], Derivation]) -> Derivation:
        """Cut the major premise against a left rule on its formula."""
        context, goal = node.conclusion.antecedent, goal_of(node.conclusion)
        formula = goal_of(major.conclusion)
        right = build(context | {formula}, formula, goal)
        if formula in context:
            return right
        return self._seq(context, goal, "Cut", self.translate(major), right,
                         cut_formula=formula)

    def _simple(self, node: ProofTree, rule: str, r: Resolution) -> Derivation:
        return self._seq(node.conclusion.antecedent, goal_of(node.conclusion), rule,
                         *[self.translate(p) for p in node.premises],
                         witness=r.term, eigen=r.eigen)

    def _assume(self, node: ProofTree, r: Resolution) -> Derivation:
        return self._simple(node, "Ax", r)

    def _topi(self, node: ProofTree, r: Resolution) -> Derivation:
        return self._simple(node, "AxTop", r)

    def _andi(self, node: ProofTree, r: Resolution) -> Derivation:
        return self._simple(node, "AndR", r)

    def _ori1(self, node: ProofTree, r: Resolution) -> Derivation:
        return self._simple(node, "OrR1", r)

    def _ori2(self, node: ProofTree, r: Resolution) -> Derivation:
        return self._simple(node, "OrR2", r)

    def _impi(self, node: ProofTree, r: Resolution) -> Derivation:
        return self._simple(node, "ImpR", r)

    def _alli(self, node: ProofTree, r: Resolution) -> Derivation:
        return self._simple(node, "AllR", r)

    def _exig(self, node: ProofTree, r: Resolution) -> Derivation:
        return self._simple(node, "ExR", r)

    def _ande(self, node: ProofTree) -> Derivation:
        def build(context: FrozenSet[Formula], formula: Formula, goal: Formula) -> Derivation:
            assert isinstance(formula, And)
            unpacked = context | {formula.left, formula.right}
            return self._seq(context, goal, "AndL", self._seq(unpacked, goal, "Ax"))
        return self._eliminate(node, node.premises[0], build)

    def _ande1(self, node: ProofTree, _: Resolution) -> Derivation:
        return self._ande(node)

    def _ande2(self, node: ProofTree, _: Resolution) -> Derivation:
        return self._ande(node)

    def _ore(self, node: ProofTree, _: Resolution) -> Derivation:
        cases = [self.translate(p) for p in node.premises[1:]]

        def build(context: FrozenSet[Formula], formula: Formula, goal: Formula) -> Derivation:
            return self._seq(context, goal, "OrL", *cases)
        return self._eliminate(node, node.premises[0], build)

    def _impe(self, node: ProofTree, _: Resolution) -> Derivation:
        minor = self.translate(node.premises[1])

        def build(context: FrozenSet[Formula], formula: Formula, goal: Formula) -> Derivation:
            return self._seq(context, goal, "ImpL", minor,
                             self._seq(context | {goal}, goal, "Ax"))
        return self._eliminate(node, node.premises[0], build)

    def _bote(self, node: ProofTree, _: Resolution) -> Derivation:
        if not node.conclusion.succedent:
            context = node.conclusion.antecedent
            if BOT in context:
                return Derivation(node.conclusion, "AxBot")
            closing = Derivation(Sequent(context | {BOT}, frozenset()), "AxBot")
            return Derivation(node.conclusion, "Cut", (self.translate(node.premises[0]), closing),
                              cut_formula=BOT)

        def build(context: FrozenSet[Formula], formula: Formula, goal: Formula) -> Derivation:
            return self._seq(context, goal, "AxBot")
        return self._eliminate(node, node.premises[0], build)

    def _alleg(self, node: ProofTree, r: Resolution) -> Derivation:
        guards = [self.translate(p) for p in node.premises[:-1]]

        def build(context: FrozenSet[Formula], formula: Formula, goal: Formula) -> Derivation:
            lifted = [weaken(g, {formula}) for g in guards]
            return self._seq(context, goal, "AllL", *lifted,
                             self._seq(context | {goal}, goal, "Ax"), witness=r.term)
        return self._eliminate(node, node.premises[-1], build)

    def _exinst(self, node: ProofTree, _: Resolution) -> Derivation:
        def build(context: FrozenSet[Formula], formula: Formula, goal: Formula) -> Derivation:
            return self._seq(context, goal, "ExLEps", self._seq(context | {goal}, goal, "Ax"))
        return self._eliminate(node, node.premises[0], build)

    def _exdef(self, node: ProofTree, _: Resolution) -> Derivation:
        def build(context: FrozenSet[Formula], formula: Formula, goal: Formula) -> Derivation:
            assert isinstance(formula, Exists)
            witness = instance_at(formula.body, Eps(formula.var, formula.body))
            deposit = context | {witness, goal}
            return self._seq(context, goal, "ExLEps", self._seq(deposit, goal, "Ax"))
        return self._eliminate(node, node.premises[0], build)


def seq_to_nj(derivation: ProofTree, config: Optional[CalculusConfig] = None) -> NJDerivation:
    """Translate a checked single-succedent derivation into NJε.

    Raises:
        InputUnchecked: if ``derivation`` is rejected under ``config``.
        TranslationError: for multiple-succedent input or the IPC rule ExL.
    """
    config = config or CalculusConfig(cut_policy=CutPolicy.ANY)
    if config.succedents is not Succedents.SINGLE:
        raise TranslationError("only single-succedent derivations translate to NJε")
    report = check_derivation(derivation, config)
    if not report.ok:
        raise InputUnchecked(f"input derivation rejected: {report.codes[0].value}")
    result = _SequentToNJ(config).translate(derivation)
    if not derivation.conclusion.succedent:
        result = NJDerivation(derivation.conclusion, "BotE", (result,))
    verdict = check_nj(result, config.eps_mode)
    if not verdict.ok:
        raise TranslationError(f"translated derivation rejected: {verdict.violations[0].message}")
    logger.debug("Translated %d sequent nodes into %d NJ nodes",
                 derivation.size(), result.size())
    return result


def nj_to_seq(derivation: ProofTree, eps_mode: EpsMode = EpsMode.AUGMENTED) -> Derivation:
    """Translate a checked NJε derivation into an IPCε derivation with cuts.

    Raises:
        InputUnchecked: if ``derivation`` is rejected by check_nj.
    """
    report = check_nj(derivation, eps_mode)
    if not report.ok:
        raise InputUnchecked(f"input derivation rejected: {report.codes[0].value}")
    result = _NJToSequent(eps_mode).translate(derivation)
    config = CalculusConfig(Calculus.IPC_EPS, eps_mode, Succedents.SINGLE, CutPolicy.ANY)
    verdict = check_derivation(result, config)
    if not verdict.ok:
        raise TranslationError(f"translated derivation rejected: {verdict.violations[0].message}")
    return result


def as_nj(tree: ProofTree) -> NJDerivation:
    """Reinterpret a generic tree (e.g. freshly loaded) as an NJ derivation."""
    return NJDerivation(tree.conclusion, tree.rule, tuple(as_nj(p) for p in tree.premises),
                        tree.witness, tree.eigen, tree.cut_formula)


__all__ = [
    "InputUnchecked",
    "TranslationError",
    "as_nj",
    "goal_of",
    "nj_to_seq",
    "seq_to_nj",
]
