"""Bounded decision attempts with certified results.

Every Proof has passed the kernel and every Countermodel has passed model
validation and refutes the sequent at its world; anything else is
reported as Exhausted.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

from ..core.kernel import CalculusConfig, Derivation, Succedents, check_derivation
from ..core.printer import to_text
from ..core.syntax import Sequent, contains_eps
from ..semantics.model import KripkeEpsilonModel, World
from .countermodel import AuditFailed, TreeBuilder, build_countermodel
from .prover import ProofSearch
from .saturation import BudgetExhausted, SearchConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Proof:
    derivation: Derivation
    config: CalculusConfig
    verdict = "proved"


@dataclass(frozen=True)
class Countermodel:
    model: KripkeEpsilonModel
    world: World
    verdict = "refuted"


@dataclass(frozen=True)
class Exhausted:
    reason: str
    verdict = "exhausted"


SearchResult = Union[Proof, Countermodel, Exhausted]


def _kernel_config(sequent: Sequent, cfg: SearchConfig) -> CalculusConfig:
    succedents = Succedents.MULTIPLE if len(sequent.succedent) > 1 else Succedents.SINGLE
    return cfg.calculus_config(succedents)


def prove(sequent: Sequent, cfg: Optional[SearchConfig] = None) -> Union[Proof, Exhausted]:
    """Look for a derivation only."""
    cfg = cfg or SearchConfig()
    if not cfg.epsilon and contains_eps(sequent):
        return Exhausted("ε-terms are not part of IPC")
    try:
        derivation = ProofSearch(cfg).prove(sequent)
    except BudgetExhausted as exc:
        logger.debug("Proof search: %s", exc)
        return Exhausted(str(exc))
    if derivation is None:
        return Exhausted("no derivation within the bounds")
    config = _kernel_config(sequent, cfg)
    report = check_derivation(derivation, config)
    if not report.ok:
        logger.warning("Kernel rejected a search result: %s", report.violations[0].message)
        return Exhausted("search produced a derivation the kernel rejects")
    logger.info("Derivation certified (%d nodes)", derivation.size())
    return Proof(derivation, config)


def refute(sequent: Sequent, cfg: Optional[SearchConfig] = None
           ) -> Union[Countermodel, Exhausted]:
    """Look for a countermodel only."""
    cfg = cfg or SearchConfig()
    if not cfg.epsilon and contains_eps(sequent):
        return Exhausted("ε-terms are not part of IPC")
    try:
        tree = TreeBuilder(cfg).build(sequent)
    except BudgetExhausted as exc:
        logger.debug("Countermodel search: %s", exc)
        return Exhausted(str(exc))
    if tree is None:
        return Exhausted("every saturation closes")
    try:
        model = build_countermodel(tree)
    except AuditFailed as exc:
        return Exhausted(f"countermodel audit failed: {exc}")
    root = model.worlds[0]
    if not (model.interprets(root, sequent) and model.refutes(root, sequent)):
        logger.warning("Countermodel does not refute %s at %s", to_text(sequent), root)
        return Exhausted("countermodel does not refute the sequent")
    logger.info("Countermodel certified (%d worlds)", len(model.worlds))
    return Countermodel(model, root)


def decide(sequent: Sequent, cfg: Optional[SearchConfig] = None) -> SearchResult:
    """Countermodel search first, then proof search; Exhausted if neither succeeds."""
    cfg = cfg or SearchConfig()
    logger.info("Deciding %s", to_text(sequent))
    refuted = refute(sequent, cfg)
    if isinstance(refuted, Countermodel):
        return refuted
    proved = prove(sequent, cfg)
    if isinstance(proved, Proof):
        return proved
    return Exhausted(f"{refuted.reason}; {proved.reason}")
