"""Countermodels from trees of saturated sequents.

Worlds are open saturated sequents; a world gets one successor per
implication or universal formula of its succedent that it does not already
refute. The resulting term model is audited before it is handed out.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ..core.printer import canonical, to_text
from ..core.syntax import (
    Atom,
    EpskError,
    Forall,
    Formula,
    Imp,
    Sequent,
    Term,
    eps_terms,
    free_params,
    instantiate,
)
from ..semantics.model import Flavor, KripkeEpsilonModel, World, close_order, subterm_closure
from ..semantics.validation import validate_model
from .saturation import BudgetExhausted, SaturatedSequent, Saturator, SearchConfig, initial_domain

logger = logging.getLogger(__name__)


class AuditFailed(EpskError):
    """The assembled model does not refute what its worlds claim."""

    def __init__(self, problems: List[str]):
        self.problems = problems
        super().__init__("; ".join(problems[:5]))


@dataclass
class WorldNode:
    sat: SaturatedSequent
    children: List["WorldNode"] = field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def size(self) -> int:
        return sum(1 for _ in self.walk())


class TreeBuilder:
    """Grows a tree of open saturations, backtracking over branch choices."""

    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.saturator = Saturator(cfg)
        self.live = 0

    def build(self, sequent: Sequent) -> Optional[WorldNode]:
        """An open world tree for ``sequent``; None if every attempt closes.

        Raises:
            BudgetExhausted: a bound was reached first.
        """
        self.live = 0
        return self._world(sequent.antecedent, sequent.succedent, initial_domain(sequent))

    def _world(self, antecedent, succedent, domain: Tuple[Term, ...]) -> Optional[WorldNode]:
        self.live += 1
        if self.live > self.cfg.world_budget:
            raise BudgetExhausted(f"more than {self.cfg.world_budget} worlds needed")
        start = self.live
        for sat in self.saturator.saturations(antecedent, succedent, domain):
            if not sat.complete:
                raise BudgetExhausted("saturation bounds reached")
            children = self._children(sat)
            if children is not None:
                return WorldNode(sat, children)
            self.live = start
        self.live = start - 1
        return None

    def _children(self, sat: SaturatedSequent) -> Optional[List[WorldNode]]:
        nodes: List[WorldNode] = []
        for formula in canonical(sat.succedent):
            seed = self._obligation(sat, formula)
            if seed is None:
                continue
            child = self._world(*seed)
            if child is None:
                logger.debug("Successor for %s closes", to_text(formula))
                return None
            nodes.append(child)
        return nodes

    def _obligation(self, sat: SaturatedSequent, formula: Formula):
        """Seed of the successor refuting ``formula``, None if not needed."""
        if isinstance(formula, Imp):
            if formula.left in sat.antecedent and formula.right in sat.succedent:
                return None
            return sat.antecedent | {formula.left}, {formula.right}, sat.domain
        if isinstance(formula, Forall):
            if any(instantiate(formula.body, t) in sat.succedent for t in sat.domain):
                return None
            eigen = self.saturator.fresh(free_params(list(sat.antecedent | sat.succedent)))
            return (sat.antecedent, {instantiate(formula.body, eigen)},
                    sat.domain + (eigen,))
        return None


def _assemble(root: WorldNode) -> Tuple[KripkeEpsilonModel, Dict[World, SaturatedSequent]]:
    names: Dict[int, World] = {}
    sats: Dict[World, SaturatedSequent] = {}
    pairs: Set[Tuple[World, World]] = set()

    def visit(node: WorldNode, parent: Optional[World]) -> None:
        world = f"w{len(names)}"
        names[id(node)] = world
        sats[world] = node.sat
        if parent is not None:
            pairs.add((parent, world))
        for child in node.children:
            visit(child, world)

    visit(root, None)
    worlds = tuple(sats)
    domains = {w: frozenset(s.domain) for w, s in sats.items()}
    atoms = {w: frozenset(f for f in s.antecedent if isinstance(f, Atom)) for w, s in sats.items()}
    tracked: Set = set()
    for sat in sats.values():
        tracked |= eps_terms(list(sat.antecedent | sat.succedent) + list(sat.domain))
    model = KripkeEpsilonModel(
        worlds=worlds,
        order=close_order(pairs),
        domains=domains,
        atoms=atoms,
        flavor=Flavor.TERM,
        tracked=subterm_closure(tracked),
    )
    return model, sats


def truth_lemma_failures(model: KripkeEpsilonModel,
                         sats: Dict[World, SaturatedSequent]) -> List[str]:
    """Antecedent formulas not forced, succedent formulas forced, per world."""
    problems: List[str] = []
    for world, sat in sats.items():
        for formula in canonical(sat.antecedent):
            if not model.forces(world, formula):
                problems.append(f"{world} does not force assumed {to_text(formula)}")
        for formula in canonical(sat.succedent):
            if model.forces(world, formula):
                problems.append(f"{world} forces refuted {to_text(formula)}")
    return problems


def build_countermodel(root: WorldNode) -> KripkeEpsilonModel:
    """Term model of an open world tree, audited against every world.

    Raises:
        AuditFailed: a world misjudges one of its formulas or the model
            breaks a model condition.
    """
    model, sats = _assemble(root)
    problems = truth_lemma_failures(model, sats)
    report = validate_model(model)
    problems += [f"{v.kind.value}: {v.message}" for v in report.violations]
    if problems:
        logger.warning("Countermodel audit failed: %s", problems[0])
        raise AuditFailed(problems)
    logger.debug("Countermodel with %d worlds passed the audit", len(model.worlds))
    return model
