"""Saturation of sequents under the invertible rules.

A saturated sequent is the finite stand-in for a maximal consistent
sequent: every invertible clause holds as a membership implication, and
every ε-term of bounded nesting has its definedness formula placed on one
side. Branching clauses are explored depth-first in canonical order, so
``Saturator.saturations`` yields every open saturation lazily.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Set, Tuple, Union

from ..config.settings import SEARCH_DEFAULTS
from ..core.kernel import Calculus, CalculusConfig, CutPolicy, EpsMode, Succedents
from ..core.printer import canonical, to_text
from ..core.syntax import (
    BOT,
    TOP,
    And,
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
    definedness_formula,
    eps_degree,
    eps_terms,
    existential_of,
    fresh_name,
    free_params,
    instantiate,
    term_of_definedness,
)

logger = logging.getLogger(__name__)


class BudgetExhausted(EpskError):
    """A search bound was reached before a verdict."""


@dataclass(frozen=True)
class SearchConfig:
    """Calculus choice plus the bounds that make search a total function."""

    calculus: Calculus = Calculus.IPC_EPS
    eps_mode: EpsMode = EpsMode.AUGMENTED
    cut_policy: CutPolicy = CutPolicy.DEFINEDNESS_ONLY
    instantiation_depth: int = SEARCH_DEFAULTS["instantiation_depth"]
    eps_nesting: int = SEARCH_DEFAULTS["eps_nesting"]
    world_budget: int = SEARCH_DEFAULTS["world_budget"]
    formula_budget: int = SEARCH_DEFAULTS["formula_budget"]
    step_budget: int = SEARCH_DEFAULTS["step_budget"]

    def __post_init__(self) -> None:
        for name in ("instantiation_depth", "eps_nesting", "world_budget",
                     "formula_budget", "step_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    @property
    def epsilon(self) -> bool:
        return self.calculus is Calculus.IPC_EPS

    @property
    def augmented(self) -> bool:
        return self.eps_mode is EpsMode.AUGMENTED

    def scaled(self, factor: int) -> "SearchConfig":
        """All bounds multiplied by ``factor``."""
        return replace(
            self,
            instantiation_depth=self.instantiation_depth * factor,
            eps_nesting=self.eps_nesting * factor,
            world_budget=self.world_budget * factor,
            formula_budget=self.formula_budget * factor,
            step_budget=self.step_budget * factor,
        )

    def calculus_config(self, succedents: Succedents = Succedents.SINGLE) -> CalculusConfig:
        return CalculusConfig(self.calculus, self.eps_mode, succedents, self.cut_policy)


@dataclass(frozen=True)
class SaturatedSequent:
    """w_a ⇒ w_s together with its domain of individuals."""

    antecedent: frozenset
    succedent: frozenset
    domain: Tuple[Term, ...]
    complete: bool = True

    @property
    def sequent(self) -> Sequent:
        return Sequent(self.antecedent, self.succedent)


@dataclass(frozen=True)
class Closed:
    """Every branch of the saturation closes."""

    reason: str


@dataclass
class _State:
    antecedent: Set[Formula]
    succedent: Set[Formula]
    domain: List[Term]
    base: int
    opened: Set[Formula] = field(default_factory=set)
    incomplete: bool = False

    def copy(self) -> "_State":
        return _State(set(self.antecedent), set(self.succedent), list(self.domain),
                      self.base, set(self.opened), self.incomplete)

    def freeze(self) -> SaturatedSequent:
        return SaturatedSequent(frozenset(self.antecedent), frozenset(self.succedent),
                                tuple(self.domain), not self.incomplete)


def initial_domain(sequent: Sequent) -> Tuple[Term, ...]:
    """Parameters of the sequent, or one fresh parameter if there are none."""
    names = sorted(free_params(sequent))
    return tuple(Param(n) for n in names) or (Param(fresh_name(())),)


class Saturator:
    """Invertible closure with lazy branching; one step counter per run."""

    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.steps = 0
        self.used: Set[str] = set()

    def fresh(self, avoid: Set[str]) -> Param:
        name = fresh_name(self.used | avoid)
        self.used.add(name)
        return Param(name)

    def saturations(self, antecedent, succedent,
                    domain: Tuple[Term, ...] = ()) -> Iterator[SaturatedSequent]:
        """Every open saturation of ``antecedent ⇒ succedent``, in search order."""
        start = _State(set(antecedent), set(succedent), list(domain), len(domain))
        self.used |= free_params(list(antecedent) + list(succedent) + list(domain))
        yield from self._expand(start)

    # -- search ------------------------------------------------------------------

    def _expand(self, state: _State) -> Iterator[SaturatedSequent]:
        clash = self._close(state)
        if clash is not None:
            logger.debug("Branch closed: %s", clash)
            return
        if state.incomplete:
            yield state.freeze()
            return
        options = self._branching(state)
        if options is None:
            yield state.freeze()
            return
        for side, formula in options:
            child = state.copy()
            (child.antecedent if side == "a" else child.succedent).add(formula)
            yield from self._expand(child)

    def _tick(self, state: _State) -> bool:
        self.steps += 1
        size = len(state.antecedent) + len(state.succedent)
        if self.steps > self.cfg.step_budget or size > self.cfg.formula_budget:
            if not state.incomplete:
                logger.debug("Saturation bounds reached after %d steps (%d formulas)",
                             self.steps, size)
            state.incomplete = True
        return not state.incomplete

    def _close(self, state: _State) -> Optional[str]:
        changed = True
        while changed:
            clash = _clash(state)
            if clash is not None:
                return clash
            if not self._tick(state):
                return None
            before = (len(state.antecedent), len(state.succedent), len(state.domain))
            for name in sorted(free_params(list(state.antecedent | state.succedent))):
                if Param(name) not in state.domain:
                    state.domain.append(Param(name))
            for formula in canonical(state.antecedent):
                self._left(state, formula)
            for formula in canonical(state.succedent):
                self._right(state, formula)
            changed = before != (len(state.antecedent), len(state.succedent),
                                 len(state.domain))
        return _clash(state)

    def _admit(self, state: _State, term: Term) -> bool:
        """Add ``term`` to the domain; False (and incomplete) when bounds forbid."""
        if term in state.domain:
            return True
        if (eps_degree(term) > self.cfg.eps_nesting
                or len(state.domain) - state.base >= self.cfg.instantiation_depth):
            state.incomplete = True
            return False
        state.domain.append(term)
        return True

    def _left(self, state: _State, formula: Formula) -> None:
        add = state.antecedent.add
        if isinstance(formula, And):
            add(formula.left)
            add(formula.right)
        elif isinstance(formula, Exists):
            if self.cfg.epsilon:
                # a definedness formula is unpacked by the witness clause below
                if term_of_definedness(formula) is None:
                    term = Eps(formula.var, formula.body)
                    add(instantiate(formula.body, term))
                    if self.cfg.augmented:
                        add(definedness_formula(term))
            elif formula not in state.opened:
                eigen = self.fresh(set())
                if self._admit(state, eigen):
                    state.opened.add(formula)
                    add(instantiate(formula.body, eigen))
        elif isinstance(formula, Forall):
            for term in list(state.domain):
                add(instantiate(formula.body, term))
        if self.cfg.epsilon:
            term = term_of_definedness(formula)
            if term is not None and self._admit(state, term):
                add(Imp(existential_of(term), instantiate(term.body, term)))

    def _right(self, state: _State, formula: Formula) -> None:
        if isinstance(formula, Or):
            state.succedent.add(formula.left)
            state.succedent.add(formula.right)
        elif isinstance(formula, Exists):
            for term in list(state.domain):
                state.succedent.add(instantiate(formula.body, term))

    def _branching(self, state: _State) -> Optional[List[Tuple[str, Formula]]]:
        for formula in canonical(state.antecedent):
            if isinstance(formula, Or):
                if formula.left not in state.antecedent and formula.right not in state.antecedent:
                    return [("a", formula.left), ("a", formula.right)]
            elif isinstance(formula, Imp):
                if formula.left not in state.succedent and formula.right not in state.antecedent:
                    return [("a", formula.right), ("s", formula.left)]
        for formula in canonical(state.succedent):
            if isinstance(formula, And):
                if formula.left not in state.succedent and formula.right not in state.succedent:
                    return [("s", formula.left), ("s", formula.right)]
        if self.cfg.epsilon:
            for term in canonical(eps_terms(list(state.antecedent | state.succedent))):
                if eps_degree(term) > self.cfg.eps_nesting:
                    continue
                guard = definedness_formula(term)
                if guard not in state.antecedent and guard not in state.succedent:
                    if self.cfg.augmented:
                        return [("a", guard), ("s", guard)]
                    # the literal deposit leaves the guard undecided, refuted first
                    return [("s", guard), ("a", guard)]
        return None


def _clash(state: _State) -> Optional[str]:
    if BOT in state.antecedent:
        return "bot assumed"
    if TOP in state.succedent:
        return "top refuted"
    shared = state.antecedent & state.succedent
    if shared:
        return f"{to_text(canonical(shared)[0])} on both sides"
    return None


def saturate(sequent: Sequent, cfg: Optional[SearchConfig] = None
             ) -> Union[SaturatedSequent, Closed]:
    """The first open saturation of ``sequent``, or Closed.

    A saturation cut short by the bounds is returned with ``complete``
    set to False; BudgetExhausted is never raised here.
    """
    cfg = cfg or SearchConfig()
    for result in Saturator(cfg).saturations(sequent.antecedent, sequent.succedent,
                                             initial_domain(sequent)):
        return result
    return Closed("every branch closes")


def saturation_gaps(sat: SaturatedSequent, cfg: Optional[SearchConfig] = None) -> List[str]:
    """Invertible clauses the saturated sequent fails, as readable lines."""
    cfg = cfg or SearchConfig()
    wa, ws, domain = sat.antecedent, sat.succedent, sat.domain
    gaps: List[str] = []

    def gap(formula: Formula, clause: str) -> None:
        gaps.append(f"{to_text(formula)}: {clause}")

    if wa & ws:
        gaps.append("antecedent and succedent overlap")
    for f in canonical(wa):
        if isinstance(f, And) and not (f.left in wa and f.right in wa):
            gap(f, "conjunction in antecedent without both conjuncts")
        elif isinstance(f, Or) and f.left not in wa and f.right not in wa:
            gap(f, "disjunction in antecedent without a disjunct")
        elif isinstance(f, Imp) and f.left not in ws and f.right not in wa:
            gap(f, "implication in antecedent with neither premise refuted nor conclusion assumed")
        elif isinstance(f, Exists):
            witnessed = term_of_definedness(f) if cfg.epsilon else None
            if witnessed is not None:
                if witnessed not in domain:
                    gap(f, "definedness assumed but the term is not in the domain")
            elif cfg.epsilon:
                if instantiate(f.body, Eps(f.var, f.body)) not in wa:
                    gap(f, "existential in antecedent without its ε-instance")
            elif not any(instantiate(f.body, t) in wa for t in domain):
                gap(f, "existential in antecedent without an instance")
        elif isinstance(f, Forall):
            for t in domain:
                if instantiate(f.body, t) not in wa:
                    gap(f, f"universal in antecedent not instantiated at {to_text(t)}")
    for f in canonical(ws):
        if isinstance(f, And) and f.left not in ws and f.right not in ws:
            gap(f, "conjunction in succedent without a refuted conjunct")
        elif isinstance(f, Or) and not (f.left in ws and f.right in ws):
            gap(f, "disjunction in succedent without both disjuncts")
        elif isinstance(f, Exists):
            for t in domain:
                if instantiate(f.body, t) not in ws:
                    gap(f, f"existential in succedent not instantiated at {to_text(t)}")
    return gaps
