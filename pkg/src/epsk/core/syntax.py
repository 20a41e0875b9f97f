"""Object language: terms with ε-terms, formulas and sequents.

Bound variables are stored as de Bruijn indices so that alpha-equivalent
objects compare (and hash) equal. Binder names are kept only as printing
hints and never take part in equality.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, Optional, Set, Tuple, Union

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({"bot", "top", "forall", "exists", "eps"})


class EpskError(Exception):
    """Base class for every error raised by epsk."""


class ParseError(EpskError):
    """Text does not belong to the grammar."""

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        location = f"line {line}, column {column}" if line else "input"
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{location}: {message}{detail}")


class UnboundVariableError(ParseError):
    """An identifier in term position is neither bound nor a parameter."""


class Term:
    """Base class of terms."""

    __slots__ = ()


class Formula:
    """Base class of formulas."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    """Bound variable occurrence; ``index`` counts binders outward."""

    name: str = field(compare=False)
    index: int


@dataclass(frozen=True)
class Param(Term):
    """Free variable or constant. Both are always defined."""

    name: str


@dataclass(frozen=True)
class Eps(Term):
    """The ε-term εx.body, index 0 of ``body`` refers to x."""

    var: str = field(compare=False)
    body: Formula


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: Tuple[Term, ...] = ()


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str = field(compare=False)
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str = field(compare=False)
    body: Formula


BOT = Bot()
TOP = Top()

Binder = Union[Forall, Exists, Eps]
Syntax = Union[Term, Formula]


def neg(formula: Formula) -> Formula:
    """¬A, an abbreviation for A → ⊥."""
    return Imp(formula, BOT)


def is_negation(formula: Formula) -> bool:
    return isinstance(formula, Imp) and formula.right == BOT


def forall_(name: str, body: Formula) -> Forall:
    """Bind parameter ``name`` of ``body`` universally."""
    return Forall(name, abstract(body, name))


def exists_(name: str, body: Formula) -> Exists:
    return Exists(name, abstract(body, name))


def eps_(name: str, body: Formula) -> Eps:
    return Eps(name, abstract(body, name))


# ---------------------------------------------------------------------------
# Binding machinery


def instantiate(body: Formula, term: Term, depth: int = 0) -> Formula:
    """Replace the variable bound at ``depth`` by the closed ``term``."""
    return _inst_formula(body, term, depth)


def _inst_formula(formula: Formula, term: Term, depth: int) -> Formula:
    if isinstance(formula, Atom):
        if not formula.args:
            return formula
        return Atom(formula.pred, tuple(_inst_term(a, term, depth) for a in formula.args))
    if isinstance(formula, (Bot, Top)):
        return formula
    if isinstance(formula, (And, Or, Imp)):
        return type(formula)(_inst_formula(formula.left, term, depth),
                             _inst_formula(formula.right, term, depth))
    if isinstance(formula, (Forall, Exists)):
        return type(formula)(formula.var, _inst_formula(formula.body, term, depth + 1))
    raise TypeError(f"Unexpected formula: {formula!r}")


def _inst_term(target: Term, term: Term, depth: int) -> Term:
    if isinstance(target, Var):
        return term if target.index == depth else target
    if isinstance(target, Param):
        return target
    if isinstance(target, Eps):
        return Eps(target.var, _inst_formula(target.body, term, depth + 1))
    raise TypeError(f"Unexpected term: {target!r}")


def abstract(formula: Formula, name: str, depth: int = 0) -> Formula:
    """Turn parameter ``name`` into the variable bound at ``depth``."""
    if isinstance(formula, Atom):
        if not formula.args:
            return formula
        return Atom(formula.pred, tuple(_abstract_term(a, name, depth) for a in formula.args))
    if isinstance(formula, (Bot, Top)):
        return formula
    if isinstance(formula, (And, Or, Imp)):
        return type(formula)(abstract(formula.left, name, depth),
                             abstract(formula.right, name, depth))
    if isinstance(formula, (Forall, Exists)):
        return type(formula)(formula.var, abstract(formula.body, name, depth + 1))
    raise TypeError(f"Unexpected formula: {formula!r}")


def _abstract_term(term: Term, name: str, depth: int) -> Term:
    if isinstance(term, Param):
        return Var(name, depth) if term.name == name else term
    if isinstance(term, Var):
        return term
    if isinstance(term, Eps):
        return Eps(term.var, abstract(term.body, name, depth + 1))
    raise TypeError(f"Unexpected term: {term!r}")


def substitute(formula: Formula, name: str, term: Term) -> Formula:
    """Capture-avoiding substitution of ``term`` for the parameter ``name``.

    Bound variables are nameless, so nothing free in ``term`` can be
    captured; the printer picks binder names that avoid its parameters.
    """
    if has_loose(term):
        raise EpskError("cannot substitute a term with unbound variables")
    return instantiate(abstract(formula, name), term)


def substitute_term(target: Term, name: str, term: Term) -> Term:
    if isinstance(target, Param):
        return term if target.name == name else target
    if isinstance(target, Var):
        return target
    return Eps(target.var, substitute(target.body, name, term))


def has_loose(obj: Syntax, depth: int = 0) -> bool:
    """True if ``obj`` mentions a variable bound outside of it."""
    if isinstance(obj, Var):
        return obj.index >= depth
    if isinstance(obj, Param) or isinstance(obj, (Bot, Top)):
        return False
    if isinstance(obj, Eps):
        return has_loose(obj.body, depth + 1)
    if isinstance(obj, Atom):
        return any(has_loose(a, depth) for a in obj.args)
    if isinstance(obj, (And, Or, Imp)):
        return has_loose(obj.left, depth) or has_loose(obj.right, depth)
    if isinstance(obj, (Forall, Exists)):
        return has_loose(obj.body, depth + 1)
    raise TypeError(f"Unexpected object: {obj!r}")


# ---------------------------------------------------------------------------
# Queries


def iter_terms(obj: Syntax) -> Iterator[Term]:
    """Every term occurrence in ``obj``, outermost first."""
    if isinstance(obj, Term):
        yield obj
        if isinstance(obj, Eps):
            yield from iter_terms(obj.body)
    elif isinstance(obj, Atom):
        for arg in obj.args:
            yield from iter_terms(arg)
    elif isinstance(obj, (And, Or, Imp)):
        yield from iter_terms(obj.left)
        yield from iter_terms(obj.right)
    elif isinstance(obj, (Forall, Exists)):
        yield from iter_terms(obj.body)


def _objects(obj: object) -> Iterator[Syntax]:
    if isinstance(obj, (Term, Formula)):
        yield obj
    elif isinstance(obj, Sequent):
        yield from obj.antecedent
        yield from obj.succedent
    elif isinstance(obj, Iterable) and not isinstance(obj, str):
        for item in obj:
            yield from _objects(item)
    else:
        raise TypeError(f"Unexpected object: {obj!r}")


def free_params(obj: object) -> FrozenSet[str]:
    """Names of parameters occurring in ``obj``, including inside ε-terms."""
    return frozenset(t.name for o in _objects(obj) for t in iter_terms(o)
                     if isinstance(t, Param))


def eps_terms(obj: object) -> FrozenSet[Eps]:
    """Closed ε-subterms of ``obj`` (nested ones included)."""
    return frozenset(t for o in _objects(obj) for t in iter_terms(o)
                     if isinstance(t, Eps) and not has_loose(t))


def contains_eps(obj: object) -> bool:
    return any(isinstance(t, Eps) for o in _objects(obj) for t in iter_terms(o))


def eps_degree(obj: Syntax) -> int:
    """Maximal nesting of ε-symbols."""
    if isinstance(obj, Eps):
        return 1 + eps_degree(obj.body)
    if isinstance(obj, (Var, Param, Bot, Top)):
        return 0
    if isinstance(obj, Atom):
        return max((eps_degree(a) for a in obj.args), default=0)
    if isinstance(obj, (And, Or, Imp)):
        return max(eps_degree(obj.left), eps_degree(obj.right))
    if isinstance(obj, (Forall, Exists)):
        return eps_degree(obj.body)
    raise TypeError(f"Unexpected object: {obj!r}")


def formula_depth(formula: Formula) -> int:
    if isinstance(formula, (Atom, Bot, Top)):
        return 0
    if isinstance(formula, (And, Or, Imp)):
        return 1 + max(formula_depth(formula.left), formula_depth(formula.right))
    return 1 + formula_depth(formula.body)


def binder_names(obj: Syntax) -> Set[str]:
    names: Set[str] = set()
    stack = [obj]
    while stack:
        item = stack.pop()
        if isinstance(item, (Forall, Exists, Eps)):
            names.add(item.var)
            stack.append(item.body)
        elif isinstance(item, (And, Or, Imp)):
            stack.extend((item.left, item.right))
        elif isinstance(item, Atom):
            stack.extend(item.args)
    return names


def alpha_eq(left: object, right: object) -> bool:
    """Alpha-equivalence; the nameless representation makes it equality."""
    return left == right


def fresh_name(used: Iterable[str], base: str = "a") -> str:
    taken = set(used) | KEYWORDS
    if base not in taken:
        return base
    for letter in "abcdefghijklmnopqrstuvwxyz":
        if letter not in taken:
            return letter
    index = 1
    while f"{base}{index}" in taken:
        index += 1
    return f"{base}{index}"


# ---------------------------------------------------------------------------
# Definedness


def definedness_formula(term: Term) -> Formula:
    """t↓: ⊤ for parameters, ∃y(∃xA(x) → A(y)) for εxA(x)."""
    if isinstance(term, Param):
        return TOP
    if isinstance(term, Eps):
        if has_loose(term):
            raise EpskError("definedness of a term with unbound variables")
        taken = binder_names(term.body) | {term.var}
        hint = next((n for n in ("y", "z", "u", "v", "w") if n not in taken),
                    fresh_name(taken, "y"))
        # A(y) under the new binder is the body itself: index 0 now points at y.
        return Exists(hint, Imp(Exists(term.var, term.body), term.body))
    raise EpskError(f"definedness of a bound variable {term!r}")


def term_of_definedness(formula: Formula) -> Optional[Eps]:
    """The ε-term e if ``formula`` is e↓, else None."""
    if not isinstance(formula, Exists) or not isinstance(formula.body, Imp):
        return None
    premise, conclusion = formula.body.left, formula.body.right
    if isinstance(premise, Exists) and premise.body == conclusion:
        return Eps(premise.var, conclusion)
    return None


def existential_of(term: Eps) -> Exists:
    """∃xA for e = εxA."""
    return Exists(term.var, term.body)


# ---------------------------------------------------------------------------
# Sequents


@dataclass(frozen=True)
class Sequent:
    """Γ ⇒ Δ with both sides finite sets of formulas."""

    antecedent: FrozenSet[Formula] = frozenset()
    succedent: FrozenSet[Formula] = frozenset()

    @classmethod
    def of(cls, antecedent: Iterable[Formula] = (),
           succedent: Iterable[Formula] = ()) -> "Sequent":
        return cls(frozenset(antecedent), frozenset(succedent))

    @property
    def goal(self) -> Optional[Formula]:
        """The succedent formula of a single-succedent sequent."""
        if len(self.succedent) == 1:
            return next(iter(self.succedent))
        return None

    def with_antecedent(self, antecedent: Iterable[Formula]) -> "Sequent":
        return Sequent(frozenset(antecedent), self.succedent)

    def weaken(self, extra: Iterable[Formula]) -> "Sequent":
        return Sequent(self.antecedent | frozenset(extra), self.succedent)

    def map(self, fn) -> "Sequent":
        return Sequent(frozenset(fn(f) for f in self.antecedent),
                       frozenset(fn(f) for f in self.succedent))


def match_instance(body: Formula, instance: Formula) -> Tuple[bool, Optional[Term]]:
    """Find t with instantiate(body, t) == instance.

    Returns ``(matched, t)``; ``t`` is None when the bound variable does
    not occur in ``body`` (any term matches).
    """
    found: dict = {}

    def term(pattern: Term, target: Term, depth: int) -> bool:
        if isinstance(pattern, Var) and pattern.index == depth:
            if has_loose(target):
                return False
            if "t" in found:
                return found["t"] == target
            found["t"] = target
            return True
        if isinstance(pattern, Eps) and isinstance(target, Eps):
            return formula(pattern.body, target.body, depth + 1)
        return pattern == target

    def formula(pattern: Formula, target: Formula, depth: int) -> bool:
        if type(pattern) is not type(target):
            return False
        if isinstance(pattern, Atom):
            return (pattern.pred == target.pred
                    and len(pattern.args) == len(target.args)
                    and all(term(p, t, depth) for p, t in zip(pattern.args, target.args)))
        if isinstance(pattern, (Bot, Top)):
            return True
        if isinstance(pattern, (And, Or, Imp)):
            return (formula(pattern.left, target.left, depth)
                    and formula(pattern.right, target.right, depth))
        return formula(pattern.body, target.body, depth + 1)

    if not formula(body, instance, 0):
        return False, None
    return True, found.get("t")
