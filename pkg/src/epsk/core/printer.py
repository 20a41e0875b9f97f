"""Text rendering of terms, formulas and sequents.

The output is accepted back by :mod:`epsk.core.parser`. Binder names are
taken from the stored hints and renamed only when they would clash with
an enclosing binder or with a parameter of the printed object.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, List, Tuple, Union

from .syntax import (
    KEYWORDS,
    And,
    Atom,
    Bot,
    Eps,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Param,
    Sequent,
    Term,
    Top,
    Var,
    free_params,
    is_negation,
)

Printable = Union[Term, Formula, Sequent]

_ATOMIC = 4
_LEVELS = {And: 3, Or: 2, Imp: 1}
_SYMBOLS = {And: "&", Or: "|", Imp: "->"}


def _level(formula: Formula) -> int:
    if isinstance(formula, (Forall, Exists)):
        return 0
    if is_negation(formula):
        return _ATOMIC
    return _LEVELS.get(type(formula), _ATOMIC)


class _Renderer:
    def __init__(self, reserved: Iterable[str]):
        self.reserved = frozenset(reserved) | KEYWORDS
        self.scope: List[str] = []

    def bind(self, hint: str) -> str:
        taken = self.reserved | set(self.scope)
        if hint not in taken:
            return hint
        index = 1
        while f"{hint}{index}" in taken:
            index += 1
        return f"{hint}{index}"

    def term(self, term: Term) -> str:
        if isinstance(term, Param):
            return term.name
        if isinstance(term, Var):
            if term.index >= len(self.scope):
                raise ValueError(f"loose variable {term.name!r} cannot be printed")
            return self.scope[-1 - term.index]
        if isinstance(term, Eps):
            return self.binder("eps", term.var, term.body)
        raise TypeError(f"Unexpected term: {term!r}")

    def binder(self, keyword: str, hint: str, body: Formula) -> str:
        name = self.bind(hint)
        self.scope.append(name)
        try:
            return f"{keyword} {name}. {self.formula(body, 0)}"
        finally:
            self.scope.pop()

    def formula(self, formula: Formula, need: int) -> str:
        text = self._bare(formula)
        return f"({text})" if _level(formula) < need else text

    def _bare(self, formula: Formula) -> str:
        if isinstance(formula, Bot):
            return "bot"
        if isinstance(formula, Top):
            return "top"
        if isinstance(formula, Atom):
            if not formula.args:
                return formula.pred
            return f"{formula.pred}({', '.join(self.term(a) for a in formula.args)})"
        if is_negation(formula):
            return f"~{self.formula(formula.left, _ATOMIC)}"
        if isinstance(formula, Imp):
            return f"{self.formula(formula.left, 2)} -> {self.formula(formula.right, 0)}"
        if isinstance(formula, (And, Or)):
            level = _LEVELS[type(formula)]
            symbol = _SYMBOLS[type(formula)]
            return (f"{self.formula(formula.left, level)} {symbol} "
                    f"{self.formula(formula.right, level + 1)}")
        if isinstance(formula, Forall):
            return self.binder("forall", formula.var, formula.body)
        if isinstance(formula, Exists):
            return self.binder("exists", formula.var, formula.body)
        raise TypeError(f"Unexpected formula: {formula!r}")


@lru_cache(maxsize=65536)
def _render(obj: Union[Term, Formula]) -> str:
    renderer = _Renderer(free_params(obj))
    if isinstance(obj, Term):
        return renderer.term(obj)
    return renderer.formula(obj, 0)


def to_text(obj: Printable) -> str:
    """Render a term, formula or sequent in the input syntax."""
    if isinstance(obj, Sequent):
        left = ", ".join(sorted_formulas(obj.antecedent))
        right = ", ".join(sorted_formulas(obj.succedent))
        return " ".join(part for part in (left, "=>", right) if part)
    return _render(obj)


def sort_key(obj: Union[Term, Formula]) -> Tuple[int, str]:
    """Canonical ordering key: shorter text first, then lexicographic."""
    text = _render(obj)
    return len(text), text


def sorted_formulas(formulas: Iterable[Formula]) -> List[str]:
    return [_render(f) for f in sorted(formulas, key=sort_key)]


def canonical(items: Iterable[Union[Term, Formula]]) -> list:
    """The items in canonical print order."""
    return sorted(items, key=sort_key)
