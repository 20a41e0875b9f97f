"""Parser for the ASCII syntax of terms, formulas and sequents.

Grammar summary::

    formula  :=  F -> F | F "|" F | F & F | ~F | forall x. F | exists x. F
              |  bot | top | P(t, ...) | P | (F)
    term     :=  x | eps x. F
    sequent  :=  F, ... => F, ...

Quantifiers and ``eps`` bind to the end of the enclosing parenthesis,
``->`` associates to the right and ``&``, ``|`` to the left.
"""

import logging
from functools import lru_cache
from typing import Any, List, Optional, Union

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, VisitError

from .syntax import (
    BOT,
    TOP,
    And,
    Atom,
    Formula,
    Imp,
    Or,
    Param,
    ParseError,
    Sequent,
    Term,
    UnboundVariableError,
    eps_,
    exists_,
    forall_,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
formula_start: formula
term_start: term
sequent_start: sequent

sequent: [formula_list] "=>" [formula_list]
formula_list: formula ("," formula)*

?formula: imp

?imp: disj
    | disj_c "->" imp           -> implication

?disj: conj
     | disj_c "|" conj          -> disjunction
?disj_c: conj_c
       | disj_c "|" conj_c      -> disjunction

?conj: unary
     | conj_c "&" unary         -> conjunction
?conj_c: unary_c
       | conj_c "&" unary_c     -> conjunction

?unary: unary_c
      | neg_quant
?neg_quant: quant
          | "~" neg_quant       -> negation
?unary_c: atom
        | "(" formula ")"
        | "~" unary_c           -> negation
        | "bot"                 -> bot
        | "top"                 -> top

?quant: "forall" LNAME "." formula  -> forall
      | "exists" LNAME "." formula  -> exists

atom: UNAME ("(" term ("," term)* ")")?

?term: LNAME                        -> param
     | "eps" LNAME "." formula      -> eps
     | UNAME                        -> misplaced_predicate

LNAME: /[a-z_][A-Za-z0-9_']*/
UNAME: /[A-Z][A-Za-z0-9_']*/

%import common.WS
%ignore WS
"""

KINDS = ("formula", "term", "sequent", "derivation", "model")


class _Builder(Transformer):
    """Builds syntax objects bottom-up; binders abstract their parameter."""

    def formula_start(self, children: List[Any]) -> Formula:
        return children[0]

    term_start = formula_start
    sequent_start = formula_start

    def sequent(self, children: List[Optional[List[Formula]]]) -> Sequent:
        left, right = children
        return Sequent.of(left or (), right or ())

    def formula_list(self, children: List[Formula]) -> List[Formula]:
        return list(children)

    def implication(self, children: List[Formula]) -> Formula:
        return Imp(children[0], children[1])

    def disjunction(self, children: List[Formula]) -> Formula:
        return Or(children[0], children[1])

    def conjunction(self, children: List[Formula]) -> Formula:
        return And(children[0], children[1])

    def negation(self, children: List[Formula]) -> Formula:
        return Imp(children[0], BOT)

    def bot(self, _: List[Any]) -> Formula:
        return BOT

    def top(self, _: List[Any]) -> Formula:
        return TOP

    def forall(self, children: List[Any]) -> Formula:
        return forall_(str(children[0]), children[1])

    def exists(self, children: List[Any]) -> Formula:
        return exists_(str(children[0]), children[1])

    def atom(self, children: List[Any]) -> Formula:
        return Atom(str(children[0]), tuple(children[1:]))

    def param(self, children: List[Token]) -> Term:
        return Param(str(children[0]))

    def eps(self, children: List[Any]) -> Term:
        return eps_(str(children[0]), children[1])

    def misplaced_predicate(self, children: List[Token]) -> Term:
        token = children[0]
        raise UnboundVariableError(
            f"{token!s} is not a bound variable or parameter",
            token.line or 0, token.column or 0,
        )


@lru_cache(maxsize=None)
def _parser() -> Lark:
    return Lark(
        GRAMMAR,
        parser="lalr",
        start=["formula_start", "term_start", "sequent_start"],
        maybe_placeholders=True,
    )


def _parse_text(text: str, start: str) -> Any:
    try:
        tree = _parser().parse(text, start=start)
        return _Builder().transform(tree)
    except VisitError as exc:
        raise exc.orig_exc from None
    except UnexpectedInput as exc:
        if isinstance(exc, UnexpectedCharacters):
            expected = exc.allowed or ()
            message = f"unexpected character {text[exc.pos_in_stream]!r}"
        else:
            expected = getattr(exc, "expected", None) or ()
            token = getattr(exc, "token", None)
            message = f"unexpected {token!r}" if token else "unexpected end of input"
        line = max(getattr(exc, "line", 0) or 0, 0)
        column = max(getattr(exc, "column", 0) or 0, 0)
        raise ParseError(message, line, column, expected) from None


def parse_formula(text: str) -> Formula:
    return _parse_text(text, "formula_start")


def parse_term(text: str) -> Term:
    return _parse_text(text, "term_start")


def parse_sequent(text: str) -> Sequent:
    return _parse_text(text, "sequent_start")


def parse(text: str, kind: str = "formula") -> Union[Formula, Term, Sequent, Any]:
    """Parse ``text`` as the given kind of object.

    ``derivation`` and ``model`` expect the JSON file formats read by
    :mod:`epsk.utils.serialization`.

    Raises:
        ParseError: if the text is not in the grammar (with location).
        UnboundVariableError: for an uppercase identifier in term position.
    """
    if kind == "formula":
        return parse_formula(text)
    if kind == "term":
        return parse_term(text)
    if kind == "sequent":
        return parse_sequent(text)
    if kind in ("derivation", "model"):
        import json

        from ..utils import serialization

        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
        if kind == "derivation":
            return serialization.derivation_from_dict(data)
        return serialization.model_from_dict(data)
    raise ValueError(f"Unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
