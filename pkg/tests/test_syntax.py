"""Tests for terms, formulas, the parser and the printer."""

import pytest

from epsk.config.settings import MODELS_DIR
from epsk.core.parser import parse
from epsk.core.printer import to_text
from epsk.core.syntax import (
    BOT,
    And,
    Atom,
    Eps,
    Exists,
    Forall,
    Imp,
    Param,
    ParseError,
    UnboundVariableError,
    Var,
    alpha_eq,
    definedness_formula,
    eps_degree,
    eps_terms,
    free_params,
    instantiate,
    substitute,
    term_of_definedness,
)
from epsk.utils.generators import FormulaGenerator


class TestParser:
    """Test class for the text syntax."""

    def test_implication_associates_right(self, f):
        assert f("A -> B -> C") == Imp(Atom("A"), Imp(Atom("B"), Atom("C")))

    def test_precedence(self, f):
        parsed = f("A & B | C -> D")
        assert isinstance(parsed, Imp)
        assert parsed.left == f("(A & B) | C")

    def test_negation_is_implication_to_bot(self, f):
        assert f("~A") == Imp(Atom("A"), BOT)

    def test_negation_takes_a_quantifier(self, f):
        assert f("~~forall x. P(x)") == Imp(Imp(f("forall x. P(x)"), BOT), BOT)
        assert f("A & ~exists x. P(x)").right == Imp(f("exists x. P(x)"), BOT)

    def test_quantifier_extends_right(self, f):
        parsed = f("forall x. P(x) -> Q(x)")
        assert isinstance(parsed, Forall)
        assert isinstance(parsed.body, Imp)

    def test_quantifier_stops_at_comma(self, s):
        sequent = s("forall x. P(x), P(c) -> Q => Q")
        assert len(sequent.antecedent) == 2
        assert Imp(Atom("P", (Param("c"),)), Atom("Q")) in sequent.antecedent

    def test_bound_variables_are_indices(self, f):
        parsed = f("exists x. P(x)")
        assert parsed.body == Atom("P", (Var("x", 0),))

    def test_alpha_equivalent_formulas_are_equal(self, f):
        assert f("forall x. P(x)") == f("forall y. P(y)")
        assert hash(f("exists x. R(x, c)")) == hash(f("exists z. R(z, c)"))

    def test_eps_term(self, t):
        term = t("eps x. P(x)")
        assert isinstance(term, Eps)
        assert eps_degree(term) == 1

    def test_sequent_sides_may_be_empty(self, s):
        assert s("=>").antecedent == frozenset()
        assert s("A =>").succedent == frozenset()
        assert len(s("=> A, B").succedent) == 2

    def test_unparenthesized_quantifier_absorbs_implication(self, f):
        parsed = f("A & forall x. P(x) -> Q")
        assert isinstance(parsed, And)
        assert isinstance(parsed.right, Forall)

    def test_error_has_location(self, f):
        with pytest.raises(ParseError) as info:
            f("A & & B")
        assert info.value.line == 1
        assert info.value.column > 0

    def test_uppercase_in_term_position(self, f):
        with pytest.raises(UnboundVariableError):
            f("P(Q)")

    def test_parse_kind(self):
        assert isinstance(parse("eps x. P(x)", "term"), Eps)
        with pytest.raises(ValueError):
            parse("A", "poem")

    def test_parse_json_kinds(self, golden_dir):
        text = (golden_dir / "and_comm.json").read_text(encoding="utf-8")
        assert parse(text, "derivation").conclusion == parse("A & B => B & A", "sequent")
        model = parse((MODELS_DIR / "two_world.json").read_text(encoding="utf-8"), "model")
        assert model.worlds == ("w0", "w1")
        with pytest.raises(ParseError):
            parse("{", "derivation")


class TestPrinter:
    """Test class for text rendering."""

    @pytest.mark.parametrize("text", [
        "A -> B -> C",
        "(A -> B) -> C",
        "A & B | C",
        "~~A -> A",
        "~~forall x. P(x)",
        "(exists x. P(x)) -> P(c)",
        "forall x. P(x) -> exists y. Q(y)",
        "P(eps x. P(x))",
        "R(eps x. exists y. R(x, y), c)",
        "A, B => C, D",
        "=> A",
    ])
    def test_round_trip(self, text):
        kind = "sequent" if "=>" in text else "formula"
        parsed = parse(text, kind)
        assert parse(to_text(parsed), kind) == parsed

    def test_binder_renamed_away_from_parameters(self, f):
        body = Atom("R", (Var("x", 0), Param("x")))
        text = to_text(Exists("x", body))
        assert text == "exists x1. R(x1, x)"
        assert f(text) == Exists("x", body)

    def test_sequent_order_is_canonical(self, s):
        assert to_text(s("B & C, A => D")) == "A, B & C => D"

    def test_generated_formulas_round_trip(self, f):
        gen = FormulaGenerator(seed=7, eps_nesting=2)
        for index in range(1000):
            formula = gen.formula(depth=index % 7)
            assert f(to_text(formula)) == formula


class TestBinding:
    """Test class for instantiation and substitution."""

    def test_alpha_eq(self, f):
        assert alpha_eq(f("forall x. P(x)"), f("forall y. P(y)"))
        assert not alpha_eq(f("P(a)"), f("P(b)"))

    def test_instantiate(self, f):
        body = f("exists x. P(x) & Q(x)").body
        assert instantiate(body, Param("c")) == f("P(c) & Q(c)")

    def test_substitute_avoids_capture(self, f, t):
        formula = f("exists y. R(x, y)")
        result = substitute(formula, "x", Param("y"))
        assert result == f("exists z. R(y, z)")

    def test_substitute_eps_term(self, f, t):
        result = substitute(f("P(a)"), "a", t("eps x. Q(x)"))
        assert result == Atom("P", (t("eps x. Q(x)"),))

    def test_random_substitution_is_capture_free(self):
        gen = FormulaGenerator(seed=13, eps_nesting=2)
        for _ in range(300):
            formula = gen.formula(depth=4)
            term = gen.term()
            expected = free_params(formula) - {"a"}
            if "a" in free_params(formula):
                expected |= free_params(term)
            assert free_params(substitute(formula, "a", term)) == expected
            renamed = substitute(formula, "a", Param("fresh"))
            assert alpha_eq(substitute(renamed, "fresh", Param("a")), formula)

    def test_free_params_include_eps_bodies(self, f):
        assert free_params(f("P(eps x. R(x, c)) & Q(a)")) == {"a", "c"}

    def test_eps_terms_are_closed_subterms(self, f, t):
        found = eps_terms(f("P(eps x. Q(eps y. R(x, y)))"))
        assert found == {t("eps x. Q(eps y. R(x, y))")}


class TestDefinedness:
    """Test class for the definedness formula."""

    def test_parameter_is_always_defined(self):
        assert to_text(definedness_formula(Param("c"))) == "top"

    def test_eps_term(self, t):
        assert to_text(definedness_formula(t("eps x. P(x)"))) == \
            "exists y. (exists x. P(x)) -> P(y)"

    def test_inverse(self, t):
        term = t("eps x. C -> A(x)")
        assert term_of_definedness(definedness_formula(term)) == term

    def test_not_a_definedness_formula(self, f):
        assert term_of_definedness(f("exists x. P(x)")) is None
