"""Tests for the sequent-calculus kernel and Hilbert axiom derivations."""

from dataclasses import replace

import pytest

from epsk.config.settings import GOLDEN_DIR
from epsk.core.checker import ViolationCode, weaken
from epsk.core.hilbert import (
    InvalidInstantiation,
    Schema,
    hilbert_axiom_derivation,
    recognize_hilbert_axiom,
)
from epsk.core.kernel import (
    Calculus,
    CalculusConfig,
    CutPolicy,
    Derivation,
    EpsMode,
    Succedents,
    check_derivation,
)
from epsk.core.natded import check_nj
from epsk.core.parser import parse_formula, parse_sequent, parse_term
from epsk.core.syntax import Param, Sequent, definedness_formula
from epsk.core.translate import as_nj
from epsk.utils.serialization import load_derivation, read_json

MANIFEST = read_json(GOLDEN_DIR / "manifest.json")


def _case_id(case):
    overrides = [f"{k}={v}" for k, v in sorted(case.items()) if k not in ("file", "expect")]
    return "-".join([case["file"].rsplit(".", 1)[0]] + overrides)


def check_case(case):
    """Report of one manifest case under its effective settings."""
    settings = {**MANIFEST["defaults"], **case}
    tree = load_derivation(GOLDEN_DIR / case["file"])
    if settings["system"] == "nj":
        return check_nj(as_nj(tree), EpsMode(settings["eps_mode"]))
    config = CalculusConfig(
        calculus=Calculus(settings["calculus"]),
        eps_mode=EpsMode(settings["eps_mode"]),
        succedents=Succedents(settings["succedents"]),
        cut_policy=CutPolicy(settings["cut_policy"]),
    )
    return check_derivation(tree, config)


def seq(text, rule, *premises, **extra):
    return Derivation(parse_sequent(text), rule, tuple(premises), **extra)


class TestGoldenDerivations:
    """Test class for the golden derivation files."""

    @pytest.mark.parametrize("case", MANIFEST["cases"], ids=_case_id)
    def test_manifest_case(self, case):
        report = check_case(case)
        assert {code.value for code in report.codes} == set(case["expect"])

    def test_every_golden_file_is_listed(self, golden_dir):
        listed = {case["file"] for case in MANIFEST["cases"]}
        files = {p.name for p in golden_dir.glob("*.json")} - {"manifest.json"}
        assert files == listed

    @pytest.mark.parametrize("name", sorted({c["file"] for c in MANIFEST["cases"]
                                              if c["expect"] == [] and len(c) == 2}))
    def test_weakening_is_admissible(self, name):
        tree = load_derivation(GOLDEN_DIR / name)
        weakened = weaken(tree, [parse_formula("R -> Q(a)")])
        assert parse_formula("R -> Q(a)") in weakened.conclusion.antecedent
        assert check_derivation(weakened).ok

    def test_missing_guard_is_reported_at_the_quantifier(self):
        report = check_derivation(load_derivation(GOLDEN_DIR / "ip_invalid.json"))
        assert report.at((0,)) == [ViolationCode.MISSING_DEFINEDNESS_PREMISE]

    def test_report_serializes(self):
        report = check_derivation(load_derivation(GOLDEN_DIR / "eigen_violation.json"))
        data = report.to_dict()
        assert data["ok"] is False
        assert data["violations"][0]["code"] == "EigenvariableViolation"

    @pytest.mark.parametrize("case", [c for c in MANIFEST["cases"] if c.get("system") != "nj"],
                             ids=_case_id)
    def test_cut_policies_are_nested(self, case):
        accepted = [check_case({**case, "cut_policy": policy.value}).ok
                    for policy in (CutPolicy.NONE, CutPolicy.DEFINEDNESS_ONLY, CutPolicy.ANY)]
        assert accepted == sorted(accepted)

    @pytest.mark.parametrize("case", MANIFEST["cases"], ids=_case_id)
    def test_check_is_deterministic(self, case):
        assert check_case(case).to_dict() == check_case(case).to_dict()


class TestSequentRules:
    """Test class for single rule applications."""

    def test_axiom(self):
        assert check_derivation(seq("A, B => A", "Ax")).ok

    def test_axiom_without_shared_formula(self):
        report = check_derivation(seq("A => B", "Ax"))
        assert report.codes == [ViolationCode.RULE_MISMATCH]

    def test_unknown_rule(self):
        report = check_derivation(seq("A => A", "Magic"))
        assert report.codes == [ViolationCode.RULE_MISMATCH]

    def test_left_rule_may_keep_principal(self):
        tree = seq("A & B => A", "AndL", seq("A & B, A, B => A", "Ax"))
        assert check_derivation(tree).ok

    def test_exr_with_parameter_needs_no_guard(self):
        tree = seq("P(c) => exists x. P(x)", "ExR", seq("P(c) => P(c)", "Ax"),
                   witness=Param("c"))
        assert check_derivation(tree).ok

    def test_exr_with_eps_term_and_guard(self):
        term = parse_term("eps x. P(x)")
        guard = definedness_formula(term)
        context = "P(eps x. P(x)), exists y. (exists x. P(x)) -> P(y)"
        tree = seq(f"{context} => exists x. P(x)", "ExR",
                   Derivation(Sequent.of(parse_sequent(f"{context} =>").antecedent, [guard]),
                              "Ax"),
                   seq(f"{context} => P(eps x. P(x))", "Ax"),
                   witness=term)
        assert check_derivation(tree).ok

    def test_allr_eigenvariable(self):
        good = seq("forall x. P(x) => forall x. P(x)", "AllR",
                   seq("forall x. P(x) => P(a)", "AllL", seq("forall x. P(x), P(a) => P(a)", "Ax"),
                       witness=Param("a")),
                   eigen="a")
        assert check_derivation(good).ok
        bad = seq("P(a) => forall x. P(x)", "AllR", seq("P(a) => P(a)", "Ax"), eigen="a")
        assert check_derivation(bad).codes == [ViolationCode.EIGENVARIABLE_VIOLATION]

    def test_eps_term_rejected_in_ipc(self):
        tree = seq("P(eps x. P(x)) => P(eps x. P(x))", "Ax")
        config = CalculusConfig(calculus=Calculus.IPC)
        assert check_derivation(tree, config).codes == [ViolationCode.EPSILON_TERM_IN_IPC]

    def test_multiple_succedents_in_single_mode(self):
        tree = seq("A => A, B", "Ax")
        assert check_derivation(tree).codes == [ViolationCode.SUCCEDENT_ARITY]
        config = CalculusConfig(succedents=Succedents.MULTIPLE)
        assert check_derivation(tree, config).ok

    def test_violations_are_collected_for_every_node(self):
        tree = seq("A & B => C", "AndL", seq("A, B => C", "Ax"))
        report = check_derivation(tree)
        assert report.at((0,)) == [ViolationCode.RULE_MISMATCH]
        assert report.at(()) == []


class TestHilbertAxioms:
    """Test class for recognizing and deriving the ε-axioms."""

    @pytest.mark.parametrize("text, schema", [
        ("(exists x. P(x)) -> P(eps x. P(x))", Schema.CRITICAL),
        ("top & (forall x. P(x)) -> P(c)", Schema.EPS_Q1),
        ("top & P(c) -> exists x. P(x)", Schema.EPS_Q2),
        ("(exists y. (exists x. Q(x)) -> Q(y)) & (forall x. P(x)) -> P(eps x. Q(x))",
         Schema.EPS_Q1),
        ("(exists y. (exists x. Q(x)) -> Q(y)) & P(eps x. Q(x)) -> exists x. P(x)",
         Schema.EPS_Q2),
    ])
    @pytest.mark.parametrize("mode", list(EpsMode))
    def test_derivation_is_accepted(self, text, schema, mode):
        instance = recognize_hilbert_axiom(parse_formula(text))
        assert instance is not None
        assert instance.schema is schema
        derivation = hilbert_axiom_derivation(instance)
        assert derivation.conclusion == parse_sequent(f"=> {text}")
        assert check_derivation(derivation, CalculusConfig(eps_mode=mode)).ok

    def test_not_an_axiom(self):
        assert recognize_hilbert_axiom(parse_formula("A -> A")) is None
        assert recognize_hilbert_axiom(parse_formula("(exists x. P(x)) -> P(c)")) is None

    def test_critical_needs_its_own_eps_term(self):
        instance = recognize_hilbert_axiom(parse_formula("(exists x. P(x)) -> P(eps x. P(x))"))
        wrong = replace(instance, term=parse_term("eps x. Q(x)"))
        with pytest.raises(InvalidInstantiation):
            hilbert_axiom_derivation(wrong)
