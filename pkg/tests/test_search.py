"""Tests for saturation, proof search and countermodel search."""

from dataclasses import replace

import pytest

from epsk.core.kernel import Calculus, EpsMode, Succedents, check_derivation
from epsk.core.syntax import Param
from epsk.search.decide import Countermodel, Exhausted, Proof, decide, prove, refute
from epsk.search.saturation import (
    Closed,
    SaturatedSequent,
    SearchConfig,
    saturate,
    saturation_gaps,
)
from epsk.semantics.validation import validate_model
from epsk.utils.corpus import read_corpus
from epsk.utils.generators import FormulaGenerator

IP = "=> (C -> exists x. A(x)) -> exists x. C -> A(x)"
IP_CONVERSE = "=> (exists x. C -> A(x)) -> C -> exists x. A(x)"


class TestSearchConfig:
    """Test class for search bounds."""

    def test_defaults(self, search_cfg):
        assert search_cfg.calculus is Calculus.IPC_EPS
        assert search_cfg.eps_mode is EpsMode.AUGMENTED
        assert search_cfg.instantiation_depth == 3
        assert search_cfg.eps_nesting == 2

    @pytest.mark.parametrize("field", ["instantiation_depth", "eps_nesting", "world_budget",
                                       "formula_budget", "step_budget"])
    def test_bounds_must_be_positive(self, field):
        with pytest.raises(ValueError):
            SearchConfig(**{field: 0})

    def test_scaled(self, search_cfg):
        assert search_cfg.scaled(2).world_budget == 2 * search_cfg.world_budget


class TestSaturation:
    """Test class for the invertible closure."""

    def test_excluded_middle_stays_open(self, s, search_cfg):
        sat = saturate(s("=> A | ~A"), search_cfg)
        assert isinstance(sat, SaturatedSequent)
        assert sat.complete
        assert sat.succedent >= s("=> A, ~A").succedent
        assert saturation_gaps(sat, search_cfg) == []

    def test_axiom_closes(self, s):
        assert isinstance(saturate(s("A & B => B")), Closed)

    def test_existential_in_antecedent(self, s, f):
        sat = saturate(s("exists x. P(x) => Q"))
        assert f("P(eps x. P(x))") in sat.antecedent
        assert f("exists y. (exists x. P(x)) -> P(y)") in sat.antecedent
        assert saturation_gaps(sat) == []

    def test_literal_mode_adds_only_the_instance(self, s, f, search_cfg):
        cfg = replace(search_cfg, eps_mode=EpsMode.LITERAL)
        sat = saturate(s("exists x. P(x) => Q"), cfg)
        assert f("P(eps x. P(x))") in sat.antecedent
        assert f("exists y. (exists x. P(x)) -> P(y)") not in sat.antecedent
        assert f("exists y. (exists x. P(x)) -> P(y)") in sat.succedent

    def test_random_saturations_have_no_gaps(self, search_cfg):
        gen = FormulaGenerator(seed=21, eps_nesting=1)
        complete = 0
        for _ in range(100):
            sat = saturate(gen.sequent(depth=3), search_cfg)
            if isinstance(sat, SaturatedSequent) and sat.complete:
                complete += 1
                assert saturation_gaps(sat, search_cfg) == []
        assert complete >= 30

    def test_gaps_are_reported(self, f):
        sat = SaturatedSequent(frozenset({f("A & B")}), frozenset(), (Param("a"),))
        assert saturation_gaps(sat) == ["A & B: conjunction in antecedent without both conjuncts"]

    def test_step_budget_marks_incomplete(self, s, search_cfg):
        sat = saturate(s("=> A | ~A"), replace(search_cfg, step_budget=1))
        assert not sat.complete


class TestProve:
    """Test class for proof search."""

    @pytest.mark.parametrize("calculus", list(Calculus))
    def test_ip_converse(self, s, search_cfg, calculus):
        result = prove(s(IP_CONVERSE), replace(search_cfg, calculus=calculus))
        assert isinstance(result, Proof)
        assert result.derivation.conclusion == s(IP_CONVERSE)
        assert check_derivation(result.derivation, result.config).ok

    @pytest.mark.parametrize("mode", list(EpsMode))
    def test_critical_axiom(self, s, search_cfg, mode):
        sequent = s("=> (exists x. P(x)) -> P(eps x. P(x))")
        assert isinstance(prove(sequent, replace(search_cfg, eps_mode=mode)), Proof)

    def test_eps_terms_are_not_ipc(self, s, search_cfg):
        sequent = s("P(eps x. P(x)) => P(eps x. P(x))")
        result = prove(sequent, replace(search_cfg, calculus=Calculus.IPC))
        assert isinstance(result, Exhausted)

    def test_multiple_succedents_are_widened(self, s, search_cfg):
        result = prove(s("A & C => B, C"), search_cfg)
        assert isinstance(result, Proof)
        assert result.config.succedents is Succedents.MULTIPLE
        assert result.derivation.conclusion == s("A & C => B, C")

    def test_step_budget(self, s, search_cfg):
        sequent = s("=> (A -> B) -> (B -> C) -> A -> C")
        result = prove(sequent, replace(search_cfg, step_budget=2))
        assert isinstance(result, Exhausted)
        assert result.verdict == "exhausted"


class TestModeExperiment:
    """Test class for ∃xP(x) ⇒ εxP(x)↓ in the two ε-modes."""

    SEQUENT = "exists x. P(x) => exists y. (exists x. P(x)) -> P(y)"

    def test_augmented_two_step_proof(self, s, search_cfg):
        result = prove(s(self.SEQUENT), search_cfg)
        assert isinstance(result, Proof)
        assert result.derivation.size() == 2
        assert result.derivation.rule == "ExLEps"
        assert result.derivation.rules() == {"ExLEps", "Ax"}

    @pytest.mark.parametrize("depth, nesting", [(1, 1), (3, 2), (5, 3)])
    def test_literal_exhausts(self, s, search_cfg, depth, nesting):
        cfg = replace(search_cfg, eps_mode=EpsMode.LITERAL,
                      instantiation_depth=depth, eps_nesting=nesting)
        assert isinstance(prove(s(self.SEQUENT), cfg), Exhausted)


class TestRefute:
    """Test class for countermodel search."""

    def test_excluded_middle(self, s, search_cfg):
        sequent = s("=> A | ~A")
        result = refute(sequent, search_cfg)
        assert isinstance(result, Countermodel)
        assert len(result.model.worlds) == 2
        assert result.model.refutes(result.world, sequent)

    @pytest.mark.parametrize("calculus", list(Calculus))
    def test_independence_of_premise(self, s, search_cfg, calculus):
        sequent = s(IP)
        result = decide(sequent, replace(search_cfg, calculus=calculus))
        assert isinstance(result, Countermodel)
        assert result.verdict == "refuted"
        assert validate_model(result.model).ok
        assert result.world == result.model.roots()[0]
        assert result.model.refutes(result.world, sequent)

    def test_countermodels_are_certified(self, search_cfg, corpus_file):
        refutable = [e.sequent for e in read_corpus(corpus_file) if e.expect == "refutable"]
        assert refutable
        for sequent in refutable:
            result = decide(sequent, search_cfg)
            assert isinstance(result, Countermodel)
            assert validate_model(result.model).ok
            assert result.model.roots() == (result.world,)
            assert result.model.refutes(result.world, sequent)

    def test_provable_sequent_is_not_refuted(self, s, search_cfg):
        assert isinstance(refute(s("A & B => B & A"), search_cfg), Exhausted)


class TestDecide:
    """Test class for the combined decision attempt."""

    def test_proved(self, s, search_cfg):
        result = decide(s("A & B => B & A"), search_cfg)
        assert result.verdict == "proved"

    def test_no_proof_at_double_bounds(self, s, search_cfg):
        assert isinstance(prove(s(IP), search_cfg.scaled(2)), Exhausted)

    def test_exhausted_reports_both_attempts(self, s, search_cfg):
        result = decide(s(IP_CONVERSE), replace(search_cfg, step_budget=1))
        assert isinstance(result, Exhausted)
        assert ";" in result.reason

