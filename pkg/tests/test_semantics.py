"""Tests for Kripke ε-models: forcing, validation and the constructions."""

import pytest

from epsk.core.parser import parse_formula, parse_sequent, parse_term
from epsk.core.printer import to_text
from epsk.core.syntax import Atom, Param, contains_eps, eps_terms
from epsk.semantics.construction import (
    PreconditionKind,
    PreconditionViolation,
    agreement_failures,
    as_term_model,
    extend_with_epsilon,
    require_strict,
    strictify_domains,
)
from epsk.semantics.model import (
    Flavor,
    KripkeEpsilonModel,
    ModelError,
    UnTrackedEpsilonTerm,
    close_order,
)
from epsk.semantics.validation import ModelViolationKind, validate_model
from epsk.utils.corpus import read_corpus
from epsk.utils.generators import FormulaGenerator, enumerate_epsbot_models, model_fleet
from epsk.utils.serialization import load_derivation

P = parse_term("eps x. P(x)")

# Sequents derivable in IPCε whose only ε-term is εxP(x).
EPS_VALID = [
    "=> (exists x. P(x)) -> P(eps x. P(x))",
    "forall x. ~P(x), P(eps x. P(x)) =>",
    "exists x. P(x) => exists y. (exists x. P(x)) -> P(y)",
    "P(eps x. P(x)) => exists y. (exists x. P(x)) -> P(y)",
    "=> P(eps x. P(x)) -> exists x. P(x)",
]

TRACKED = [P, parse_term("eps x. Q(x) -> P(x)")]


def chain(domains, atoms, flavor=Flavor.EPSBOT, **extra):
    """Model on the chain w0 < w1 < ... given per-world domains and atom texts."""
    worlds = tuple(f"w{i}" for i in range(len(domains)))
    order = close_order((worlds[i], worlds[i + 1]) for i in range(len(worlds) - 1))
    return KripkeEpsilonModel(
        worlds=worlds,
        order=order,
        domains={w: frozenset(Param(n) for n in d) for w, d in zip(worlds, domains)},
        atoms={w: frozenset(parse_formula(a) for a in facts) for w, facts in zip(worlds, atoms)},
        flavor=flavor,
        **extra,
    )


def persistence_failures(model, formulas):
    return [(w, v, f) for f in formulas for w in model.worlds for v in model.above(w)
            if model.forces(w, f) and not model.forces(v, f)]


class TestForcing:
    """Test class for the forcing relation."""

    def test_term_model_atoms(self, two_world):
        assert two_world.evaluate(Atom("P", (P,))) == {"w0": True, "w1": True}

    def test_definedness_appears_later(self, two_world):
        assert not two_world.defined_at("w0", P)
        assert two_world.defined_at("w1", P)

    def test_implication_looks_upward(self, two_world):
        formula = parse_formula("P(eps x. P(x)) -> exists x. P(x)")
        assert two_world.evaluate(formula) == {"w0": False, "w1": True}

    def test_quantifiers_range_over_the_world_domain(self, ip_countermodel):
        assert not ip_countermodel.forces("w0", parse_formula("exists x. A(x)"))
        assert ip_countermodel.forces("w0", parse_formula("C -> exists x. A(x)"))
        assert not ip_countermodel.forces("w1", parse_formula("forall x. A(x)"))

    def test_sequent_refuted_at_the_root(self, ip_countermodel):
        sequent = parse_sequent("=> (C -> exists x. A(x)) -> exists x. C -> A(x)")
        assert ip_countermodel.refuting_worlds(sequent) == ["w0"]
        assert not ip_countermodel.sequent_valid(sequent)

    def test_uninterpreted_parameters_make_sequents_vacuous(self, ip_countermodel):
        assert ip_countermodel.sequent_valid(parse_sequent("=> A(e)"))

    def test_epsbot_atom_needs_arguments_in_the_domain(self):
        model = chain([["c"], ["c", "d"]], [[], ["P(d)"]],
                      valuation={("w0", P): Param("d"), ("w1", P): Param("d")},
                      tracked=frozenset({P}))
        assert model.evaluate(Atom("P", (P,))) == {"w0": False, "w1": True}

    def test_untracked_term(self, ip_countermodel):
        with pytest.raises(UnTrackedEpsilonTerm):
            ip_countermodel.forces("w0", parse_formula("A(eps x. A(x))"))


class TestValidation:
    """Test class for the model conditions."""

    def test_fixture_models_are_valid(self, two_world, ip_countermodel):
        assert validate_model(two_world).ok
        assert validate_model(ip_countermodel).ok

    def test_atom_monotonicity(self):
        model = chain([["c"], ["c"]], [["P(c)"], []])
        assert validate_model(model).kinds == [ModelViolationKind.MONOTONICITY]

    def test_domain_monotonicity(self):
        model = chain([["c", "d"], ["c"]], [[], []])
        assert ModelViolationKind.DOMAIN_MONOTONICITY in validate_model(model).kinds

    def test_empty_domain(self):
        model = chain([[]], [[]])
        assert validate_model(model).kinds == [ModelViolationKind.EMPTY_DOMAIN]

    def test_atom_outside_the_domain(self):
        model = chain([["c"], ["c", "d"]], [["P(d)"], ["P(d)"]])
        assert validate_model(model).kinds == [ModelViolationKind.UNDEFINED_ELEMENT]

    def test_missing_value(self):
        model = chain([["c"], ["c", "d"]], [[], ["P(d)"]],
                      valuation={("w1", P): Param("d")}, tracked=frozenset({P}))
        assert ModelViolationKind.MISSING_VALUE in validate_model(model).kinds

    def test_undefined_value_inside_the_domain(self):
        model = chain([["c"], ["c", "d"]], [[], ["P(d)"]],
                      valuation={("w0", P): Param("c"), ("w1", P): Param("d")},
                      tracked=frozenset({P}))
        assert validate_model(model).kinds == [ModelViolationKind.UNDEFINED_VALUE]

    def test_critical_value(self):
        model = chain([["c", "d"]], [["P(d)"]],
                      valuation={("w0", P): Param("c")}, tracked=frozenset({P}))
        assert ModelViolationKind.CRITICAL in validate_model(model).kinds

    def test_stability(self):
        model = chain([["c", "d"], ["c", "d"]], [["P(c)", "P(d)"], ["P(c)", "P(d)"]],
                      valuation={("w0", P): Param("c"), ("w1", P): Param("d")},
                      tracked=frozenset({P}))
        assert validate_model(model).kinds == [ModelViolationKind.STABILITY]

    def test_report_serializes(self):
        report = validate_model(chain([[]], [[]]))
        assert report.to_dict()["violations"][0]["kind"] == "EmptyDomain"


class TestConstructions:
    """Test class for strictification and ε-extension."""

    def test_strictify_adds_a_duplicate_per_world(self):
        model = chain([["c"], ["c"]], [["P(c)"], ["P(c)"]])
        strict = strictify_domains(model)
        require_strict(strict)
        assert strict.domains["w1"] == {Param("c"), Param("c_w0"), Param("c_w1")}
        assert Atom("P", (Param("c_w1"),)) in strict.atoms["w1"]
        assert validate_model(strict).ok

    def test_strictify_preserves_forcing(self):
        model = chain([["c"], ["c", "d"]], [[], ["P(d)", "Q(c)"]])
        formulas = [parse_formula(t) for t in (
            "exists x. P(x)", "forall x. Q(x)", "forall x. P(x) | Q(x)",
            "(exists x. P(x)) -> Q(c)", "~~(exists x. P(x))",
        )]
        assert agreement_failures(model, strictify_domains(model), formulas) == []

    def test_extension_needs_strict_domains(self):
        model = chain([["c"], ["c"]], [[], []])
        with pytest.raises(PreconditionViolation) as info:
            extend_with_epsilon(model, [P])
        assert info.value.kind is PreconditionKind.DOMAINS_NOT_STRICT

    def test_extension_needs_a_tree(self):
        model = KripkeEpsilonModel(
            worlds=("u", "v"), order=frozenset(),
            domains={"u": frozenset({Param("c")}), "v": frozenset({Param("c")})},
            atoms={"u": frozenset(), "v": frozenset()})
        with pytest.raises(PreconditionViolation) as info:
            extend_with_epsilon(model, [P])
        assert info.value.kind is PreconditionKind.NO_TREE

    def test_extended_countermodel(self, ip_countermodel, corpus_file):
        term = parse_term("eps x. C -> A(x)")
        strict = strictify_domains(ip_countermodel)
        extended = extend_with_epsilon(strict, [term])
        assert validate_model(extended).ok
        assert extended.value(term, "w0") == Param("d")
        assert extended.value(term, "w1") == Param("d")
        assert not extended.defined_at("w0", term)
        assert extended.defined_at("w1", term)

        sequent = parse_sequent("=> (C -> exists x. A(x)) -> exists x. C -> A(x)")
        assert extended.refutes("w0", sequent)
        formulas = [f for entry in read_corpus(corpus_file)
                    for f in entry.sequent.antecedent | entry.sequent.succedent]
        assert agreement_failures(strict, extended, formulas) == []

    def test_extension_rejects_eps_atoms(self, two_world):
        with pytest.raises(ModelError):
            extend_with_epsilon(two_world, [P])


class TestModelSweeps:
    """Test class for properties over generated models."""

    def test_fleet_is_valid(self):
        for model in model_fleet(seed=3, size=6):
            assert validate_model(model).ok

    def test_persistence(self):
        fleet = model_fleet(seed=11, size=200, tracked=TRACKED)
        assert {model.flavor for model in fleet} == set(Flavor)
        for index, model in enumerate(fleet):
            root = model.roots()[0]
            names = sorted(p.name for p in model.domains[root] if isinstance(p, Param))
            gen = FormulaGenerator(seed=index, signature={"P": 1, "Q": 1, "C": 0},
                                   params=names, closed_terms=sorted(model.tracked, key=to_text),
                                   eps_nesting=0)
            formulas = [gen.formula(depth=3) for _ in range(25)]
            assert persistence_failures(model, formulas) == []
            for term in model.tracked:
                for world in model.worlds:
                    if model.defined_at(world, term):
                        assert all(model.defined_at(v, term) for v in model.above(world))

    def test_term_reading_of_a_fleet_model(self):
        epsbot = model_fleet(seed=4, size=1, tracked=TRACKED)[0]
        twin = as_term_model(epsbot)
        assert twin.flavor is Flavor.TERM
        assert validate_model(twin).ok
        gen = FormulaGenerator(seed=4, signature={"P": 1, "Q": 1, "C": 0}, params=(),
                               closed_terms=TRACKED, eps_nesting=0)
        formulas = [gen.formula(depth=3) for _ in range(40)]
        assert agreement_failures(epsbot, twin, formulas) == []

    def test_eps_theorems_hold_in_the_fleet(self, manifest, golden_dir):
        sequents = {load_derivation(golden_dir / case["file"]).conclusion
                    for case in manifest["cases"]
                    if case["expect"] == [] and case.get("system", "sequent") == "sequent"}
        tracked = eps_terms(list(sequents))
        assert tracked == {P}
        fleet = model_fleet(seed=0, size=20, tracked=sorted(tracked, key=to_text))
        assert sum(model.flavor is Flavor.TERM for model in fleet) == 10
        for model in fleet:
            assert validate_model(model).ok
            for sequent in sequents:
                assert model.sequent_valid(sequent)

    def test_eps_free_theorems_hold_in_the_fleet(self, corpus_file):
        theorems = [e.sequent for e in read_corpus(corpus_file) if e.expect == "provable"]
        for model in model_fleet(seed=5, size=6):
            for sequent in theorems:
                assert not contains_eps(sequent)
                assert model.sequent_valid(sequent)

    @pytest.mark.slow
    def test_enumerated_models(self):
        sequents = [parse_sequent(text) for text in EPS_VALID]
        valid = 0
        undefined_somewhere = False
        for model in enumerate_epsbot_models(P, max_worlds=2, max_elements=3):
            if not validate_model(model).ok:
                continue
            valid += 1
            for sequent in sequents:
                assert model.sequent_valid(sequent)
            undefined_somewhere |= any(not model.defined_at(w, P) for w in model.worlds)
        assert valid > 0
        assert undefined_somewhere
