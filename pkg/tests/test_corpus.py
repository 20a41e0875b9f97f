"""Tests for corpus files, the conservativity harness and the generators."""

import pandas as pd
import pytest

from epsk.core.syntax import ParseError, contains_eps
from epsk.search.saturation import SearchConfig
from epsk.utils.corpus import (
    ConservativityHarness,
    agreement_rate,
    decided,
    parse_corpus_line,
    read_corpus,
)
from epsk.utils.generators import FormulaGenerator, random_epsbot_model


class TestCorpusFile:
    """Test class for reading corpus lines."""

    def test_formula_line(self, s):
        entry = parse_corpus_line("A -> A   # EXPECT provable", 4)
        assert entry.line == 4
        assert entry.sequent == s("=> A -> A")
        assert entry.expect == "provable"

    def test_sequent_line_without_expectation(self, s):
        entry = parse_corpus_line("A, B => A  # plain comment")
        assert entry.sequent == s("A, B => A")
        assert entry.expect is None

    @pytest.mark.parametrize("raw", ["", "   ", "# only a comment"])
    def test_blank_lines(self, raw):
        assert parse_corpus_line(raw) is None

    def test_unknown_expectation(self):
        with pytest.raises(ParseError) as info:
            parse_corpus_line("A  # EXPECT maybe", 7)
        assert info.value.line == 7

    def test_bad_sequent_names_the_line(self):
        with pytest.raises(ParseError) as info:
            parse_corpus_line("A & & B", 9)
        assert info.value.line == 9

    def test_bundled_corpus(self, corpus_file):
        entries = read_corpus(corpus_file)
        assert len(entries) == 23
        expectations = [e.expect for e in entries]
        assert expectations.count("provable") == 12
        assert expectations.count("refutable") == 11
        assert not any(contains_eps(e.sequent) for e in entries)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_corpus(tmp_path / "absent.txt")


class TestConservativityHarness:
    """Test class for the IPC / IPCε comparison."""

    def test_small_table(self, tmp_path):
        path = tmp_path / "small.txt"
        path.write_text(
            "A -> A            # EXPECT provable\n"
            "A | ~A            # EXPECT refutable\n"
            "P(eps x. P(x)) => P(eps x. P(x))\n",
            encoding="utf-8",
        )
        harness = ConservativityHarness(SearchConfig(), progress=False)
        table = harness.run(read_corpus(path))
        assert list(table.columns) == ConservativityHarness.COLUMNS
        assert len(table) == 2
        assert table["ipc"].tolist() == ["proved", "refuted"]
        assert table["agree"].all()
        assert table["expected"].all()
        assert agreement_rate(table) == 1.0
        assert all(decided(plain) and decided(eps) for _, plain, eps in harness.results)

    def test_empty_table(self):
        assert agreement_rate(pd.DataFrame(columns=ConservativityHarness.COLUMNS)) == 1.0

    @pytest.mark.slow
    def test_bundled_corpus_agrees(self, corpus_file):
        table = ConservativityHarness(progress=False).run(read_corpus(corpus_file))
        assert len(table) == 23
        assert agreement_rate(table) == 1.0
        assert table["expected"].all()


class TestGenerators:
    """Test class for seeded formula and model generation."""

    def test_formulas_are_reproducible(self):
        first = FormulaGenerator(seed=3, eps_nesting=1)
        second = FormulaGenerator(seed=3, eps_nesting=1)
        assert [first.formula() for _ in range(20)] == [second.formula() for _ in range(20)]

    def test_eps_free_generator(self):
        gen = FormulaGenerator(seed=5, eps_nesting=0)
        assert not any(contains_eps(gen.formula(depth=4)) for _ in range(50))

    def test_random_epsbot_model_tracks_terms(self):
        model = random_epsbot_model(seed=2)
        assert model.tracked
        for world in model.worlds:
            for term in model.tracked:
                assert model.has_value(term, world)
