"""Shared fixtures for the epsk test suite."""

import pytest

from epsk.config.settings import CORPUS_DIR, GOLDEN_DIR, MODELS_DIR
from epsk.core.parser import parse_formula, parse_sequent, parse_term
from epsk.search.saturation import SearchConfig
from epsk.utils.serialization import load_model, read_json


@pytest.fixture
def golden_dir():
    return GOLDEN_DIR


@pytest.fixture
def manifest():
    return read_json(GOLDEN_DIR / "manifest.json")


@pytest.fixture
def two_world():
    """Term-flavored model where εxP(x) appears only at the later world."""
    return load_model(MODELS_DIR / "two_world.json")


@pytest.fixture
def ip_countermodel():
    """ε-free model refuting (C -> ∃xA(x)) -> ∃x(C -> A(x))."""
    return load_model(MODELS_DIR / "ip_countermodel.json")


@pytest.fixture
def corpus_file():
    return CORPUS_DIR / "conservativity.txt"


@pytest.fixture
def search_cfg():
    return SearchConfig()


@pytest.fixture
def f():
    return parse_formula


@pytest.fixture
def s():
    return parse_sequent


@pytest.fixture
def t():
    return parse_term
