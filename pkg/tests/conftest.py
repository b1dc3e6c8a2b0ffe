from __future__ import annotations

from pathlib import Path

import pytest

from isarepair.model import Terminology, normalize_terminology
from isarepair.parser import parse_missing, parse_ontology

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def pizza_text() -> str:
    return (FIXTURES / "pizza.onto").read_text()


@pytest.fixture(scope="session")
def pizza_missing_text() -> str:
    return (FIXTURES / "pizza.missing").read_text()


@pytest.fixture(scope="session")
def pizza(pizza_text) -> Terminology:
    axioms, roles = parse_ontology(pizza_text)
    return normalize_terminology(axioms, roles)


@pytest.fixture(scope="session")
def pizza_missing(pizza_missing_text):
    return parse_missing(pizza_missing_text)
