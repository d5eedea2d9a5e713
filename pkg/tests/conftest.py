from __future__ import annotations

import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from occo import (
    Assertion,
    Entity,
    add_assertion,
    add_entity,
    empty_graph,
    load_builtin_schema,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def schema():
    return load_builtin_schema()


@pytest.fixture()
def basic_graph(schema):
    """A small intact world: accredited university, degree, qualified holder."""
    g = empty_graph(schema)
    g = add_entity(g, Entity("qa_group", "quality_assurance_group", "QA Group"))
    g = add_entity(g, Entity("uab", "educational_institution", "University"))
    g = add_assertion(
        g, Assertion("acc1", "uab", "accredited_by", "qa_group", date(2010, 1, 1))
    )
    g = add_entity(g, Entity("ada", "occupation_holder", "Ada"))
    g = add_entity(g, Entity("k_prog", "programming", "Programming"))
    g = add_assertion(
        g, Assertion("bear1", "ada", "bearer_of", "k_prog", date(2018, 6, 1))
    )
    g = add_entity(g, Entity("degree", "academic_degree", "BSc"))
    g = add_entity(g, Entity("proc", "credential_issuing_process", "Graduation"))
    g = add_assertion(g, Assertion("iss1", "proc", "has_output", "degree", date(2020, 5, 15)))
    g = add_assertion(g, Assertion("iss2", "proc", "has_agent", "uab", date(2020, 5, 15)))
    g = add_assertion(g, Assertion("about1", "degree", "is_about", "ada", date(2020, 5, 15)))
    g = add_assertion(g, Assertion("ev1", "degree", "evidence_of", "k_prog", date(2020, 5, 15)))
    return g
