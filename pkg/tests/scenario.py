"""Random graph scenario generators for property and acceptance tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import date, timedelta

from occo import Assertion, Entity, add_assertion, add_entity, empty_graph, load_builtin_schema
from occo.graph import GraphSnapshot

QUERY_DATE = date(2023, 6, 15)

AGENCY_CLASSES = [
    "educational_institution",
    "professional_organization",
    "government_agency",
    "credential_granting_agency",
]
CREDENTIAL_CLASSES = [
    "academic_degree",
    "certification",
    "license",
    "certificate",
    "occupational_credential",
    "credential",
]
COMPETENCE_CLASSES = [
    "repairing",
    "troubleshooting",
    "critical_thinking",
    "programming",
    "mathematics",
    "manual_dexterity",
    "oral_expression",
    "competence",
]


def _day(rng: random.Random, start_year: int, end_year: int) -> date:
    start = date(start_year, 1, 1).toordinal()
    end = date(end_year, 12, 31).toordinal()
    return date.fromordinal(rng.randint(start, end))


@dataclass
class Scenario:
    graph: GraphSnapshot
    credentials: list[str]
    at: date


def random_scenario(seed: int) -> Scenario:
    """A small credential world with a random mix of intact and broken chains.

    Stays within 50 entities and 120 assertions.
    """
    rng = random.Random(seed)
    schema = load_builtin_schema()
    g = empty_graph(schema)
    next_aid = [0]

    def aid() -> str:
        next_aid[0] += 1
        return f"a{next_aid[0]:03d}"

    qa_groups = [f"qa{i}" for i in range(rng.randint(1, 3))]
    for q in qa_groups:
        g = add_entity(g, Entity(q, "quality_assurance_group", q))

    agencies = []
    for i in range(rng.randint(1, 4)):
        name = f"org{i}"
        cls = rng.choice(AGENCY_CLASSES)
        attrs = {}
        if rng.random() < 0.3:
            attrs["government_authorization"] = True
        g = add_entity(g, Entity(name, cls, name, attrs))
        agencies.append(name)
        for q in qa_groups:
            if rng.random() < 0.55:
                valid_from = _day(rng, 2008, 2015)
                valid_to = None
                if rng.random() < 0.35:
                    valid_to = valid_from + timedelta(days=rng.randint(30, 4000))
                g = add_assertion(
                    g, Assertion(aid(), name, "accredited_by", q, valid_from, valid_to)
                )

    holders = []
    for i in range(rng.randint(1, 4)):
        name = f"holder{i}"
        g = add_entity(g, Entity(name, rng.choice(["occupation_holder", "trainee"]), name))
        holders.append(name)

    competencies = []
    for i in range(rng.randint(2, 5)):
        name = f"k{i}"
        g = add_entity(g, Entity(name, rng.choice(COMPETENCE_CLASSES), name))
        competencies.append(name)

    for h in holders:
        for k in competencies:
            if rng.random() < 0.4:
                valid_from = _day(rng, 2012, 2022)
                valid_to = None
                if rng.random() < 0.2:
                    valid_to = valid_from + timedelta(days=rng.randint(30, 3000))
                g = add_assertion(
                    g, Assertion(aid(), h, "bearer_of", k, valid_from, valid_to)
                )

    credentials = []
    for i in range(rng.randint(1, 5)):
        cred = f"cred{i}"
        g = add_entity(g, Entity(cred, rng.choice(CREDENTIAL_CLASSES), cred))
        credentials.append(cred)

        if rng.random() < 0.85:  # an issuing process exists
            proc = f"proc{i}"
            g = add_entity(g, Entity(proc, "credential_issuing_process", proc))
            issued_on = _day(rng, 2012, 2022)
            g = add_assertion(g, Assertion(aid(), proc, "has_output", cred, issued_on))
            if rng.random() < 0.92:  # ... with an agent
                g = add_assertion(
                    g, Assertion(aid(), proc, "has_agent", rng.choice(agencies), issued_on)
                )

        n_about = rng.choices([0, 1, 2], weights=[1, 7, 1])[0]
        for h in rng.sample(holders, min(n_about, len(holders))):
            g = add_assertion(
                g, Assertion(aid(), cred, "is_about", h, _day(rng, 2012, 2022))
            )

        for k in rng.sample(competencies, rng.randint(0, min(2, len(competencies)))):
            g = add_assertion(
                g, Assertion(aid(), cred, "evidence_of", k, _day(rng, 2012, 2022))
            )

    return Scenario(g, credentials, QUERY_DATE)


@dataclass
class ValidChain:
    graph: GraphSnapshot
    credential: str
    accreditation_id: str
    issued_on: date
    at: date


def valid_chain(seed: int) -> ValidChain:
    """A credential whose full authority chain holds at the query date.

    The issuer has exactly one supporting accreditation edge, so the chain
    can be broken by revoking that single assertion.
    """
    rng = random.Random(seed)
    schema = load_builtin_schema()
    g = empty_graph(schema)

    cred_class, agency_class = rng.choice(
        [
            ("academic_degree", "educational_institution"),
            ("certification", "professional_organization"),
            ("license", "government_agency"),
            ("certificate", "credential_granting_agency"),
            ("occupational_credential", "educational_institution"),
        ]
    )
    g = add_entity(g, Entity("qa", "quality_assurance_group", "qa"))
    g = add_entity(g, Entity("agency", agency_class, "agency"))
    accredited_from = _day(rng, 2005, 2012)
    g = add_assertion(
        g, Assertion("acc", "agency", "accredited_by", "qa", accredited_from)
    )
    g = add_entity(g, Entity("holder", "occupation_holder", "holder"))
    g = add_entity(g, Entity("cred", cred_class, "cred"))
    g = add_entity(g, Entity("proc", "credential_issuing_process", "proc"))
    issued_on = accredited_from + timedelta(days=rng.randint(400, 3000))
    g = add_assertion(g, Assertion("iss_out", "proc", "has_output", "cred", issued_on))
    g = add_assertion(g, Assertion("iss_agt", "proc", "has_agent", "agency", issued_on))
    g = add_assertion(g, Assertion("about", "cred", "is_about", "holder", issued_on))
    for i in range(rng.randint(0, 2)):
        k = f"k{i}"
        g = add_entity(g, Entity(k, rng.choice(["repairing", "programming", "competence"]), k))
        g = add_assertion(g, Assertion(f"ev{i}", "cred", "evidence_of", k, issued_on))
        g = add_assertion(g, Assertion(f"bear{i}", "holder", "bearer_of", k, issued_on))

    at = issued_on + timedelta(days=rng.randint(100, 400))
    return ValidChain(g, "cred", "acc", issued_on, at)
