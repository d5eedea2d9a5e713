from __future__ import annotations

import pytest

from occo import (
    OntClass,
    is_subclass_of,
    load_builtin_schema,
    register_extension_class,
    relation_signature,
)
from occo.errors import (
    DanglingParentError,
    DuplicateIdError,
    UnknownTermError,
)
from occo.schema import (
    ABILITY_TERMS,
    CORE_CREDENTIAL_TERMS,
    SKILL_TERMS,
    leaf_subclasses,
)

from oracle import naive_is_subclass


def test_core_terms_present_with_definitions(schema):
    for term in CORE_CREDENTIAL_TERMS:
        assert term in schema.classes
        assert schema.classes[term].definition
        assert schema.classes[term].builtin
    assert len(CORE_CREDENTIAL_TERMS) == 13


def test_key_hierarchy_placements(schema):
    assert is_subclass_of(schema, "skill", "competence")
    assert is_subclass_of(schema, "ability", "competence")
    assert is_subclass_of(schema, "competence", "disposition")
    assert is_subclass_of(schema, "credential", "document")
    assert is_subclass_of(schema, "license", "credential")
    assert is_subclass_of(schema, "credential", "credential")
    assert not is_subclass_of(schema, "employer", "document")
    # holders range over organisms, not just humans
    assert is_subclass_of(schema, "occupational_credential_holder", "organism")


def test_seed_taxonomy_counts(schema):
    assert len(SKILL_TERMS) == 35
    assert len(ABILITY_TERMS) == 52
    assert len(leaf_subclasses(schema, "skill")) == 35
    assert len(leaf_subclasses(schema, "ability")) == 52


def test_relation_signatures(schema):
    assert relation_signature(schema, "accredited_by") == (
        "credential_granting_agency",
        "quality_assurance_group",
    )
    assert relation_signature(schema, "is_about") == ("information_content_entity", "entity")
    assert relation_signature(schema, "evidence_of") == ("credential", "competence")


def test_relation_signature_unknown(schema):
    with pytest.raises(UnknownTermError):
        relation_signature(schema, "made_up")


def test_signature_closure(schema):
    for rel in schema.relations.values():
        assert rel.domain in schema.classes
        assert rel.range in schema.classes
        if rel.inverse:
            inv = schema.relations[rel.inverse]
            assert (inv.domain, inv.range) == (rel.range, rel.domain)


def test_issuer_constraints_resolve(schema):
    by_cred = {c.credential_class: c.required_issuer_class for c in schema.issuer_constraints}
    assert by_cred == {
        "certificate": "credential_granting_agency",
        "certification": "professional_organization",
        "academic_degree": "educational_institution",
        "license": "government_agency",
    }
    for c in schema.issuer_constraints:
        assert is_subclass_of(schema, c.credential_class, "credential")


def test_register_extension_class(schema):
    ext = register_extension_class(
        schema, OntClass("welding_skill", "Welding", frozenset({"skill"}))
    )
    assert is_subclass_of(ext, "welding_skill", "competence")
    # the input registry is untouched
    assert "welding_skill" not in schema.classes


def test_register_extension_errors(schema):
    with pytest.raises(DanglingParentError):
        register_extension_class(schema, OntClass("w2", "W2", frozenset({"xyz"})))
    with pytest.raises(DuplicateIdError):
        register_extension_class(schema, OntClass("credential", "Again", frozenset({"document"})))


def test_subclass_matches_naive_closure(schema):
    terms = sorted(schema.classes)
    for a in terms:
        for b in ("entity", "continuant", "competence", "credential", "organization", "role"):
            assert is_subclass_of(schema, a, b) == naive_is_subclass(schema, a, b), (a, b)


def test_acyclic_by_topological_order(schema):
    # every class must appear after all of its parents in some topological order
    order: list[str] = []
    placed: set[str] = set()
    pending = set(schema.classes)
    while pending:
        ready = {c for c in pending if schema.classes[c].parents <= placed}
        assert ready, "cycle detected"
        for c in sorted(ready):
            order.append(c)
            placed.add(c)
        pending -= ready
    assert len(order) == len(schema.classes)
