"""CTDL-subset ingest.

Input is a newline-delimited document, one single-line object per record.
Credential records become credential *template* entities (CTDL describes
offerings, not issuances); organization records become granting agencies or
quality assurance groups. Anything lossy is reported as a warning, never
dropped silently.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import date
from typing import Sequence

from .errors import DanglingOrganizationError, DuplicateCtidError, OccoError, ParseError
from .graph import Assertion, Entity, GraphSnapshot, add_assertion, add_entity
from .matcher import OWNED_BY_ATTR, TEMPLATE_ATTR
from .schema import OntClass, is_subclass_of, register_extension_class

# ctdl_type -> ontology class for credential records
CREDENTIAL_TYPE_MAP = {
    "ceterms:Certificate": "certificate",
    "ceterms:Certification": "certification",
    "ceterms:License": "license",
    "ceterms:Degree": "academic_degree",
    "ceterms:AssociateDegree": "academic_degree",
    "ceterms:BachelorDegree": "academic_degree",
    "ceterms:MasterDegree": "academic_degree",
    "ceterms:DoctoralDegree": "academic_degree",
}

ORGANIZATION_TYPE_MAP = {
    "ceterms:CredentialOrganization": "credential_granting_agency",
    "ceterms:QACredentialOrganization": "quality_assurance_group",
}

FALLBACK_CREDENTIAL_CLASS = "credential"

# Accreditation edges imported from CTDL have no dates; they are treated as
# standing facts from this epoch.
DEFAULT_VALID_FROM = date(1970, 1, 1)

_KEY_ALIASES = {"@type": "ctdl_type", "ceterms:ctid": "ctid"}
_KNOWN_KEYS = {
    "ctdl_type", "name", "ctid", "owned_by", "accredited_by", "teaches", "issuer_type_hint",
}


@dataclass(frozen=True)
class CtdlRecord:
    ctdl_type: str
    name: str
    ctid: str
    owned_by: str | None = None
    accredited_by: tuple[str, ...] = ()
    teaches: tuple[str, ...] = ()
    issuer_type_hint: str | None = None


@dataclass
class ImportReport:
    entities_created: int = 0
    assertions_created: int = 0
    warnings: list[tuple[str, str]] = field(default_factory=list)
    mapping_used: list[tuple[str, str]] = field(default_factory=list)


def parse_ctdl(text: str) -> list[CtdlRecord]:
    """Parse the subset document into records, input order preserved."""
    records: list[CtdlRecord] = []
    seen_ctids: set[str] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed record: {exc.msg}", line=line_no)
        if not isinstance(obj, dict):
            raise ParseError("record must be an object", line=line_no)
        norm = {_KEY_ALIASES.get(k, k): v for k, v in obj.items()}
        unknown = set(norm) - _KNOWN_KEYS
        if unknown:
            raise ParseError(f"unknown fields {sorted(unknown)}", line=line_no)
        ctid = str(norm.get("ctid", "")).strip()
        if not ctid:
            raise ParseError("record missing ctid", line=line_no)
        if ctid in seen_ctids:
            raise DuplicateCtidError(f"duplicate ctid {ctid!r}", ctid=ctid, line=line_no)
        seen_ctids.add(ctid)
        accredited = norm.get("accredited_by", [])
        teaches = norm.get("teaches", [])
        if not isinstance(accredited, list) or not isinstance(teaches, list):
            raise ParseError("accredited_by and teaches must be lists", line=line_no)
        records.append(
            CtdlRecord(
                ctdl_type=str(norm.get("ctdl_type", "")),
                name=str(norm.get("name", "")),
                ctid=ctid,
                owned_by=str(norm["owned_by"]) if norm.get("owned_by") else None,
                accredited_by=tuple(str(x) for x in accredited),
                teaches=tuple(str(x) for x in teaches),
                issuer_type_hint=(
                    str(norm["issuer_type_hint"]) if norm.get("issuer_type_hint") else None
                ),
            )
        )
    return records


def _slug(label: str) -> str:
    s = re.sub(r"[^a-z0-9]+", "_", label.lower()).strip("_")
    if not s or not s[0].isalpha():
        s = "c_" + s
    return s


def _competence_index(graph: GraphSnapshot) -> dict[str, str]:
    """Case-insensitive label/id -> registered competence term."""
    schema = graph.schema
    index: dict[str, str] = {}
    for term in sorted(schema.descendants("competence")):
        cls = schema.classes[term]
        index.setdefault(term.lower(), term)
        index.setdefault(cls.label.lower(), term)
        index.setdefault(_slug(cls.label), term)
    return index


def map_to_graph(
    records: Sequence[CtdlRecord], graph: GraphSnapshot
) -> tuple[GraphSnapshot, ImportReport]:
    """Apply the fixed mapping table; returns the new snapshot and a report."""
    report = ImportReport()
    mapping_used: set[tuple[str, str]] = set()
    before_entities = len(graph.entities)
    before_assertions = len(graph.assertions)

    org_records = [r for r in records if r.ctdl_type in ORGANIZATION_TYPE_MAP]
    cred_records = [r for r in records if r.ctdl_type not in ORGANIZATION_TYPE_MAP]

    # pass 1: organizations, so credential records can reference them
    for rec in org_records:
        ont_class = ORGANIZATION_TYPE_MAP[rec.ctdl_type]
        if rec.issuer_type_hint and graph.schema.has_class(rec.issuer_type_hint) and \
                is_subclass_of(graph.schema, rec.issuer_type_hint, "organization"):
            ont_class = rec.issuer_type_hint
        if rec.ctid in graph.entities:
            report.warnings.append((rec.ctid, "ctid already in graph, skipped"))
            continue
        mapping_used.add((rec.ctdl_type, ont_class))
        try:
            graph = add_entity(graph, Entity(rec.ctid, ont_class, rec.name))
        except OccoError as exc:
            raise exc.with_detail(ctid=rec.ctid)

    comp_index = _competence_index(graph)

    # pass 2: credentials
    for rec in cred_records:
        ont_class = CREDENTIAL_TYPE_MAP.get(rec.ctdl_type)
        if ont_class is None:
            ont_class = FALLBACK_CREDENTIAL_CLASS
            report.warnings.append(
                (rec.ctid, f"unknown ctdl type {rec.ctdl_type!r}, mapped to generic credential")
            )
        if rec.ctid in graph.entities:
            report.warnings.append((rec.ctid, "ctid already in graph, skipped"))
            continue
        mapping_used.add((rec.ctdl_type, ont_class))

        owner = rec.owned_by
        if owner is not None and owner not in graph.entities:
            raise DanglingOrganizationError(
                f"record {rec.ctid} references unknown organization {owner!r}",
                ctid=rec.ctid, organization=owner,
            )
        attrs: dict = {TEMPLATE_ATTR: True}
        if owner:
            attrs[OWNED_BY_ATTR] = owner
        try:
            graph = add_entity(graph, Entity(rec.ctid, ont_class, rec.name, attrs))
        except OccoError as exc:
            raise exc.with_detail(ctid=rec.ctid)

        # accreditations attach to the owning organization
        for qa in rec.accredited_by:
            if owner is None:
                report.warnings.append(
                    (rec.ctid, f"accredited_by {qa!r} ignored: record has no owned_by")
                )
                continue
            if qa not in graph.entities:
                raise DanglingOrganizationError(
                    f"record {rec.ctid} references unknown organization {qa!r}",
                    ctid=rec.ctid, organization=qa,
                )
            aid = f"{owner}__accredited_by__{qa}"
            if aid in graph.assertions:
                continue  # idempotent re-import
            try:
                graph = add_assertion(
                    graph,
                    Assertion(aid, owner, "accredited_by", qa, DEFAULT_VALID_FROM,
                              provenance=f"ctdl:{rec.ctid}"),
                )
            except OccoError as exc:
                raise exc.with_detail(ctid=rec.ctid)

        # competencies taught map onto evidence_of edges
        for label in rec.teaches:
            term = comp_index.get(label.lower()) or comp_index.get(_slug(label))
            if term is None:
                term = _slug(label)
                schema = register_extension_class(
                    graph.schema,
                    OntClass(term, label, frozenset({"competence"})),
                )
                graph = GraphSnapshot(schema, graph.entities, graph.assertions)
                comp_index = _competence_index(graph)
                report.warnings.append(
                    (rec.ctid, f"competency {label!r} not registered, "
                               f"created extension class {term!r}")
                )
            comp_id = f"comp_{term}"
            if comp_id not in graph.entities:
                graph = add_entity(graph, Entity(comp_id, term, label))
            aid = f"{rec.ctid}__evidence_of__{comp_id}"
            if aid not in graph.assertions:
                graph = add_assertion(
                    graph,
                    Assertion(aid, rec.ctid, "evidence_of", comp_id, DEFAULT_VALID_FROM,
                              provenance=f"ctdl:{rec.ctid}"),
                )

    report.entities_created = len(graph.entities) - before_entities
    report.assertions_created = len(graph.assertions) - before_assertions
    report.mapping_used = sorted(mapping_used)
    return graph, report
