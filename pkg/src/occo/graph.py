"""Typed instance store over the ontology schema.

Snapshots are immutable values: every mutation returns a new snapshot and
leaves its input untouched. Assertions carry a validity interval
(``valid_from`` inclusive, ``valid_to`` exclusive) at day granularity.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from datetime import date
from types import MappingProxyType
from typing import Iterable, Mapping, Union

from .errors import (
    AbstractClassError,
    AlreadyClosedError,
    DanglingEndpointError,
    DuplicateIdError,
    OccoError,
    ParseError,
    SignatureViolationError,
    TemporalOrderError,
    UnknownAssertionError,
    UnknownClassError,
    UnknownEntityError,
    UnknownTermError,
)
from .schema import SchemaRegistry, is_subclass_of

Scalar = Union[str, int, float, bool, date]

# Upper-spine terms too generic to instantiate directly.
DEFAULT_ABSTRACT_CLASSES = frozenset({"entity", "continuant", "occurrent"})

FORMAT_VERSION = "1"

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


@dataclass(frozen=True)
class Entity:
    id: str
    ont_class: str
    label: str = ""
    attributes: Mapping[str, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise OccoError("entity id must be nonempty")
        object.__setattr__(self, "attributes", MappingProxyType(dict(self.attributes)))


@dataclass(frozen=True)
class Assertion:
    id: str
    subject: str
    relation: str
    object: str
    valid_from: date
    valid_to: date | None = None
    provenance: str = ""

    def __post_init__(self):
        if not self.id:
            raise OccoError("assertion id must be nonempty")
        if self.valid_to is not None and self.valid_to < self.valid_from:
            raise TemporalOrderError(
                f"assertion {self.id}: valid_to precedes valid_from", assertion=self.id
            )

    def active_at(self, at: date) -> bool:
        return self.valid_from <= at and (self.valid_to is None or self.valid_to > at)


@dataclass(frozen=True)
class GraphSnapshot:
    schema: SchemaRegistry
    entities: Mapping[str, Entity] = field(default_factory=dict)
    assertions: Mapping[str, Assertion] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entities", MappingProxyType(dict(self.entities)))
        object.__setattr__(self, "assertions", MappingProxyType(dict(self.assertions)))

    def entity(self, entity_id: str) -> Entity:
        e = self.entities.get(entity_id)
        if e is None:
            raise UnknownEntityError(f"unknown entity {entity_id!r}", entity=entity_id)
        return e

    def assertion(self, assertion_id: str) -> Assertion:
        a = self.assertions.get(assertion_id)
        if a is None:
            raise UnknownAssertionError(
                f"unknown assertion {assertion_id!r}", assertion=assertion_id
            )
        return a


def empty_graph(schema: SchemaRegistry) -> GraphSnapshot:
    return GraphSnapshot(schema, {}, {})


def add_entity(
    graph: GraphSnapshot,
    e: Entity,
    abstract_classes: frozenset[str] = DEFAULT_ABSTRACT_CLASSES,
) -> GraphSnapshot:
    if e.id in graph.entities or e.id in graph.assertions:
        raise DuplicateIdError(f"id {e.id!r} already used", entity=e.id)
    if not graph.schema.has_class(e.ont_class):
        raise UnknownClassError(f"unknown class {e.ont_class!r}", term=e.ont_class)
    if e.ont_class in abstract_classes:
        raise AbstractClassError(
            f"class {e.ont_class!r} is abstract and cannot be instantiated",
            term=e.ont_class,
        )
    entities = dict(graph.entities)
    entities[e.id] = e
    return GraphSnapshot(graph.schema, entities, graph.assertions)


def add_assertion(graph: GraphSnapshot, a: Assertion) -> GraphSnapshot:
    if a.id in graph.assertions or a.id in graph.entities:
        raise DuplicateIdError(f"id {a.id!r} already used", assertion=a.id)
    subj = graph.entities.get(a.subject)
    obj = graph.entities.get(a.object)
    if subj is None:
        raise DanglingEndpointError(f"unknown subject {a.subject!r}", entity=a.subject)
    if obj is None:
        raise DanglingEndpointError(f"unknown object {a.object!r}", entity=a.object)
    rel = graph.schema.require_relation(a.relation)
    if not is_subclass_of(graph.schema, subj.ont_class, rel.domain):
        raise SignatureViolationError(
            f"subject of {a.relation} must be a {rel.domain}, got {subj.ont_class}",
            relation=a.relation, expected_domain=rel.domain, expected_range=rel.range,
        )
    if not is_subclass_of(graph.schema, obj.ont_class, rel.range):
        raise SignatureViolationError(
            f"object of {a.relation} must be a {rel.range}, got {obj.ont_class}",
            relation=a.relation, expected_domain=rel.domain, expected_range=rel.range,
        )
    assertions = dict(graph.assertions)
    assertions[a.id] = a
    return GraphSnapshot(graph.schema, graph.entities, assertions)


def revoke(graph: GraphSnapshot, assertion_id: str, at: date) -> GraphSnapshot:
    a = graph.assertion(assertion_id)
    if a.valid_to is not None and a.valid_to <= at:
        raise AlreadyClosedError(
            f"assertion {assertion_id!r} already closed at {a.valid_to.isoformat()}",
            assertion=assertion_id,
        )
    assertions = dict(graph.assertions)
    assertions[assertion_id] = replace(a, valid_to=at)
    return GraphSnapshot(graph.schema, graph.entities, assertions)


def active_assertions(
    graph: GraphSnapshot,
    subject: str | None = None,
    relation: str | None = None,
    object: str | None = None,
    *,
    at: date,
) -> list[Assertion]:
    """All assertions matching every provided filter and active at ``at``."""
    if subject is not None:
        graph.entity(subject)
    if object is not None:
        graph.entity(object)
    if relation is not None:
        graph.schema.require_relation(relation)
    out = [
        a
        for a in graph.assertions.values()
        if (subject is None or a.subject == subject)
        and (relation is None or a.relation == relation)
        and (object is None or a.object == object)
        and a.active_at(at)
    ]
    out.sort(key=lambda a: a.id)
    return out


# ---------------------------------------------------------------------------
# Persistence: newline-delimited canonical `.occg` format
# ---------------------------------------------------------------------------

_ENTITY_FIELDS = {"kind", "id", "class", "label", "attributes"}
_ASSERTION_FIELDS = {
    "kind", "id", "subject", "relation", "object", "valid_from", "valid_to", "provenance",
}
_HEADER_FIELDS = {"kind", "format_version", "schema_hash"}


def _encode_scalar(v: Scalar):
    if isinstance(v, date):
        return v.isoformat()
    return v


def _decode_scalar(v, line: int) -> Scalar:
    # ISO-date-shaped strings canonicalize to dates; see format notes in README
    if isinstance(v, str):
        if _DATE_RE.match(v):
            try:
                return date.fromisoformat(v)
            except ValueError:
                return v
        return v
    if isinstance(v, bool) or isinstance(v, (int, float)):
        return v
    raise ParseError(f"attribute values must be scalars, got {type(v).__name__}", line=line)


def _entity_record(e: Entity) -> dict:
    return {
        "kind": "entity",
        "id": e.id,
        "class": e.ont_class,
        "label": e.label,
        "attributes": {k: _encode_scalar(v) for k, v in sorted(e.attributes.items())},
    }


def _assertion_record(a: Assertion) -> dict:
    rec = {
        "kind": "assertion",
        "id": a.id,
        "subject": a.subject,
        "relation": a.relation,
        "object": a.object,
        "valid_from": a.valid_from.isoformat(),
        "provenance": a.provenance,
    }
    if a.valid_to is not None:
        rec["valid_to"] = a.valid_to.isoformat()
    return rec


def _dump_line(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def export_graph(graph: GraphSnapshot) -> str:
    """Canonical export: header, entities by id, assertions by id."""
    lines = [
        _dump_line(
            {"kind": "header", "format_version": FORMAT_VERSION,
             "schema_hash": graph.schema.hash()}
        )
    ]
    for eid in sorted(graph.entities):
        lines.append(_dump_line(_entity_record(graph.entities[eid])))
    for aid in sorted(graph.assertions):
        lines.append(_dump_line(_assertion_record(graph.assertions[aid])))
    return "\n".join(lines) + "\n"


def _parse_date(value, field_name: str, line: int) -> date:
    if not isinstance(value, str) or not _DATE_RE.match(value):
        raise ParseError(f"{field_name} must be a YYYY-MM-DD string", line=line)
    try:
        return date.fromisoformat(value)
    except ValueError as exc:
        raise ParseError(f"{field_name}: {exc}", line=line)


def import_graph(schema: SchemaRegistry, text: str) -> GraphSnapshot:
    """Parse and load a `.occg` document; all-or-nothing.

    Two-pass load: entities first, then assertions, so records need no
    topological ordering in the file.
    """
    entities: list[tuple[int, Entity]] = []
    assertions: list[tuple[int, Assertion]] = []
    saw_header = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed record: {exc.msg}", line=line_no)
        if not isinstance(rec, dict):
            raise ParseError("record must be an object", line=line_no)
        kind = rec.get("kind")
        if kind == "header":
            if saw_header:
                raise ParseError("duplicate header record", line=line_no)
            unknown = set(rec) - _HEADER_FIELDS
            if unknown:
                raise ParseError(f"unknown header fields {sorted(unknown)}", line=line_no)
            if rec.get("format_version") != FORMAT_VERSION:
                raise ParseError(
                    f"unsupported format_version {rec.get('format_version')!r}", line=line_no
                )
            if "schema_hash" not in rec:
                raise ParseError("header missing schema_hash", line=line_no)
            saw_header = True
        elif kind == "entity":
            unknown = set(rec) - _ENTITY_FIELDS
            if unknown:
                raise ParseError(f"unknown entity fields {sorted(unknown)}", line=line_no)
            attrs_raw = rec.get("attributes", {})
            if not isinstance(attrs_raw, dict):
                raise ParseError("attributes must be an object", line=line_no)
            try:
                e = Entity(
                    id=str(rec.get("id", "")),
                    ont_class=str(rec.get("class", "")),
                    label=str(rec.get("label", "")),
                    attributes={k: _decode_scalar(v, line_no) for k, v in attrs_raw.items()},
                )
            except OccoError as exc:
                raise exc.with_detail(line=line_no)
            entities.append((line_no, e))
        elif kind == "assertion":
            unknown = set(rec) - _ASSERTION_FIELDS
            if unknown:
                raise ParseError(f"unknown assertion fields {sorted(unknown)}", line=line_no)
            valid_from = _parse_date(rec.get("valid_from"), "valid_from", line_no)
            valid_to = None
            if "valid_to" in rec:
                valid_to = _parse_date(rec["valid_to"], "valid_to", line_no)
            try:
                a = Assertion(
                    id=str(rec.get("id", "")),
                    subject=str(rec.get("subject", "")),
                    relation=str(rec.get("relation", "")),
                    object=str(rec.get("object", "")),
                    valid_from=valid_from,
                    valid_to=valid_to,
                    provenance=str(rec.get("provenance", "")),
                )
            except OccoError as exc:
                raise exc.with_detail(line=line_no)
            assertions.append((line_no, a))
        else:
            raise ParseError(f"unknown record kind {kind!r}", line=line_no)

    if not saw_header:
        raise ParseError("missing header record", line=1)

    graph = empty_graph(schema)
    for line_no, e in entities:
        try:
            graph = add_entity(graph, e)
        except OccoError as exc:
            raise exc.with_detail(line=line_no)
    for line_no, a in assertions:
        try:
            graph = add_assertion(graph, a)
        except OccoError as exc:
            raise exc.with_detail(line=line_no)
    return graph
