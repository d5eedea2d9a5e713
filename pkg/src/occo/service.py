"""HTTP registry service over a file-backed graph.

Single node, multi-reader/single-writer: readers use the latest published
snapshot without locking; mutations serialize through one lock and persist
atomically (write-temp-then-rename) before publishing.

Schema extension classes (created by CTDL ingest) are persisted in a sidecar
file next to the graph (`<graph>.ext`) so a restart restores the registry.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from datetime import date
from typing import Callable

from fastapi import FastAPI, Request, Response

from . import matcher as matcher_mod
from .ctdl import map_to_graph, parse_ctdl
from .errors import OccoError, ParseError
from .graph import (
    Assertion,
    Entity,
    GraphSnapshot,
    add_assertion,
    add_entity,
    export_graph,
    import_graph,
    revoke,
)
from .schema import OntClass, load_builtin_schema, register_extension_class
from .validity import classify_credential, explain

_NOT_FOUND_CODES = {"unknown-entity", "unknown-term", "unknown-assertion",
                    "unknown-class", "unknown-template"}
_CONFLICT_CODES = {"duplicate-id", "already-closed", "duplicate-ctid"}


def _ext_path(path: str) -> str:
    return path + ".ext"


def load_graph_file(path: str) -> GraphSnapshot:
    schema = load_builtin_schema()
    ext = _ext_path(path)
    if os.path.exists(ext):
        with open(ext, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                schema = register_extension_class(
                    schema,
                    OntClass(rec["id"], rec.get("label", rec["id"]),
                             frozenset(rec.get("parents", [])),
                             rec.get("definition", "")),
                )
    with open(path, encoding="utf-8") as fh:
        return import_graph(schema, fh.read())


def _atomic_write(path: str, content: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".occo-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_graph_file(graph: GraphSnapshot, path: str) -> None:
    extensions = [c for c in graph.schema.classes.values() if not c.builtin]
    if extensions:
        lines = [
            json.dumps(
                {"id": c.id, "label": c.label, "parents": sorted(c.parents),
                 "definition": c.definition},
                sort_keys=True,
            )
            for c in sorted(extensions, key=lambda c: c.id)
        ]
        _atomic_write(_ext_path(path), "\n".join(lines) + "\n")
    _atomic_write(path, export_graph(graph))


class GraphStore:
    """Holds the published snapshot and serializes mutations."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()
        self._snapshot = load_graph_file(path)

    @property
    def snapshot(self) -> GraphSnapshot:
        return self._snapshot

    def mutate(self, fn: Callable[[GraphSnapshot], GraphSnapshot]) -> GraphSnapshot:
        with self._lock:
            new = fn(self._snapshot)
            save_graph_file(new, self.path)
            self._snapshot = new
            return new


def _json(payload, status: int = 200) -> Response:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return Response(content=body, status_code=status, media_type="application/json")


def _error_response(err: OccoError) -> Response:
    if err.code in _NOT_FOUND_CODES:
        status = 404
    elif err.code in _CONFLICT_CODES:
        status = 409
    else:
        status = 400
    return _json({"code": err.code, "message": err.message, "detail": err.detail}, status)


def _parse_date_param(value: str | None) -> date:
    if value is None:
        return date.today()
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise ParseError(f"bad date {value!r}")


def _entity_body(e: Entity) -> dict:
    from .graph import _encode_scalar  # canonical scalar encoding

    return {
        "id": e.id,
        "class": e.ont_class,
        "label": e.label,
        "attributes": {k: _encode_scalar(v) for k, v in sorted(e.attributes.items())},
    }


def _verdict_body(v) -> dict:
    return {
        "credential": v.credential,
        "at": v.at.isoformat(),
        "status": v.status,
        "reasons": [c.value for c in v.reasons],
        "trace": list(v.trace),
    }


def _match_body(r: matcher_mod.MatchReport) -> dict:
    return {
        "job": r.job,
        "holder": r.holder,
        "score": round(r.score, 6),
        "matched": list(r.matched),
        "missing": list(r.missing),
    }


def create_app(store: GraphStore) -> FastAPI:
    app = FastAPI(title="occo registry", docs_url=None, redoc_url=None)

    @app.exception_handler(OccoError)
    async def _occo_error(_request: Request, err: OccoError):
        return _error_response(err)

    # --- mutations ---

    @app.post("/entities")
    async def post_entity(request: Request):
        body = await request.json()
        e = Entity(
            id=str(body.get("id", "")),
            ont_class=str(body.get("class", "")),
            label=str(body.get("label", "")),
            attributes=_decode_attrs(body.get("attributes", {})),
        )
        store.mutate(lambda g: add_entity(g, e))
        return _json(_entity_body(e), 201)

    @app.post("/assertions")
    async def post_assertion(request: Request):
        body = await request.json()
        a = Assertion(
            id=str(body.get("id", "")),
            subject=str(body.get("subject", "")),
            relation=str(body.get("relation", "")),
            object=str(body.get("object", "")),
            valid_from=_parse_date_param(body.get("valid_from")),
            valid_to=(
                date.fromisoformat(body["valid_to"]) if body.get("valid_to") else None
            ),
            provenance=str(body.get("provenance", "")),
        )
        store.mutate(lambda g: add_assertion(g, a))
        return _json({"id": a.id}, 201)

    @app.post("/assertions/{assertion_id}/revoke")
    async def post_revoke(assertion_id: str, request: Request):
        body = await request.json()
        at = _parse_date_param(body.get("at"))
        store.mutate(lambda g: revoke(g, assertion_id, at))
        return _json({"id": assertion_id, "valid_to": at.isoformat()})

    @app.post("/import/ctdl")
    async def post_import_ctdl(request: Request):
        text = (await request.body()).decode("utf-8")
        records = parse_ctdl(text)
        result: dict = {}

        def apply(g: GraphSnapshot) -> GraphSnapshot:
            new_graph, report = map_to_graph(records, g)
            result["report"] = report
            return new_graph

        store.mutate(apply)
        report = result["report"]
        return _json(
            {
                "entities_created": report.entities_created,
                "assertions_created": report.assertions_created,
                "warnings": [{"ctid": c, "message": m} for c, m in report.warnings],
                "mapping_used": [
                    {"ctdl_type": t, "term": term} for t, term in report.mapping_used
                ],
            }
        )

    # --- reads ---

    @app.get("/entities/{entity_id}")
    async def get_entity(entity_id: str):
        return _json(_entity_body(store.snapshot.entity(entity_id)))

    @app.get("/credentials/{cred_id}/validity")
    async def get_validity(cred_id: str, at: str | None = None):
        g = store.snapshot
        verdict = classify_credential(g, cred_id, _parse_date_param(at))
        return _json(_verdict_body(verdict))

    @app.get("/credentials/{cred_id}/explain")
    async def get_explain(cred_id: str, at: str | None = None):
        g = store.snapshot
        report = explain(g, cred_id, _parse_date_param(at))
        return Response(content=report, media_type="text/plain; charset=utf-8")

    @app.get("/holders/{holder_id}/profile")
    async def get_profile(holder_id: str, at: str | None = None,
                          valid_only: bool = True):
        g = store.snapshot
        profile = matcher_mod.infer_profile(g, holder_id, _parse_date_param(at), valid_only)
        return _json(
            {
                "holder": profile.holder,
                "held": {term: list(sources) for term, sources in profile.held.items()},
            }
        )

    @app.get("/holders/{holder_id}/matches")
    async def get_matches(holder_id: str, k: int = 10, at: str | None = None):
        g = store.snapshot
        when = _parse_date_param(at)
        profile = matcher_mod.infer_profile(g, holder_id, when)
        jobs = matcher_mod.graph_jobs(g)
        reports = matcher_mod.rank_jobs(g, profile, jobs, k)
        return _json([_match_body(r) for r in reports])

    @app.get("/jobs/{job_id}/candidates")
    async def get_candidates(job_id: str, k: int = 10, at: str | None = None):
        g = store.snapshot
        when = _parse_date_param(at)
        job = matcher_mod.job_from_graph(g, job_id)
        from .schema import is_subclass_of

        holders = [
            eid for eid in sorted(g.entities)
            if is_subclass_of(g.schema, g.entities[eid].ont_class, "organism")
        ]
        reports = matcher_mod.rank_candidates(g, job, holders, when, k)
        return _json([_match_body(r) for r in reports])

    @app.post("/pathway")
    async def post_pathway(request: Request):
        body = await request.json()
        g = store.snapshot
        when = _parse_date_param(body.get("at"))
        profile = matcher_mod.infer_profile(g, str(body.get("holder", "")), when)
        job = matcher_mod.job_from_graph(g, str(body.get("job", "")))
        gap = matcher_mod.competency_gap(g.schema, profile, job)
        if not gap:
            return _json({"credentials": [], "total_cost": 0.0, "newly_covered": []})
        pathway = matcher_mod.recommend_pathway(gap, matcher_mod.graph_templates(g))
        return _json(
            {
                "credentials": list(pathway.credentials),
                "total_cost": round(pathway.total_cost, 6),
                "newly_covered": sorted(pathway.newly_covered),
            }
        )

    @app.post("/what-if")
    async def post_what_if(request: Request):
        body = await request.json()
        g = store.snapshot
        when = _parse_date_param(body.get("at"))
        profile = matcher_mod.infer_profile(g, str(body.get("holder", "")), when)
        rows = matcher_mod.what_if(
            g, profile, str(body.get("template", "")), matcher_mod.graph_jobs(g)
        )
        return _json(
            [
                {"job": job_id, "old_score": round(old, 6), "new_score": round(new, 6)}
                for job_id, old, new in rows
            ]
        )

    @app.get("/schema/classes")
    async def get_classes():
        g = store.snapshot
        return _json(
            [
                {
                    "id": c.id,
                    "label": c.label,
                    "parents": sorted(c.parents),
                    "definition": c.definition,
                    "builtin": c.builtin,
                }
                for c in sorted(g.schema.classes.values(), key=lambda c: c.id)
            ]
        )

    @app.get("/schema/relations")
    async def get_relations():
        g = store.snapshot
        return _json(
            [
                {
                    "id": r.id,
                    "label": r.label,
                    "domain": r.domain,
                    "range": r.range,
                    "inverse": r.inverse,
                }
                for r in sorted(g.schema.relations.values(), key=lambda r: r.id)
            ]
        )

    @app.get("/export")
    async def get_export():
        return Response(content=export_graph(store.snapshot),
                        media_type="text/plain; charset=utf-8")

    return app


def _decode_attrs(raw) -> dict:
    from .graph import _decode_scalar

    if not isinstance(raw, dict):
        raise ParseError("attributes must be an object")
    return {str(k): _decode_scalar(v, 0) for k, v in raw.items()}
