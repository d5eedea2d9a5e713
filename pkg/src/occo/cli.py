"""`occo` command line interface.

Exit codes: 0 success, 1 error or Invalid verdict, 2 usage error.
"""

from __future__ import annotations

import json
import os
import sys
from datetime import date

import click

from . import ctdl as ctdl_mod
from . import graph as graph_mod
from . import matcher as matcher_mod
from . import validity as validity_mod
from .errors import OccoError
from .schema import load_builtin_schema


def _canonical(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _parse_at(value: str | None) -> date:
    if value is None:
        return date.today()
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise click.UsageError(f"--at must be YYYY-MM-DD, got {value!r}")


def _load_graph(path: str) -> graph_mod.GraphSnapshot:
    from .service import load_graph_file  # shared loader handles schema extensions

    return load_graph_file(path)


def _fail(err: OccoError) -> None:
    click.echo(f"{err.code}: {err.message}", err=True)
    if err.detail:
        click.echo(_canonical(err.detail), err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Occupational credential registry, reasoner, importer, and matcher."""


@main.group()
def schema() -> None:
    """Ontology schema commands."""


@schema.command("dump")
def schema_dump() -> None:
    """Emit the built-in registry as newline-delimited records, sorted by term."""
    registry = load_builtin_schema()
    records = []
    for cls in registry.classes.values():
        records.append(
            {
                "kind": "class",
                "id": cls.id,
                "label": cls.label,
                "parents": sorted(cls.parents),
                "definition": cls.definition,
                "builtin": cls.builtin,
            }
        )
    for rel in registry.relations.values():
        rec = {
            "kind": "relation",
            "id": rel.id,
            "label": rel.label,
            "domain": rel.domain,
            "range": rel.range,
        }
        if rel.inverse:
            rec["inverse"] = rel.inverse
        records.append(rec)
    for con in registry.issuer_constraints:
        records.append(
            {
                "kind": "issuer_constraint",
                "id": con.credential_class,
                "required_issuer_class": con.required_issuer_class,
            }
        )
    records.sort(key=lambda r: (r["id"], r["kind"]))
    for rec in records:
        click.echo(_canonical(rec))


@main.command()
@click.argument("graph_path", type=click.Path(exists=True, dir_okay=False))
def load(graph_path: str) -> None:
    """Load and validate a graph file; print entity/assertion counts."""
    try:
        g = _load_graph(graph_path)
    except OccoError as err:
        _fail(err)
    click.echo(f"entities: {len(g.entities)}")
    click.echo(f"assertions: {len(g.assertions)}")


@main.command()
@click.argument("credential")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--at", "at_str", default=None, help="Evaluation date, YYYY-MM-DD.")
@click.option("--strict-revocation", is_flag=True, default=False,
              help="Post-issuance accreditation revocation also invalidates.")
def validate(credential: str, graph_path: str, at_str: str | None,
             strict_revocation: bool) -> None:
    """Classify a credential as Valid or Invalid; Invalid exits 1."""
    at = _parse_at(at_str)
    try:
        g = _load_graph(graph_path)
        verdict = validity_mod.classify_credential(g, credential, at, strict_revocation)
    except OccoError as err:
        _fail(err)
    click.echo(f"{verdict.credential} at {at.isoformat()}: {verdict.status}")
    for code in verdict.reasons:
        click.echo(code.value)
    if verdict.status != "Valid":
        sys.exit(1)


@main.command()
@click.argument("credential")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--at", "at_str", default=None)
@click.option("--strict-revocation", is_flag=True, default=False)
def explain(credential: str, graph_path: str, at_str: str | None,
            strict_revocation: bool) -> None:
    """Print the per-rule PASS/FAIL/SKIPPED report for a credential."""
    at = _parse_at(at_str)
    try:
        g = _load_graph(graph_path)
        report = validity_mod.explain(g, credential, at, strict_revocation)
    except OccoError as err:
        _fail(err)
    click.echo(report, nl=False)


@main.command()
@click.option("--holder", required=True)
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--jobs", "job_ids", default=None,
              help="Comma-separated job ids; default: every job in the graph.")
@click.option("-k", "top_k", default=10, show_default=True)
@click.option("--at", "at_str", default=None)
def match(holder: str, graph_path: str, job_ids: str | None, top_k: int,
          at_str: str | None) -> None:
    """Rank jobs for a holder by competency coverage."""
    at = _parse_at(at_str)
    try:
        g = _load_graph(graph_path)
        profile = matcher_mod.infer_profile(g, holder, at)
        if job_ids:
            jobs = [matcher_mod.job_from_graph(g, j.strip()) for j in job_ids.split(",")]
        else:
            jobs = matcher_mod.graph_jobs(g)
        reports = matcher_mod.rank_jobs(g, profile, jobs, top_k)
    except OccoError as err:
        _fail(err)
    for r in reports:
        click.echo(
            _canonical(
                {
                    "job": r.job,
                    "holder": r.holder,
                    "score": round(r.score, 6),
                    "matched": list(r.matched),
                    "missing": list(r.missing),
                }
            )
        )


@main.command()
@click.option("--holder", required=True)
@click.option("--job", "job_id", required=True)
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--at", "at_str", default=None)
def pathway(holder: str, job_id: str, graph_path: str, at_str: str | None) -> None:
    """Recommend a minimal-cost template set covering the holder's gap."""
    at = _parse_at(at_str)
    try:
        g = _load_graph(graph_path)
        profile = matcher_mod.infer_profile(g, holder, at)
        job = matcher_mod.job_from_graph(g, job_id)
        gap = matcher_mod.competency_gap(g.schema, profile, job)
        if not gap:
            click.echo(_canonical({"credentials": [], "total_cost": 0.0, "newly_covered": []}))
            return
        result = matcher_mod.recommend_pathway(gap, matcher_mod.graph_templates(g))
    except OccoError as err:
        _fail(err)
    click.echo(
        _canonical(
            {
                "credentials": list(result.credentials),
                "total_cost": round(result.total_cost, 6),
                "newly_covered": sorted(result.newly_covered),
            }
        )
    )


@main.command("what-if")
@click.option("--holder", required=True)
@click.option("--template", "template_id", required=True)
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--jobs", "job_ids", default=None)
@click.option("--at", "at_str", default=None)
def what_if(holder: str, template_id: str, graph_path: str, job_ids: str | None,
            at_str: str | None) -> None:
    """Show jobs whose score would strictly improve with the template."""
    at = _parse_at(at_str)
    try:
        g = _load_graph(graph_path)
        profile = matcher_mod.infer_profile(g, holder, at)
        if job_ids:
            jobs = [matcher_mod.job_from_graph(g, j.strip()) for j in job_ids.split(",")]
        else:
            jobs = matcher_mod.graph_jobs(g)
        rows = matcher_mod.what_if(g, profile, template_id, jobs)
    except OccoError as err:
        _fail(err)
    for job_id, old, new in rows:
        click.echo(_canonical({"job": job_id, "old_score": round(old, 6),
                               "new_score": round(new, 6)}))


@main.command("import-ctdl")
@click.argument("ctdl_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", default=None,
              help="Write the merged graph here instead of in place.")
def import_ctdl(ctdl_file: str, graph_path: str, out_path: str | None) -> None:
    """Merge a CTDL-subset document into a graph file."""
    from .service import load_graph_file, save_graph_file

    try:
        g = load_graph_file(graph_path)
        with open(ctdl_file, encoding="utf-8") as fh:
            records = ctdl_mod.parse_ctdl(fh.read())
        g, report = ctdl_mod.map_to_graph(records, g)
        save_graph_file(g, out_path or graph_path)
    except OccoError as err:
        _fail(err)
    click.echo(f"entities_created: {report.entities_created}")
    click.echo(f"assertions_created: {report.assertions_created}")
    for ctdl_type, term in report.mapping_used:
        click.echo(f"mapped: {ctdl_type} -> {term}")
    for ctid, message in report.warnings:
        click.echo(f"warning: {ctid}: {message}")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
def export(graph_path: str) -> None:
    """Print the canonical export of a graph file."""
    try:
        g = _load_graph(graph_path)
    except OccoError as err:
        _fail(err)
    click.echo(graph_mod.export_graph(g), nl=False)


@main.command()
@click.option("--graph", "graph_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Graph file; falls back to the OCCO_GRAPH env var.")
@click.option("--bind", default="127.0.0.1:7468", show_default=True)
def serve(graph_path: str | None, bind: str) -> None:
    """Run the HTTP registry service."""
    import uvicorn

    from .service import GraphStore, create_app

    path = graph_path or os.environ.get("OCCO_GRAPH")
    if not path:
        raise click.UsageError("provide --graph or set OCCO_GRAPH")
    try:
        store = GraphStore(path)
    except OccoError as err:
        _fail(err)
    host, _, port = bind.rpartition(":")
    app = create_app(store)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":  # pragma: no cover
    main()
