"""Competency-based matching between holders, jobs, and credential templates.

Competencies are identified by their ontology class terms: a graph competence
entity of class ``welding_skill`` contributes the term ``welding_skill`` to
profiles and requirements, and a held term satisfies a required term when it
is a registered subclass of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping, Sequence

from .errors import (
    NoTemplatesError,
    UncoverableGapError,
    UnknownEntityError,
    UnknownTemplateError,
    WrongClassError,
)
from .graph import GraphSnapshot
from .schema import SchemaRegistry, is_subclass_of
from .validity import classify_credential

TEMPLATE_ATTR = "template"
COST_ATTR = "cost"
OWNED_BY_ATTR = "owned_by"


@dataclass(frozen=True)
class CompetencyProfile:
    holder: str
    held: Mapping[str, tuple[str, ...]]  # competence term -> source ids


@dataclass(frozen=True)
class JobDescription:
    id: str
    employer: str
    required: Mapping[str, float]  # competence term -> positive weight


@dataclass(frozen=True)
class MatchReport:
    job: str
    holder: str
    score: float
    matched: tuple[str, ...]
    missing: tuple[str, ...]


@dataclass(frozen=True)
class CredentialTemplate:
    id: str
    covers: frozenset[str]
    cost: float = 1.0


@dataclass(frozen=True)
class Pathway:
    credentials: tuple[str, ...]
    total_cost: float
    newly_covered: frozenset[str]


def infer_profile(
    graph: GraphSnapshot,
    holder: str,
    at: date,
    valid_only: bool = True,
) -> CompetencyProfile:
    """Competencies a holder can demonstrate at ``at``.

    Direct bearer_of assertions always count; credential-evidenced
    competencies count only when the credential classifies Valid (unless
    ``valid_only`` is off).
    """
    schema = graph.schema
    entity = graph.entity(holder)
    if not is_subclass_of(schema, entity.ont_class, "organism"):
        raise WrongClassError(
            f"entity {holder!r} has class {entity.ont_class}, not an organism", entity=holder
        )
    held: dict[str, list[str]] = {}

    def record(term: str, source: str) -> None:
        sources = held.setdefault(term, [])
        if source not in sources:
            sources.append(source)

    for a in sorted(graph.assertions.values(), key=lambda a: a.id):
        if a.relation == "bearer_of" and a.subject == holder and a.active_at(at):
            comp = graph.entities[a.object]
            if is_subclass_of(schema, comp.ont_class, "competence"):
                record(comp.ont_class, a.id)

    credentials = sorted(
        a.subject
        for a in graph.assertions.values()
        if a.relation == "is_about" and a.object == holder and a.active_at(at)
        and is_subclass_of(schema, graph.entities[a.subject].ont_class, "credential")
    )
    for cred in credentials:
        if valid_only and classify_credential(graph, cred, at).status != "Valid":
            continue
        for ev in sorted(graph.assertions.values(), key=lambda a: a.id):
            if ev.relation == "evidence_of" and ev.subject == cred and ev.active_at(at):
                comp = graph.entities[ev.object]
                record(comp.ont_class, cred)

    return CompetencyProfile(holder, {k: tuple(v) for k, v in sorted(held.items())})


def _satisfies(schema: SchemaRegistry, held_terms: Iterable[str], required: str) -> bool:
    for h in held_terms:
        if h == required:
            return True
        if schema.has_class(h) and schema.has_class(required) and is_subclass_of(
            schema, h, required
        ):
            return True
    return False


def score_match(
    schema: SchemaRegistry, profile: CompetencyProfile, job: JobDescription
) -> MatchReport:
    """Weighted coverage of the job's requirements by the profile.

    A requirement counts as present when the profile holds it or any
    registered subclass of it. Empty requirements score 1.0.
    """
    held_terms = list(profile.held)
    matched: list[str] = []
    missing: list[str] = []
    for term in sorted(job.required):
        if _satisfies(schema, held_terms, term):
            matched.append(term)
        else:
            missing.append(term)
    total = sum(job.required.values())
    if total == 0 or not missing:
        score = 1.0  # full coverage is exactly 1, regardless of float summation
    elif not matched:
        score = 0.0
    else:
        score = min(sum(job.required[t] for t in matched) / total, 1.0)
    return MatchReport(job.id, profile.holder, score, tuple(matched), tuple(missing))


def competency_gap(
    schema: SchemaRegistry, profile: CompetencyProfile, job: JobDescription
) -> frozenset[str]:
    return frozenset(score_match(schema, profile, job).missing)


def rank_jobs(
    graph: GraphSnapshot,
    profile: CompetencyProfile,
    jobs: Sequence[JobDescription],
    k: int,
) -> list[MatchReport]:
    reports = [score_match(graph.schema, profile, j) for j in jobs]
    reports.sort(key=lambda r: (-r.score, r.job))
    return reports[: max(k, 0)]


def rank_candidates(
    graph: GraphSnapshot,
    job: JobDescription,
    holders: Sequence[str],
    at: date,
    k: int,
) -> list[MatchReport]:
    reports = [
        score_match(graph.schema, infer_profile(graph, h, at), job) for h in holders
    ]
    reports.sort(key=lambda r: (-r.score, r.holder))
    return reports[: max(k, 0)]


def load_template(graph: GraphSnapshot, template_id: str) -> CredentialTemplate:
    """Read a credential-template entity and its evidence_of coverage."""
    entity = graph.entities.get(template_id)
    if entity is None or not is_subclass_of(graph.schema, entity.ont_class, "credential"):
        raise UnknownTemplateError(f"unknown template {template_id!r}", entity=template_id)
    covers = frozenset(
        graph.entities[a.object].ont_class
        for a in graph.assertions.values()
        if a.relation == "evidence_of" and a.subject == template_id
    )
    cost_raw = entity.attributes.get(COST_ATTR, 1.0)
    cost = float(cost_raw) if isinstance(cost_raw, (int, float)) else 1.0
    return CredentialTemplate(template_id, covers, cost)


def graph_templates(graph: GraphSnapshot) -> list[CredentialTemplate]:
    """All entities flagged as credential templates, id order."""
    out = []
    for eid in sorted(graph.entities):
        e = graph.entities[eid]
        if e.attributes.get(TEMPLATE_ATTR) and is_subclass_of(
            graph.schema, e.ont_class, "credential"
        ):
            out.append(load_template(graph, eid))
    return out


def recommend_pathway(
    gap: Iterable[str], catalog: Sequence[CredentialTemplate]
) -> Pathway:
    """Greedy weighted set cover over the gap.

    Repeatedly pick the template maximizing newly-covered / cost; ties break
    on lower cost then template id. Raises when the gap is not coverable.
    """
    remaining = set(gap)
    uncoverable = remaining - set().union(*(t.covers for t in catalog), set())
    if uncoverable:
        raise UncoverableGapError(
            f"no template covers {sorted(uncoverable)}",
            competencies=sorted(uncoverable),
        )
    chosen: list[CredentialTemplate] = []
    while remaining:
        best = None
        best_key = None
        for t in catalog:
            gain = len(t.covers & remaining)
            if gain == 0:
                continue
            cost = t.cost if t.cost > 0 else 1e-9
            key = (-(gain / cost), t.cost, t.id)
            if best_key is None or key < best_key:
                best, best_key = t, key
        assert best is not None  # uncoverable case handled above
        chosen.append(best)
        remaining -= best.covers
    newly = frozenset(gap) & frozenset().union(*(t.covers for t in chosen), frozenset())
    return Pathway(
        tuple(t.id for t in chosen),
        sum(t.cost for t in chosen),
        newly,
    )


def what_if(
    graph: GraphSnapshot,
    profile: CompetencyProfile,
    template_id: str,
    jobs: Sequence[JobDescription],
) -> list[tuple[str, float, float]]:
    """Jobs whose score strictly improves if the template's competencies are added."""
    template = load_template(graph, template_id)
    boosted_held = dict(profile.held)
    for term in template.covers:
        boosted_held.setdefault(term, (template.id,))
    boosted = CompetencyProfile(profile.holder, boosted_held)
    out = []
    for job in jobs:
        old = score_match(graph.schema, profile, job).score
        new = score_match(graph.schema, boosted, job).score
        if new > old:
            out.append((job.id, old, new))
    out.sort(key=lambda row: (-(row[2] - row[1]), row[0]))
    return out


def recommend_recruits(
    graph: GraphSnapshot,
    provider: str,
    holders: Sequence[str],
    jobs: Sequence[JobDescription],
    at: date,
    k: int,
) -> list[tuple[str, str, int]]:
    """(holder, template, benefiting-job-count) suggestions for a provider."""
    entity = graph.entity(provider)
    if not is_subclass_of(graph.schema, entity.ont_class, "organization"):
        raise WrongClassError(
            f"entity {provider!r} has class {entity.ont_class}, not an organization",
            entity=provider,
        )
    templates = [
        t for t in graph_templates(graph)
        if graph.entities[t.id].attributes.get(OWNED_BY_ATTR) == provider
    ]
    if not templates:
        raise NoTemplatesError(f"provider {provider!r} owns no templates", entity=provider)
    rows = []
    for holder in holders:
        profile = infer_profile(graph, holder, at)
        for t in templates:
            count = len(what_if(graph, profile, t.id, jobs))
            if count > 0:
                rows.append((holder, t.id, count))
    rows.sort(key=lambda r: (-r[2], r[0], r[1]))
    return rows[: max(k, 0)]


def job_from_graph(graph: GraphSnapshot, job_id: str) -> JobDescription:
    """Build a JobDescription from a job_description entity.

    Requirements come from requires_competence assertions; per-competence
    weights may be overridden with ``weight:<term>`` entity attributes
    (default 1.0). The employer comes from the posted_by assertion when
    present.
    """
    entity = graph.entity(job_id)
    if not is_subclass_of(graph.schema, entity.ont_class, "job_description"):
        raise WrongClassError(
            f"entity {job_id!r} has class {entity.ont_class}, not a job_description",
            entity=job_id,
        )
    required: dict[str, float] = {}
    for a in sorted(graph.assertions.values(), key=lambda a: a.id):
        if a.relation == "requires_competence" and a.subject == job_id:
            term = graph.entities[a.object].ont_class
            weight = entity.attributes.get(f"weight:{term}", 1.0)
            required[term] = float(weight) if isinstance(weight, (int, float)) else 1.0
    employer = ""
    for a in sorted(graph.assertions.values(), key=lambda a: a.id):
        if a.relation == "posted_by" and a.subject == job_id:
            employer = a.object
            break
    return JobDescription(job_id, employer, required)


def graph_jobs(graph: GraphSnapshot) -> list[JobDescription]:
    return [
        job_from_graph(graph, eid)
        for eid in sorted(graph.entities)
        if is_subclass_of(graph.schema, graph.entities[eid].ont_class, "job_description")
    ]
