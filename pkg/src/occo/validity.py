"""Credential validity reasoning.

A credential is valid at a time point when the full authority chain holds:
it was issued, it is about exactly one holder, its issuer was accredited at
issuance, the issuer's type fits the credential subtype, and the holder
bears every competence the credential is evidence of. Each rule failure
maps to one reason code; the verdict carries an assertion-level trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Sequence

from .errors import NotACredentialError, UnknownEntityError, WrongClassError
from .graph import Assertion, GraphSnapshot
from .schema import GOVERNMENT_AUTHORIZATION_ATTR, is_subclass_of


class ReasonCode(str, Enum):
    NO_ISSUANCE = "NO_ISSUANCE"
    HOLDER_MISSING = "HOLDER_MISSING"
    UNAUTHORIZED_ISSUER = "UNAUTHORIZED_ISSUER"
    ACCREDITATION_INACTIVE = "ACCREDITATION_INACTIVE"
    ISSUER_TYPE_MISMATCH = "ISSUER_TYPE_MISMATCH"
    COMPETENCE_UNSUPPORTED = "COMPETENCE_UNSUPPORTED"


PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"

RULE_NAMES = {
    "R1": "issuance",
    "R2": "holder",
    "R3": "issuer-authority",
    "R4": "issuer-type",
    "R5": "competence-support",
}


@dataclass(frozen=True)
class RuleOutcome:
    rule: str
    status: str
    codes: tuple[ReasonCode, ...] = ()
    consulted: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidityVerdict:
    credential: str
    at: date
    status: str  # "Valid" | "Invalid"
    reasons: tuple[ReasonCode, ...]
    trace: tuple[str, ...]
    rules: tuple[RuleOutcome, ...] = ()


def _require_credential(graph: GraphSnapshot, cred: str):
    entity = graph.entity(cred)
    if not is_subclass_of(graph.schema, entity.ont_class, "credential"):
        raise NotACredentialError(
            f"entity {cred!r} has class {entity.ont_class}, not a credential", entity=cred
        )
    return entity


def _active(graph: GraphSnapshot, at: date, **filters) -> list[Assertion]:
    # local filter that tolerates entity-less queries during rule evaluation
    out = [
        a
        for a in graph.assertions.values()
        if all(getattr(a, k) == v for k, v in filters.items()) and a.active_at(at)
    ]
    out.sort(key=lambda a: a.id)
    return out


def _find_issuance(graph: GraphSnapshot, cred: str):
    """Pick the issuing process for a credential, if any.

    Candidates are (has_output, has_agent) pairs whose process is a
    credential_issuing_process and whose agent is an organization, with both
    edges active at the issuance date (the has_output edge's valid_from).
    The earliest issuance wins; ties break on assertion ids.
    """
    schema = graph.schema
    candidates = []
    for ho in graph.assertions.values():
        if ho.relation != "has_output" or ho.object != cred:
            continue
        proc = graph.entities.get(ho.subject)
        if proc is None or not is_subclass_of(schema, proc.ont_class, "credential_issuing_process"):
            continue
        issued_on = ho.valid_from
        if not ho.active_at(issued_on):
            continue
        for ha in graph.assertions.values():
            if ha.relation != "has_agent" or ha.subject != proc.id:
                continue
            agent = graph.entities.get(ha.object)
            if agent is None or not is_subclass_of(schema, agent.ont_class, "organization"):
                continue
            if not ha.active_at(issued_on):
                continue
            candidates.append((issued_on, ho.id, ha.id, agent.id))
    if not candidates:
        return None
    issued_on, ho_id, ha_id, agent_id = min(candidates)
    return issued_on, ho_id, ha_id, agent_id


def _declaration_trace(graph: GraphSnapshot, qa_group: str, at: date) -> list[str]:
    """Deontic-declaration machinery linked to the accreditor, when modeled."""
    schema = graph.schema
    ids: list[str] = []
    for ha in _active(graph, at, relation="has_agent", object=qa_group):
        decl = graph.entities.get(ha.subject)
        if decl is None or not is_subclass_of(schema, decl.ont_class, "deontic_declaration"):
            continue
        ids.append(ha.id)
        for prod in _active(graph, at, relation="produces", subject=decl.id):
            ids.append(prod.id)
            for presc in _active(graph, at, relation="prescribes", subject=prod.object):
                ids.append(presc.id)
    return ids


def evaluate_rules(
    graph: GraphSnapshot,
    cred: str,
    at: date,
    strict_revocation: bool = False,
) -> tuple[RuleOutcome, ...]:
    """Run R1..R5 in order, collecting all failing codes (not fail-fast)."""
    schema = graph.schema
    cred_entity = _require_credential(graph, cred)
    outcomes: list[RuleOutcome] = []

    # R1: an issuing process with an organizational agent exists
    issuance = _find_issuance(graph, cred)
    if issuance is None:
        outcomes.append(RuleOutcome("R1", FAIL, (ReasonCode.NO_ISSUANCE,)))
        issued_on = issuer = None
    else:
        issued_on, ho_id, ha_id, issuer = issuance
        outcomes.append(RuleOutcome("R1", PASS, (), (ho_id, ha_id)))

    # R2: exactly one organism holder
    about = _active(graph, at, relation="is_about", subject=cred)
    holder = None
    if len(about) == 1 and is_subclass_of(
        schema, graph.entities[about[0].object].ont_class, "organism"
    ):
        holder = about[0].object
        outcomes.append(RuleOutcome("R2", PASS, (), (about[0].id,)))
    else:
        outcomes.append(
            RuleOutcome("R2", FAIL, (ReasonCode.HOLDER_MISSING,), tuple(a.id for a in about))
        )

    # R3/R4 are undefined without an issuer
    if issuance is None:
        outcomes.append(RuleOutcome("R3", SKIPPED))
        outcomes.append(RuleOutcome("R4", SKIPPED))
    else:
        ever = sorted(
            (
                a
                for a in graph.assertions.values()
                if a.relation == "accredited_by" and a.subject == issuer
            ),
            key=lambda a: a.id,
        )
        active_at_issuance = [a for a in ever if a.active_at(issued_on)]
        if strict_revocation:
            active_at_issuance = [a for a in active_at_issuance if a.active_at(at)]
        consulted = [a.id for a in ever]
        for a in active_at_issuance:
            consulted.extend(_declaration_trace(graph, a.object, issued_on))
        if not ever:
            outcomes.append(
                RuleOutcome("R3", FAIL, (ReasonCode.UNAUTHORIZED_ISSUER,), tuple(consulted))
            )
        elif not active_at_issuance:
            outcomes.append(
                RuleOutcome("R3", FAIL, (ReasonCode.ACCREDITATION_INACTIVE,), tuple(consulted))
            )
        else:
            outcomes.append(RuleOutcome("R3", PASS, (), tuple(consulted)))

        # R4: issuer type fits the credential subtype's constraint
        issuer_entity = graph.entities[issuer]
        mismatch = False
        for con in schema.issuer_constraints:
            if not is_subclass_of(schema, cred_entity.ont_class, con.credential_class):
                continue
            ok = is_subclass_of(schema, issuer_entity.ont_class, con.required_issuer_class)
            if not ok and con.required_issuer_class == "government_agency":
                ok = bool(issuer_entity.attributes.get(GOVERNMENT_AUTHORIZATION_ATTR))
            if not ok:
                mismatch = True
        if mismatch:
            outcomes.append(RuleOutcome("R4", FAIL, (ReasonCode.ISSUER_TYPE_MISMATCH,)))
        else:
            outcomes.append(RuleOutcome("R4", PASS))

    # R5 needs both an issuance and a holder
    if issuance is None or holder is None:
        outcomes.append(RuleOutcome("R5", SKIPPED))
    else:
        evidence = _active(graph, at, relation="evidence_of", subject=cred)
        consulted = []
        unsupported = False
        for ev in evidence:
            consulted.append(ev.id)
            borne = _active(graph, at, relation="bearer_of", subject=holder, object=ev.object)
            if borne:
                consulted.extend(a.id for a in borne)
            else:
                unsupported = True
        if unsupported:
            outcomes.append(
                RuleOutcome("R5", FAIL, (ReasonCode.COMPETENCE_UNSUPPORTED,), tuple(consulted))
            )
        else:
            # vacuously satisfied with no evidence edges (honorary-degree case)
            outcomes.append(RuleOutcome("R5", PASS, (), tuple(consulted)))

    return tuple(outcomes)


def classify_credential(
    graph: GraphSnapshot,
    cred: str,
    at: date,
    strict_revocation: bool = False,
) -> ValidityVerdict:
    rules = evaluate_rules(graph, cred, at, strict_revocation)
    reasons: list[ReasonCode] = []
    trace: list[str] = []
    seen: set[str] = set()
    for r in rules:
        reasons.extend(r.codes)
        for aid in r.consulted:
            if aid not in seen:
                seen.add(aid)
                trace.append(aid)
    status = "Valid" if not reasons else "Invalid"
    return ValidityVerdict(cred, at, status, tuple(reasons), tuple(trace), rules)


def accreditation_chain(
    graph: GraphSnapshot, agency: str, at: date
) -> list[tuple[str, str]]:
    """Active accreditations of an agency: (qa_group, assertion id) pairs.

    One hop only: quality assurance groups are terminal authorities.
    """
    entity = graph.entity(agency)
    if not is_subclass_of(graph.schema, entity.ont_class, "organization"):
        raise WrongClassError(
            f"entity {agency!r} has class {entity.ont_class}, not an organization",
            entity=agency,
        )
    edges = _active(graph, at, relation="accredited_by", subject=agency)
    return [(a.object, a.id) for a in edges]


def explain(
    graph: GraphSnapshot,
    cred: str,
    at: date,
    strict_revocation: bool = False,
) -> str:
    """Deterministic multi-line report: one PASS/FAIL/SKIPPED line per rule."""
    verdict = classify_credential(graph, cred, at, strict_revocation)
    lines = [f"credential {cred} at {at.isoformat()}: {verdict.status}"]
    for r in verdict.rules:
        parts = [f"{r.rule} {RULE_NAMES[r.rule]}: {r.status}"]
        if r.codes:
            parts.append(",".join(c.value for c in r.codes))
        if r.status != SKIPPED:
            parts.append("[" + ",".join(r.consulted) + "]")
        lines.append(" ".join(parts))
    if verdict.reasons:
        lines.append("reasons: " + ",".join(c.value for c in verdict.reasons))
    return "\n".join(lines) + "\n"
