"""Built-in ontology schema: class hierarchy, relation vocabulary, issuer rules.

The registry is the single source of truth every other module consults. It is
immutable after construction; extension registers return a new registry value.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import (
    CycleIntroducedError,
    DanglingParentError,
    DuplicateIdError,
    SchemaConsistencyError,
    UnknownTermError,
)

TERM_RE = re.compile(r"^[a-z][a-z0-9_]*$")


@dataclass(frozen=True)
class OntClass:
    id: str
    label: str
    parents: frozenset[str] = frozenset()
    definition: str = ""
    builtin: bool = False

    def __post_init__(self):
        if not TERM_RE.match(self.id):
            raise SchemaConsistencyError(f"bad term id {self.id!r}")
        object.__setattr__(self, "parents", frozenset(self.parents))


@dataclass(frozen=True)
class RelationType:
    id: str
    label: str
    domain: str
    range: str
    inverse: str | None = None

    def __post_init__(self):
        if not TERM_RE.match(self.id):
            raise SchemaConsistencyError(f"bad term id {self.id!r}")


@dataclass(frozen=True)
class IssuerConstraint:
    credential_class: str
    required_issuer_class: str


class SchemaRegistry:
    """Immutable lookup of classes, relations and issuer constraints.

    Construction validates full reference closure and acyclicity, so a
    registry value can always be trusted by downstream modules.
    """

    def __init__(
        self,
        classes: Mapping[str, OntClass],
        relations: Mapping[str, RelationType],
        issuer_constraints: Iterable[IssuerConstraint] = (),
    ):
        self.classes: Mapping[str, OntClass] = MappingProxyType(dict(classes))
        self.relations: Mapping[str, RelationType] = MappingProxyType(dict(relations))
        self.issuer_constraints: tuple[IssuerConstraint, ...] = tuple(issuer_constraints)
        self._validate()
        self._ancestors: dict[str, frozenset[str]] = {}
        for cid in self.classes:
            self._compute_ancestors(cid)

    def _validate(self) -> None:
        for cid, cls in self.classes.items():
            if cid != cls.id:
                raise SchemaConsistencyError(f"class keyed as {cid} but id is {cls.id}")
            for p in cls.parents:
                if p not in self.classes:
                    raise DanglingParentError(f"class {cid} has unknown parent {p}", term=p)
        self._check_acyclic()
        for rid, rel in self.relations.items():
            if rid != rel.id:
                raise SchemaConsistencyError(f"relation keyed as {rid} but id is {rel.id}")
            for side, term in (("domain", rel.domain), ("range", rel.range)):
                if term not in self.classes:
                    raise SchemaConsistencyError(
                        f"relation {rid} {side} {term} is not a registered class"
                    )
            if rel.inverse is not None:
                inv = self.relations.get(rel.inverse)
                if inv is None:
                    raise SchemaConsistencyError(f"relation {rid} inverse {rel.inverse} missing")
                if (inv.domain, inv.range) != (rel.range, rel.domain):
                    raise SchemaConsistencyError(
                        f"inverse signature mismatch between {rid} and {rel.inverse}"
                    )
        for con in self.issuer_constraints:
            for term in (con.credential_class, con.required_issuer_class):
                if term not in self.classes:
                    raise SchemaConsistencyError(f"issuer constraint names unknown class {term}")

    def _check_acyclic(self) -> None:
        # Kahn-style topological check over parent edges.
        indeg = {cid: 0 for cid in self.classes}
        for cls in self.classes.values():
            for p in cls.parents:
                indeg[p] += 1
        queue = [cid for cid, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            cid = queue.pop()
            seen += 1
            for p in self.classes[cid].parents:
                indeg[p] -= 1
                if indeg[p] == 0:
                    queue.append(p)
        if seen != len(self.classes):
            cyclic = sorted(cid for cid, d in indeg.items() if d > 0)
            raise CycleIntroducedError(f"subclass graph has a cycle among {cyclic}", terms=cyclic)

    def _compute_ancestors(self, cid: str) -> frozenset[str]:
        cached = self._ancestors.get(cid)
        if cached is not None:
            return cached
        out: set[str] = {cid}
        for p in self.classes[cid].parents:
            out |= self._compute_ancestors(p)
        result = frozenset(out)
        self._ancestors[cid] = result
        return result

    # -- queries --

    def has_class(self, term: str) -> bool:
        return term in self.classes

    def require_class(self, term: str) -> OntClass:
        cls = self.classes.get(term)
        if cls is None:
            raise UnknownTermError(f"unknown class {term!r}", term=term)
        return cls

    def require_relation(self, term: str) -> RelationType:
        rel = self.relations.get(term)
        if rel is None:
            raise UnknownTermError(f"unknown relation {term!r}", term=term)
        return rel

    def ancestors(self, term: str) -> frozenset[str]:
        """Reflexive-transitive closure of the parent edges."""
        if term not in self.classes:
            raise UnknownTermError(f"unknown class {term!r}", term=term)
        return self._ancestors[term]

    def descendants(self, term: str) -> frozenset[str]:
        if term not in self.classes:
            raise UnknownTermError(f"unknown class {term!r}", term=term)
        return frozenset(c for c in self.classes if term in self._ancestors[c])

    def hash(self) -> str:
        """Stable digest of the registry content, used in graph file headers."""
        payload = {
            "classes": [
                [c.id, sorted(c.parents), c.label, c.definition, c.builtin]
                for c in sorted(self.classes.values(), key=lambda c: c.id)
            ],
            "relations": [
                [r.id, r.domain, r.range, r.inverse or ""]
                for r in sorted(self.relations.values(), key=lambda r: r.id)
            ],
            "issuer_constraints": sorted(
                [c.credential_class, c.required_issuer_class] for c in self.issuer_constraints
            ),
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


def is_subclass_of(registry: SchemaRegistry, a: str, b: str) -> bool:
    """True iff ``a`` equals ``b`` or reaches it through parent edges."""
    if not registry.has_class(b):
        raise UnknownTermError(f"unknown class {b!r}", term=b)
    return b in registry.ancestors(a)


def relation_signature(registry: SchemaRegistry, rel: str) -> tuple[str, str]:
    r = registry.require_relation(rel)
    return (r.domain, r.range)


def register_extension_class(registry: SchemaRegistry, cls: OntClass) -> SchemaRegistry:
    """Return a new registry including ``cls``; the input is untouched."""
    if cls.builtin:
        raise SchemaConsistencyError("extension classes must not claim builtin status")
    if cls.id in registry.classes or cls.id in registry.relations:
        raise DuplicateIdError(f"term {cls.id!r} already registered", term=cls.id)
    for p in cls.parents:
        if p not in registry.classes:
            raise DanglingParentError(f"unknown parent {p!r}", term=p)
    classes = dict(registry.classes)
    classes[cls.id] = cls
    # a fresh node with resolving parents cannot create a cycle, but the
    # constructor re-checks anyway as a guard
    return SchemaRegistry(classes, registry.relations, registry.issuer_constraints)


def leaf_subclasses(registry: SchemaRegistry, term: str) -> frozenset[str]:
    """Strict descendants of ``term`` that have no children of their own."""
    desc = registry.descendants(term) - {term}
    has_child: set[str] = set()
    for cid in registry.classes:
        for p in registry.classes[cid].parents:
            has_child.add(p)
    return frozenset(d for d in desc if d not in has_child)


# ---------------------------------------------------------------------------
# Built-in schema data
# ---------------------------------------------------------------------------

# O*NET-style skill taxonomy; 35 entries, count is contractual.
SKILL_TERMS: tuple[tuple[str, str], ...] = (
    ("reading_comprehension", "Reading Comprehension"),
    ("active_listening", "Active Listening"),
    ("writing", "Writing"),
    ("speaking", "Speaking"),
    ("mathematics", "Mathematics"),
    ("science", "Science"),
    ("critical_thinking", "Critical Thinking"),
    ("active_learning", "Active Learning"),
    ("learning_strategies", "Learning Strategies"),
    ("monitoring", "Monitoring"),
    ("social_perceptiveness", "Social Perceptiveness"),
    ("coordination", "Coordination"),
    ("persuasion", "Persuasion"),
    ("negotiation", "Negotiation"),
    ("instructing", "Instructing"),
    ("service_orientation", "Service Orientation"),
    ("complex_problem_solving", "Complex Problem Solving"),
    ("operations_analysis", "Operations Analysis"),
    ("technology_design", "Technology Design"),
    ("equipment_selection", "Equipment Selection"),
    ("installation", "Installation"),
    ("programming", "Programming"),
    ("operations_monitoring", "Operations Monitoring"),
    ("operation_and_control", "Operation and Control"),
    ("equipment_maintenance", "Equipment Maintenance"),
    ("troubleshooting", "Troubleshooting"),
    ("repairing", "Repairing"),
    ("quality_control_analysis", "Quality Control Analysis"),
    ("judgment_and_decision_making", "Judgment and Decision Making"),
    ("systems_analysis", "Systems Analysis"),
    ("systems_evaluation", "Systems Evaluation"),
    ("time_management", "Time Management"),
    ("management_of_financial_resources", "Management of Financial Resources"),
    ("management_of_material_resources", "Management of Material Resources"),
    ("management_of_personnel_resources", "Management of Personnel Resources"),
)

# O*NET-style ability taxonomy; 52 entries, count is contractual.
ABILITY_TERMS: tuple[tuple[str, str], ...] = (
    ("oral_comprehension", "Oral Comprehension"),
    ("written_comprehension", "Written Comprehension"),
    ("oral_expression", "Oral Expression"),
    ("written_expression", "Written Expression"),
    ("fluency_of_ideas", "Fluency of Ideas"),
    ("originality", "Originality"),
    ("problem_sensitivity", "Problem Sensitivity"),
    ("deductive_reasoning", "Deductive Reasoning"),
    ("inductive_reasoning", "Inductive Reasoning"),
    ("information_ordering", "Information Ordering"),
    ("category_flexibility", "Category Flexibility"),
    ("mathematical_reasoning", "Mathematical Reasoning"),
    ("number_facility", "Number Facility"),
    ("memorization", "Memorization"),
    ("speed_of_closure", "Speed of Closure"),
    ("flexibility_of_closure", "Flexibility of Closure"),
    ("perceptual_speed", "Perceptual Speed"),
    ("spatial_orientation", "Spatial Orientation"),
    ("visualization", "Visualization"),
    ("selective_attention", "Selective Attention"),
    ("time_sharing", "Time Sharing"),
    ("arm_hand_steadiness", "Arm-Hand Steadiness"),
    ("manual_dexterity", "Manual Dexterity"),
    ("finger_dexterity", "Finger Dexterity"),
    ("control_precision", "Control Precision"),
    ("multilimb_coordination", "Multilimb Coordination"),
    ("response_orientation", "Response Orientation"),
    ("rate_control", "Rate Control"),
    ("reaction_time", "Reaction Time"),
    ("wrist_finger_speed", "Wrist-Finger Speed"),
    ("speed_of_limb_movement", "Speed of Limb Movement"),
    ("static_strength", "Static Strength"),
    ("explosive_strength", "Explosive Strength"),
    ("dynamic_strength", "Dynamic Strength"),
    ("trunk_strength", "Trunk Strength"),
    ("stamina", "Stamina"),
    ("extent_flexibility", "Extent Flexibility"),
    ("dynamic_flexibility", "Dynamic Flexibility"),
    ("gross_body_coordination", "Gross Body Coordination"),
    ("gross_body_equilibrium", "Gross Body Equilibrium"),
    ("near_vision", "Near Vision"),
    ("far_vision", "Far Vision"),
    ("visual_color_discrimination", "Visual Color Discrimination"),
    ("night_vision", "Night Vision"),
    ("peripheral_vision", "Peripheral Vision"),
    ("depth_perception", "Depth Perception"),
    ("glare_sensitivity", "Glare Sensitivity"),
    ("hearing_sensitivity", "Hearing Sensitivity"),
    ("auditory_attention", "Auditory Attention"),
    ("sound_localization", "Sound Localization"),
    ("speech_recognition", "Speech Recognition"),
    ("speech_clarity", "Speech Clarity"),
)

# The thirteen core credential vocabulary terms; each must carry a definition.
CORE_CREDENTIAL_TERMS = frozenset(
    {
        "credential",
        "occupational_credential",
        "occupational_credential_holder",
        "competence",
        "credential_grantor_role",
        "credential_granting_agency",
        "employer_role",
        "certificate",
        "certification",
        "academic_degree",
        "license",
        "credential_issuing_process",
        "quality_assurance_group",
    }
)

# (id, label, parents, definition)
_BUILTIN_CLASSES: tuple[tuple[str, str, tuple[str, ...], str], ...] = (
    # upper spine
    ("entity", "Entity", (), "Anything that exists."),
    ("continuant", "Continuant", ("entity",), "An entity that persists through time."),
    ("occurrent", "Occurrent", ("entity",), "An entity that happens or unfolds in time."),
    ("material_entity", "Material Entity", ("continuant",),
     "A continuant with some material part."),
    ("organism", "Organism", ("material_entity",), "A living material entity."),
    ("human", "Human", ("organism",), "A human being."),
    ("organization", "Organization", ("material_entity",),
     "A group of agents organized under shared goals and norms."),
    ("realizable_entity", "Realizable Entity", ("continuant",),
     "A continuant whose instances can be realized in processes."),
    ("disposition", "Disposition", ("realizable_entity",),
     "A realizable entity grounded in the physical makeup of its bearer."),
    ("role", "Role", ("realizable_entity",),
     "A realizable entity that exists because of social or institutional context."),
    ("information_content_entity", "Information Content Entity", ("continuant",),
     "A continuant that is about something."),
    ("document", "Document", ("information_content_entity",),
     "An information content entity intended to be a durable record."),
    ("directive_information_content_entity", "Directive Information Content Entity",
     ("information_content_entity",),
     "An information content entity that directs how acts are to be performed."),
    ("process", "Process", ("occurrent",), "An occurrent with temporal parts."),
    ("social_act", "Social Act", ("process",),
     "A process performed by a conscious agent, directed at another agent, and "
     "requiring uptake to succeed."),
    # credential vocabulary
    ("credential", "Credential", ("document",),
     "A document, issued by a third party recognized as having the authority to "
     "issue it, designed to be about an entity's competence, qualifications, or "
     "authority."),
    ("occupational_credential", "Occupational Credential", ("credential",),
     "A credential designed to be about an organism's competence or "
     "qualifications with respect to an occupation."),
    ("occupational_credential_holder", "Occupational Credential Holder", ("organism",),
     "An organism that an occupational credential is about."),
    ("competence", "Competence", ("disposition",),
     "A disposition borne by an organism, typically acquired through training, "
     "realized in the successful performance of the tasks the training targets."),
    ("credential_grantor_role", "Credential Grantor Role", ("role",),
     "A role borne by an organization that a quality assurance group has "
     "accredited, through a deontic declaration with an action-regulation "
     "output, to bestow credentials under the accreditor's quality standards."),
    ("credential_granting_agency", "Credential Granting Agency", ("organization",),
     "An organization bearing a credential grantor role."),
    ("employer_role", "Employer Role", ("role",),
     "A role realized when its bearer provides a wage or salary in exchange for "
     "labour or services under some agreement."),
    ("certificate", "Certificate", ("credential",),
     "A credential awarded by a credential granting agency signifying "
     "participation in or completion of a training program that requires "
     "demonstrating specified knowledge or skill."),
    ("certification", "Certification", ("credential",),
     "A credential awarded by a professional organization signifying the "
     "holder's competence measured against a professional benchmark."),
    ("academic_degree", "Academic Degree", ("credential",),
     "A credential awarded by an educational institution signifying "
     "satisfaction of requirements set and monitored by that institution."),
    ("license", "License", ("credential",),
     "A credential awarded by a government or government-authorized agency "
     "signifying legal permission to engage in specified actions without the "
     "sanctions otherwise attached to them."),
    ("credential_issuing_process", "Credential Issuing Process", ("social_act",),
     "A social act in which a credential granting agency asserts that an "
     "organism has satisfied the requirements for a credential, with a "
     "credential about that organism as output."),
    ("quality_assurance_group", "Quality Assurance Group", ("organization",),
     "An organization that sets standards for other organizations' activity, "
     "evaluates whether those standards are met, and bestows or revokes the "
     "permissions of organizations based on its evaluations."),
    # supporting classes
    ("skill", "Skill", ("competence",),
     "A competence exercised in deliberate, practiced task performance."),
    ("ability", "Ability", ("competence",),
     "A competence reflecting an enduring capacity to perform."),
    # Issuer types double as credential granting agencies so that
    # accreditation edges type-check without per-entity multi-typing.
    ("educational_institution", "Educational Institution", ("credential_granting_agency",),
     "An organization whose primary activity is providing education."),
    ("professional_organization", "Professional Organization", ("credential_granting_agency",),
     "An organization of practitioners that maintains professional benchmarks."),
    ("government_agency", "Government Agency", ("credential_granting_agency",),
     "An organization exercising governmental authority."),
    ("employer", "Employer", ("organization",),
     "An organization bearing an employer role."),
    ("occupation_holder", "Occupation Holder", ("human",),
     "A human bearing an occupation role or occupation disposition."),
    ("occupation_role", "Occupation Role", ("role",),
     "A role realized in the performance of an occupation."),
    ("deontic_declaration", "Deontic Declaration", ("social_act",),
     "A social act that creates or revokes a deontic role."),
    ("action_regulation", "Action Regulation", ("directive_information_content_entity",),
     "A directive information content entity prescribing an act as required, "
     "prohibited, or permitted."),
    ("trainee", "Trainee", ("human",),
     "A human participating in training, whether employed or job-seeking."),
    ("credential_training", "Credential Training", ("process",),
     "A training process in which credential trainees participate."),
    ("trainee_activity", "Trainee Activity", ("process",),
     "A behavior a trainee participates in."),
    ("occupation_activity", "Occupation Activity", ("process",),
     "A process realizing an occupation role or disposition."),
    ("job_description", "Job Description", ("document",),
     "A document specifying the competencies an employer requires for a "
     "position."),
)

# (id, label, domain, range, inverse)
_BUILTIN_RELATIONS: tuple[tuple[str, str, str, str, str | None], ...] = (
    ("is_about", "is about", "information_content_entity", "entity", None),
    ("bearer_of", "bearer of", "material_entity", "realizable_entity", None),
    ("accredited_by", "accredited by", "credential_granting_agency",
     "quality_assurance_group", None),
    ("has_output", "has output", "process", "entity", None),
    ("has_agent", "has agent", "process", "material_entity", None),
    ("evidence_of", "evidence of", "credential", "competence", None),
    ("has_participant", "has participant", "process", "continuant", "participates_in"),
    ("participates_in", "participates in", "continuant", "process", "has_participant"),
    ("realizes", "realizes", "process", "realizable_entity", None),
    ("prescribes", "prescribes", "directive_information_content_entity",
     "realizable_entity", None),
    ("produces", "produces", "social_act", "information_content_entity", None),
    ("qualification_for", "qualification for", "competence", "process", None),
    ("works_for", "works for", "human", "organization", None),
    ("requires_competence", "requires competence", "job_description", "competence", None),
    ("posted_by", "posted by", "job_description", "organization", None),
)

_BUILTIN_ISSUER_CONSTRAINTS: tuple[tuple[str, str], ...] = (
    ("certificate", "credential_granting_agency"),
    ("certification", "professional_organization"),
    ("academic_degree", "educational_institution"),
    ("license", "government_agency"),
)

# Entity attribute that lets a non-government organization satisfy the
# license issuer constraint ("government-authorized agency").
GOVERNMENT_AUTHORIZATION_ATTR = "government_authorization"

_BUILTIN_CACHE: SchemaRegistry | None = None


def load_builtin_schema() -> SchemaRegistry:
    """Build (and cache) the fixed built-in registry."""
    global _BUILTIN_CACHE
    if _BUILTIN_CACHE is not None:
        return _BUILTIN_CACHE

    classes: dict[str, OntClass] = {}
    for cid, label, parents, definition in _BUILTIN_CLASSES:
        classes[cid] = OntClass(cid, label, frozenset(parents), definition, builtin=True)
    for cid, label in SKILL_TERMS:
        classes[cid] = OntClass(cid, label, frozenset({"skill"}),
                                f"The skill of {label.lower()}.", builtin=True)
    for cid, label in ABILITY_TERMS:
        classes[cid] = OntClass(cid, label, frozenset({"ability"}),
                                f"The ability of {label.lower()}.", builtin=True)

    relations = {
        rid: RelationType(rid, label, dom, rng, inv)
        for rid, label, dom, rng, inv in _BUILTIN_RELATIONS
    }
    constraints = [IssuerConstraint(c, i) for c, i in _BUILTIN_ISSUER_CONSTRAINTS]

    registry = SchemaRegistry(classes, relations, constraints)

    # internal consistency: a malformed built-in is a defect
    missing = [t for t in CORE_CREDENTIAL_TERMS
               if t not in registry.classes or not registry.classes[t].definition]
    if missing:
        raise SchemaConsistencyError(f"core terms missing or undefined: {sorted(missing)}")
    if len(SKILL_TERMS) != 35 or len(ABILITY_TERMS) != 52:
        raise SchemaConsistencyError("seed competence taxonomy counts are off")
    for con in registry.issuer_constraints:
        if not is_subclass_of(registry, con.credential_class, "credential"):
            raise SchemaConsistencyError(
                f"issuer constraint on non-credential class {con.credential_class}"
            )

    _BUILTIN_CACHE = registry
    return registry
