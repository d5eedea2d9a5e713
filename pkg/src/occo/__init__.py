"""Occupational credential knowledge graph.

A typed, bitemporal instance store over a built-in credential ontology, a
rule-based credential validity reasoner with explanation traces, a CTDL
subset importer, and a competency-based talent matcher, exposed as a
library, CLI (`occo`), and HTTP service.
"""

from .ctdl import CtdlRecord, ImportReport, map_to_graph, parse_ctdl
from .graph import (
    Assertion,
    Entity,
    GraphSnapshot,
    active_assertions,
    add_assertion,
    add_entity,
    empty_graph,
    export_graph,
    import_graph,
    revoke,
)
from .matcher import (
    CompetencyProfile,
    CredentialTemplate,
    JobDescription,
    MatchReport,
    Pathway,
    competency_gap,
    infer_profile,
    rank_candidates,
    rank_jobs,
    recommend_pathway,
    recommend_recruits,
    score_match,
    what_if,
)
from .schema import (
    IssuerConstraint,
    OntClass,
    RelationType,
    SchemaRegistry,
    is_subclass_of,
    load_builtin_schema,
    register_extension_class,
    relation_signature,
)
from .validity import (
    ReasonCode,
    ValidityVerdict,
    accreditation_chain,
    classify_credential,
    explain,
)

__version__ = "0.1.0"
