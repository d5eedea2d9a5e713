from __future__ import annotations

import math
import random
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from occo import (
    Assertion,
    CompetencyProfile,
    CredentialTemplate,
    Entity,
    JobDescription,
    add_assertion,
    add_entity,
    competency_gap,
    infer_profile,
    rank_candidates,
    rank_jobs,
    recommend_pathway,
    recommend_recruits,
    score_match,
    what_if,
)
from occo.errors import NoTemplatesError, UncoverableGapError, UnknownTemplateError, WrongClassError
from occo.matcher import graph_jobs, graph_templates, job_from_graph, load_template

from oracle import optimal_set_cover

AT = date(2023, 1, 1)


def test_infer_profile_from_valid_credential(basic_graph):
    profile = infer_profile(basic_graph, "ada", AT)
    assert "programming" in profile.held
    sources = profile.held["programming"]
    assert "degree" in sources and "bear1" in sources


def test_infer_profile_excludes_invalid_credentials(basic_graph):
    g = add_entity(basic_graph, Entity("ben", "trainee", "Ben"))
    g = add_entity(g, Entity("forged", "certificate", "Forged"))
    g = add_entity(g, Entity("k_neg", "negotiation", "Negotiation"))
    g = add_assertion(g, Assertion("fab", "forged", "is_about", "ben", date(2020, 1, 1)))
    g = add_assertion(g, Assertion("fev", "forged", "evidence_of", "k_neg", date(2020, 1, 1)))
    assert infer_profile(g, "ben", AT).held == {}
    loose = infer_profile(g, "ben", AT, valid_only=False)
    assert "negotiation" in loose.held


def test_infer_profile_wrong_class(basic_graph):
    with pytest.raises(WrongClassError):
        infer_profile(basic_graph, "uab", AT)


def test_score_match_formula(schema):
    profile = CompetencyProfile("h", {"k1": ("src",)})
    job = JobDescription("j", "e", {"k1": 1.0, "k2": 1.0})
    report = score_match(schema, profile, job)
    assert report.score == 0.5
    assert report.matched == ("k1",)
    assert report.missing == ("k2",)


def test_score_match_empty_required(schema):
    report = score_match(schema, CompetencyProfile("h", {}), JobDescription("j", "e", {}))
    assert report.score == 1.0


def test_score_match_subclass_satisfaction(schema):
    # a held skill leaf satisfies a required ancestor competence
    profile = CompetencyProfile("h", {"programming": ("src",)})
    job = JobDescription("j", "e", {"competence": 1.0})
    assert score_match(schema, profile, job).score == 1.0
    # but a held ancestor does not satisfy a required leaf
    profile2 = CompetencyProfile("h", {"competence": ("src",)})
    job2 = JobDescription("j", "e", {"programming": 1.0})
    assert score_match(schema, profile2, job2).score == 0.0


def test_rank_jobs_order_and_ties(basic_graph):
    profile = CompetencyProfile("ada", {"k1": ("s",)})
    jobs = [
        JobDescription("j_b", "e", {"k1": 1.0, "k2": 1.0}),
        JobDescription("j_a", "e", {"k1": 1.0, "k2": 1.0}),
        JobDescription("j_full", "e", {"k1": 1.0}),
    ]
    reports = rank_jobs(basic_graph, profile, jobs, 3)
    assert [r.job for r in reports] == ["j_full", "j_a", "j_b"]
    assert rank_jobs(basic_graph, profile, jobs, 0) == []
    assert [r.job for r in rank_jobs(basic_graph, profile, jobs, 1)] == ["j_full"]


def test_rank_candidates(basic_graph):
    g = add_entity(basic_graph, Entity("ben", "trainee", "Ben"))
    job = JobDescription("j", "e", {"programming": 1.0})
    reports = rank_candidates(g, job, ["ben", "ada"], AT, 2)
    assert [r.holder for r in reports] == ["ada", "ben"]
    assert reports[0].score == 1.0 and reports[1].score == 0.0
    assert rank_candidates(g, job, [], AT, 5) == []


def test_gap_consistency_with_score(schema):
    profile = CompetencyProfile("h", {"k1": ("s",)})
    job = JobDescription("j", "e", {"k1": 1.0, "k2": 2.0, "k3": 0.5})
    report = score_match(schema, profile, job)
    assert competency_gap(schema, profile, job) == frozenset(report.missing)


def test_greedy_pathway_spec_example():
    a = CredentialTemplate("A", frozenset({"k1", "k2"}), 1.0)
    b = CredentialTemplate("B", frozenset({"k3"}), 1.0)
    c = CredentialTemplate("C", frozenset({"k1", "k2", "k3"}), 3.0)
    pathway = recommend_pathway({"k1", "k2", "k3"}, [a, b, c])
    assert pathway.credentials == ("A", "B")
    assert pathway.total_cost == 2.0
    assert pathway.newly_covered == frozenset({"k1", "k2", "k3"})
    # exhaustive optimum confirms greedy is no worse here
    assert optimal_set_cover(frozenset({"k1", "k2", "k3"}), [a, b, c]) == 2.0


def test_pathway_single_and_uncoverable():
    t = CredentialTemplate("T", frozenset({"k1"}), 1.0)
    assert recommend_pathway({"k1"}, [t]).credentials == ("T",)
    with pytest.raises(UncoverableGapError) as exc:
        recommend_pathway({"k9"}, [t])
    assert exc.value.detail["competencies"] == ["k9"]


def test_greedy_quality_bound():
    rng = random.Random(7)
    comp_pool = [f"k{i}" for i in range(8)]
    for _ in range(80):
        gap = frozenset(rng.sample(comp_pool, rng.randint(1, 8)))
        templates = []
        for i in range(rng.randint(1, 10)):
            covers = frozenset(rng.sample(comp_pool, rng.randint(1, 5)))
            templates.append(CredentialTemplate(f"t{i}", covers, rng.choice([0.5, 1, 1, 2, 3])))
        union = frozenset().union(*(t.covers for t in templates))
        if not gap <= union:
            with pytest.raises(UncoverableGapError):
                recommend_pathway(gap, templates)
            continue
        pathway = recommend_pathway(gap, templates)
        optimum = optimal_set_cover(gap, templates)
        assert pathway.total_cost <= (1 + math.log(len(gap))) * optimum + 1e-9


@settings(max_examples=200, deadline=None)
@given(
    held=st.frozensets(st.sampled_from([f"k{i}" for i in range(8)]), max_size=8),
    extra=st.frozensets(st.sampled_from([f"k{i}" for i in range(8)]), max_size=8),
    required=st.dictionaries(
        st.sampled_from([f"k{i}" for i in range(8)]),
        st.floats(min_value=0.1, max_value=5.0, allow_nan=False),
        max_size=8,
    ),
)
def test_score_monotone_and_bounded(schema, held, extra, required):
    job = JobDescription("j", "e", required)
    before = score_match(schema, CompetencyProfile("h", {k: ("s",) for k in held}), job)
    after = score_match(
        schema, CompetencyProfile("h", {k: ("s",) for k in held | extra}), job
    )
    assert 0.0 <= before.score <= 1.0
    assert after.score >= before.score
    assert (before.score == 1.0) == (not before.missing)
    assert set(before.matched) | set(before.missing) == set(required)
    assert set(before.matched) & set(before.missing) == set()


def _template_world(basic_graph):
    g = add_entity(
        basic_graph,
        Entity("tpl1", "certificate", "Welding Cert",
               {"template": True, "cost": 2.0, "owned_by": "uab"}),
    )
    g = add_entity(g, Entity("k_weld", "repairing", "Welding"))
    g = add_assertion(g, Assertion("tev1", "tpl1", "evidence_of", "k_weld", date(2020, 1, 1)))
    g = add_entity(g, Entity("acme", "employer", "Acme"))
    g = add_entity(g, Entity("job1", "job_description", "Welder"))
    g = add_assertion(g, Assertion("jreq1", "job1", "requires_competence", "k_weld",
                                   date(2020, 1, 1)))
    g = add_assertion(g, Assertion("jpost1", "job1", "posted_by", "acme", date(2020, 1, 1)))
    g = add_entity(g, Entity("job2", "job_description", "Programmer"))
    g = add_assertion(g, Assertion("jreq2", "job2", "requires_competence", "k_prog",
                                   date(2020, 1, 1)))
    g = add_assertion(g, Assertion("jpost2", "job2", "posted_by", "acme", date(2020, 1, 1)))
    return g


def test_templates_and_jobs_from_graph(basic_graph):
    g = _template_world(basic_graph)
    templates = graph_templates(g)
    assert [t.id for t in templates] == ["tpl1"]
    assert templates[0].covers == frozenset({"repairing"})
    assert templates[0].cost == 2.0
    job = job_from_graph(g, "job1")
    assert job.required == {"repairing": 1.0}
    assert job.employer == "acme"
    assert [j.id for j in graph_jobs(g)] == ["job1", "job2"]


def test_what_if(basic_graph):
    g = _template_world(basic_graph)
    profile = infer_profile(g, "ada", AT)
    jobs = graph_jobs(g)
    rows = what_if(g, profile, "tpl1", jobs)
    assert rows == [("job1", 0.0, 1.0)]
    with pytest.raises(UnknownTemplateError):
        what_if(g, profile, "ghost", jobs)


def test_what_if_useless_template(basic_graph):
    g = _template_world(basic_graph)
    g = add_entity(g, Entity("tpl_dull", "certificate", "Dull",
                             {"template": True, "owned_by": "uab"}))
    profile = infer_profile(g, "ada", AT)
    assert what_if(g, profile, "tpl_dull", graph_jobs(g)) == []


def test_recommend_recruits(basic_graph):
    g = _template_world(basic_graph)
    g = add_entity(g, Entity("ben", "trainee", "Ben"))
    rows = recommend_recruits(g, "uab", ["ada", "ben"], graph_jobs(g), AT, 5)
    # both holders lack welding; each benefits on one job
    assert rows == [("ada", "tpl1", 1), ("ben", "tpl1", 1)]
    with pytest.raises(NoTemplatesError):
        recommend_recruits(g, "acme", ["ada"], graph_jobs(g), AT, 5)


def test_validity_coupling_invalid_contributes_nothing(basic_graph):
    g = _template_world(basic_graph)
    # forge a welding credential for ada: no issuing process
    g = add_entity(g, Entity("fake", "certificate", "Fake"))
    g = add_assertion(g, Assertion("fab", "fake", "is_about", "ada", date(2021, 1, 1)))
    g = add_assertion(g, Assertion("fev", "fake", "evidence_of", "k_weld", date(2021, 1, 1)))
    profile = infer_profile(g, "ada", AT)
    assert "repairing" not in profile.held
    job = job_from_graph(g, "job1")
    assert score_match(g.schema, profile, job).score == 0.0
