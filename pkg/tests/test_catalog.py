import pytest

from evigen.catalog import (
    AtTarget,
    Kind,
    Locality,
    TimeLabel,
    Tool,
    catalog_table,
    classify,
    targets_for,
)
from evigen.errors import Unclassifiable
from evigen.requirements import (
    BaseTemplate,
    Clause,
    Mode,
    StructuredRequirement,
    TraceLinks,
    load_requirements,
)


def _every(condition: str, req_id: str = "E1") -> StructuredRequirement:
    return StructuredRequirement(
        id=req_id,
        base_template=BaseTemplate.EVERY,
        trace=TraceLinks(req_id, f"V{req_id}"),
        required_condition=Clause("", condition),
        always_or_never=Mode.ALWAYS,
    )


def _when(required: Clause, guards) -> StructuredRequirement:
    return StructuredRequirement(
        id="W1",
        base_template=BaseTemplate.WHEN,
        trace=TraceLinks("W1", "VW1"),
        guard_conditions=tuple(guards),
        required_condition=required,
    )


def test_deadlock_free_condition_classifies_fdr_both(fixtures_dir):
    r3 = load_requirements(fixtures_dir / "chemical.xml")[2]
    rk = classify(r3)
    assert rk.kind is Kind.DEADLOCK_FDR
    assert rk.time_label is TimeLabel.BOTH


def test_reward_prefix_classifies_reward(fixtures_dir):
    sr1_1_2 = load_requirements(fixtures_dir / "mail.xml")[1]
    assert classify(sr1_1_2).kind is Kind.REWARD


def test_two_plain_guards_classify_local_untimed():
    r = _when(
        Clause("", "m::done.out"),
        guards=[Clause("", "m::currentState.Active"), Clause("", "m::go.in")],
    )
    rk = classify(r)
    assert (rk.kind, rk.locality) == (Kind.UNTIMED, Locality.LOCAL)


def test_one_guard_classifies_global_untimed():
    r = _when(Clause("", "m::done.out"), guards=[Clause("", "m::go.in")])
    assert classify(r).locality is Locality.GLOBAL


def test_time_label_from_function_suffix():
    assert classify(_every("reachable_untimed(m::S, St)")).time_label is TimeLabel.UNTIMED
    assert classify(_every("divergence_free_timed(m::S)")).time_label is TimeLabel.TIMED
    assert classify(_every("terminate(m::S)")).time_label is TimeLabel.BOTH


def test_deadlock_isa_selected_by_function_token():
    rk = classify(_every("deadlock_free_isa(LREMachine)"))
    assert rk.kind is Kind.DEADLOCK_ISA
    assert targets_for(rk) == [AtTarget("AT-DDLK-2", Tool.ISABELLE)]


def test_unknown_function_is_unclassifiable():
    with pytest.raises(Unclassifiable):
        classify(_every("sparkle_free(Machine)"))


def test_zero_guards_unclassifiable():
    with pytest.raises(Unclassifiable):
        classify(_when(Clause("", "m::done.out"), guards=[]))


def test_prob_maps_to_prism():
    rk = classify(_when(Clause("prob_target_", "< 0.5"), guards=[]))
    assert targets_for(rk) == [AtTarget("AT-PROB", Tool.PRISM)]


def test_every_kind_has_exactly_one_target():
    kinds = [
        classify(_when(Clause("", "e"), guards=[Clause("", "g")])),
        classify(_when(Clause("", "e"), guards=[Clause("", "g1"), Clause("", "g2")])),
        classify(
            StructuredRequirement(
                id="T", base_template=BaseTemplate.TRIGGER_ON_EVENT,
                trace=TraceLinks("T", "VT"), required_condition=Clause("", "e"),
            )
        ),
        classify(_every("reachable(m::S, St)")),
        classify(_every("deadlock_free(m::S)")),
        classify(_every("deadlock_free_isa(Z)")),
        classify(_every("divergence_free(m::S)")),
        classify(_every("terminate(m::S)")),
        classify(_when(Clause("prob_target_", "< 0.5"), guards=[])),
        classify(_when(Clause("reward_target_", "> 8"), guards=[])),
        classify(_when(Clause("term_", "exists"), guards=[])),
    ]
    assert len({(k.kind, k.locality if k.kind is Kind.UNTIMED else None) for k in kinds}) == 11
    for rk in kinds:
        assert len(targets_for(rk)) == 1


# The full requirement-template -> assertion-template -> tool relation, one
# synthetic requirement per template variant.
EXPECTED_COVERAGE = {
    "CV-UTG": ("AT-UTG", Tool.FDR),
    "CV-UTL": ("AT-UTL", Tool.FDR),
    "CV-DLINE": ("AT-DLINE", Tool.FDR),
    "CV-REACH": ("AT-REACH", Tool.FDR),
    "CV-DDLK1": ("AT-DDLK-1", Tool.FDR),
    "CV-DDLK2": ("AT-DDLK-2", Tool.ISABELLE),
    "CV-DIV": ("AT-DIV", Tool.FDR),
    "CV-TERM": ("AT-TERM", Tool.FDR),
    "CV-PROB": ("AT-PROB", Tool.PRISM),
    "CV-RWD": ("AT-RWD", Tool.PRISM),
    "CV-TEMP": ("AT-TEMP", Tool.PRISM),
}


def test_coverage_matrix_matches_catalog(fixtures_dir):
    reqs = load_requirements(fixtures_dir / "coverage.xml")
    assert len(reqs) == len(EXPECTED_COVERAGE)
    seen = {}
    for r in reqs:
        (target,) = targets_for(classify(r))
        seen[r.id] = (target.template_id, target.tool)
    assert seen == EXPECTED_COVERAGE
    # the synthetic corpus exercises all ten requirement kinds
    assert {classify(r).kind for r in reqs} == set(Kind)


def test_classification_is_stable(fixtures_dir):
    reqs = load_requirements(fixtures_dir / "coverage.xml")
    assert [classify(r) for r in reqs] == [classify(r) for r in reqs]


def test_catalog_dump_lists_all_rows():
    dump = catalog_table()
    for template in ("AT-UTG", "AT-UTL", "AT-DLINE", "AT-REACH", "AT-DDLK-1",
                     "AT-DDLK-2", "AT-DIV", "AT-TERM", "AT-PROB", "AT-RWD", "AT-TEMP"):
        assert template in dump
    assert "Isabelle" in dump and "PRISM" in dump and "FDR" in dump
