import random

import pytest

from evigen.catalog import Tool
from evigen.errors import (
    HtmlStructure,
    LogUnrecognized,
    ResultUnparsable,
    TableCount,
    TitleUnrecognized,
)
from evigen.generate import generate_all
from evigen.reports import (
    ReportRow,
    ReportTable,
    VerificationReport,
    aggregate,
    extract_claim_id,
    format_report_title,
    parse_fdr_report,
    parse_isabelle_log,
    parse_prism_report,
    parse_report,
    parse_report_title,
)
from evigen.requirements import load_requirements


def _html(tables):
    """tables: list of (title, [(name, result_word, detail)])."""
    parts = ["<html><body>"]
    for title, rows in tables:
        parts.append(f"<h2>{title}</h2>")
        parts.append("<table class='results'>")
        parts.append("<tr><th>Assertion</th><th>Result</th><th>Detail</th></tr>")
        for name, word, detail in rows:
            parts.append(f"<tr><td> {name} </td><td>{word}</td><td>{detail}</td></tr>")
        parts.append("</table>")
    parts.append("</body></html>")
    return "\n".join(parts).encode()


FDR_UNTIMED = format_report_title("R1", Tool.FDR, "untimed")
FDR_TIMED = format_report_title("R1", Tool.FDR, "timed")
PRISM_TITLE = format_report_title("SR1_1_1", Tool.PRISM, "probabilistic")


def test_parse_title_example():
    title = "Results of probabilistic analysis of assertions in SR1_1_1.assertions using PRISM"
    assert parse_report_title(title) == ("SR1_1_1", Tool.PRISM)


def test_parse_title_fdr_symmetry():
    assert parse_report_title(
        "Results of untimed analysis of assertions in R7.assertions using FDR"
    ) == ("R7", Tool.FDR)


def test_parse_title_rejects_garbage():
    with pytest.raises(TitleUnrecognized):
        parse_report_title("hello")


def test_title_format_parse_round_trip():
    for req, tool, label in [
        ("SR1_1_1", Tool.PRISM, "probabilistic"),
        ("R2", Tool.FDR, "timed"),
        ("DTI-3", Tool.FDR, "untimed"),
    ]:
        assert parse_report_title(format_report_title(req, tool, label)) == (req, tool)


def test_fdr_two_tables_all_true():
    html = _html(
        [
            (FDR_UNTIMED, [("A_1", "true", "passed")]),
            (FDR_TIMED, [("A_1", "True", "passed")]),
        ]
    )
    report = parse_fdr_report(html)
    assert report.requirement_id == "R1"
    assert report.tool is Tool.FDR
    assert [t.label for t in report.tables] == ["untimed", "timed"]
    assert all(row.result for t in report.tables for row in t.rows)


def test_fdr_single_table():
    report = parse_fdr_report(_html([(FDR_TIMED, [("A_1", "passed", "")])]))
    assert len(report.tables) == 1
    assert report.tables[0].label == "timed"


def test_fdr_mixed_rows_preserved():
    html = _html(
        [(FDR_UNTIMED, [("A_1", "true", ""), ("A_2", "false", "cex"), ("A_3", "true", "")])]
    )
    report = parse_fdr_report(html)
    assert [r.result for r in report.tables[0].rows] == [True, False, True]
    assert report.tables[0].rows[1].detail == "cex"


def test_fdr_row_count_equals_input_rows():
    rows = [(f"A_{i}", "true", "") for i in range(7)]
    report = parse_fdr_report(_html([(FDR_UNTIMED, rows)]))
    assert len(report.tables[0].rows) == 7


def test_fdr_requires_a_table():
    with pytest.raises(HtmlStructure):
        parse_fdr_report(b"<html><body><p>nothing here</p></body></html>")


def test_fdr_requires_title():
    with pytest.raises(HtmlStructure):
        parse_fdr_report(b"<table><tr><td>A</td><td>true</td></tr></table>")


def test_caption_title_accepted():
    html = (
        f"<table><caption>{FDR_UNTIMED}</caption>"
        "<tr><th>Assertion</th><th>Result</th></tr>"
        "<tr><td>A_1</td><td>true</td></tr></table>"
    ).encode()
    report = parse_fdr_report(html)
    assert report.requirement_id == "R1"


def test_unparsable_result_cell():
    with pytest.raises(ResultUnparsable):
        parse_fdr_report(_html([(FDR_UNTIMED, [("A_1", "maybe", "")])]))


def test_prism_eight_rows():
    rows = [("P_SR1_1_1", "true", f"x={i}") for i in range(1, 9)]
    report = parse_prism_report(_html([(PRISM_TITLE, rows)]))
    assert report.tool is Tool.PRISM
    assert len(report.tables) == 1
    assert len(report.tables[0].rows) == 8
    assert all(r.result for r in report.tables[0].rows)


def test_prism_false_row_preserved():
    rows = [("P_1", "true", ""), ("P_1", "failed", "x=2")]
    report = parse_prism_report(_html([(PRISM_TITLE, rows)]))
    assert [r.result for r in report.tables[0].rows] == [True, False]


def test_prism_zero_tables_is_table_count():
    with pytest.raises(TableCount):
        parse_prism_report(b"<html><body></body></html>")


def test_prism_two_tables_is_table_count():
    html = _html([(PRISM_TITLE, [("P", "true", "")]), (PRISM_TITLE, [("P", "true", "")])])
    with pytest.raises(TableCount):
        parse_prism_report(html)


ISA_OK = b"""Loading theory "LRE"
lemma LRE_deadlock_free
Finished proof of LRE_deadlock_free: no errors
"""

ISA_BAD = b"""Loading theory "LRE"
lemma LRE_deadlock_free
Failed to finish proof of LRE_deadlock_free
"""


def test_isabelle_log_success():
    report = parse_isabelle_log(ISA_OK)
    assert report.requirement_id == "LRE"
    assert report.tool is Tool.ISABELLE
    assert report.tables[0].label == "proof"
    assert report.tables[0].rows[0] == ReportRow(
        "LRE_deadlock_free", True, "Finished proof of LRE_deadlock_free: no errors"
    )


def test_isabelle_log_failure():
    assert parse_isabelle_log(ISA_BAD).tables[0].rows[0].result is False


def test_isabelle_error_marker_beats_finished():
    log = b"lemma X_deadlock_free\n*** type error\nFinished theory\n"
    assert parse_isabelle_log(log).tables[0].rows[0].result is False


def test_isabelle_empty_log_unrecognized():
    with pytest.raises(LogUnrecognized):
        parse_isabelle_log(b"")
    with pytest.raises(LogUnrecognized):
        parse_isabelle_log(b"lemma LRE_deadlock_free\nno status here\n")


def test_parse_report_routes_by_content():
    assert parse_report(_html([(PRISM_TITLE, [("P", "true", "")])])).tool is Tool.PRISM
    assert parse_report(_html([(FDR_UNTIMED, [("A", "true", "")])])).tool is Tool.FDR
    assert parse_report(ISA_OK).tool is Tool.ISABELLE


# --------------------------------------------------------------------------
# Aggregation
# --------------------------------------------------------------------------

def _report(tool, row_groups):
    tables = tuple(
        ReportTable("untimed", tuple(ReportRow(f"A_{i}", bool(v), "") for i, v in enumerate(rows)))
        for rows in row_groups
    )
    return VerificationReport("R", tool, tables, "synthetic")


def test_aggregate_fdr_two_true_tables():
    assert aggregate(_report(Tool.FDR, [[True], [True]])) is True


def test_aggregate_prism_annihilator():
    assert aggregate(_report(Tool.PRISM, [[True, True, False, True]])) is False


def test_aggregate_prism_all_true_eight_rows():
    assert aggregate(_report(Tool.PRISM, [[True] * 8])) is True


def test_aggregate_fdr_missing_second_table_vacuous():
    assert aggregate(_report(Tool.FDR, [[True, True]])) is True


def _brute_force_consulted_rows(report):
    """Independent oracle: flatten every consulted table and AND the verdicts."""
    if report.tool is Tool.PRISM:
        consulted = report.tables[:1]
    elif report.tool is Tool.FDR:
        consulted = report.tables
    else:
        consulted = report.tables[:1]
    verdicts = [row.result for table in consulted for row in table.rows]
    out = True
    for v in verdicts:
        out = out and v
    return out


def test_aggregate_matches_brute_force_oracle_randomized():
    rng = random.Random(20260810)
    for _ in range(1000):
        tool = rng.choice([Tool.FDR, Tool.PRISM, Tool.ISABELLE])
        if tool is Tool.FDR:
            groups = [
                [rng.random() < 0.8 for _ in range(rng.randint(1, 6))]
                for _ in range(rng.randint(1, 2))
            ]
        elif tool is Tool.PRISM:
            groups = [[rng.random() < 0.8 for _ in range(rng.randint(1, 10))]]
        else:
            groups = [[rng.random() < 0.8]]
        report = _report(tool, groups)
        assert aggregate(report) == _brute_force_consulted_rows(report)


# --------------------------------------------------------------------------
# Claim-id extraction (left inverse of the naming scheme)
# --------------------------------------------------------------------------

def test_extract_claim_id_left_inverse_over_corpus(fixtures_dir):
    for name in ("chemical", "mail", "hvc", "auv", "maintenance", "coverage"):
        reqs = load_requirements(fixtures_dir / f"{name}.xml")
        for artifact in generate_all(reqs, "m"):
            assert extract_claim_id(artifact.assertion_id) == artifact.claim_id


def test_extract_claim_id_rejects_foreign_names():
    with pytest.raises(ValueError):
        extract_claim_id("Q_nope")
