"""Verifier-output parsing: FDR/PRISM HTML table reports and Isabelle proof logs.

The HTML subset is the one the stub runner emits: each ``<table>`` is preceded
by an ``<h2>`` title (or carries a ``<caption>``) of the form
``Results of <label> analysis of assertions in <req>.assertions using <tool>``
with columns Assertion | Result | Detail. Parsers tolerate extra attributes
and whitespace but never fabricate rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from html.parser import HTMLParser

from .catalog import Tool
from .errors import (
    HtmlStructure,
    LogUnrecognized,
    ResultUnparsable,
    TableCount,
    TitleUnrecognized,
)

_TITLE_RE = re.compile(
    r"Results\s+of\s+(?P<label>\w+)\s+analysis\s+of\s+assertions\s+in\s+"
    r"(?P<req>\S+)\.assertions\s+using\s+(?P<tool>FDR|PRISM|Isabelle)\s*$"
)
_RESULT_WORDS = {"true": True, "passed": True, "false": False, "failed": False}
_LEMMA_RE = re.compile(r"lemma\s+([A-Za-z0-9_-]+?)_deadlock_free\b")


@dataclass(frozen=True)
class ReportRow:
    assertion_name: str
    result: bool
    detail: str


@dataclass(frozen=True)
class ReportTable:
    label: str  # untimed | timed | probabilistic | proof
    rows: tuple[ReportRow, ...]


@dataclass(frozen=True)
class VerificationReport:
    requirement_id: str
    tool: Tool
    tables: tuple[ReportTable, ...]
    raw_title: str

    def to_dict(self) -> dict:
        return {
            "requirement_id": self.requirement_id,
            "tool": self.tool.value,
            "raw_title": self.raw_title,
            "tables": [
                {
                    "label": t.label,
                    "rows": [
                        {"assertion": r.assertion_name, "result": r.result, "detail": r.detail}
                        for r in t.rows
                    ],
                }
                for t in self.tables
            ],
        }


def format_report_title(requirement_id: str, tool: Tool, label: str) -> str:
    """The title line the stub runner writes; parse_report_title inverts it."""
    return f"Results of {label} analysis of assertions in {requirement_id}.assertions using {tool.value}"


def parse_report_title(title: str) -> tuple[str, Tool]:
    m = _TITLE_RE.search(title)
    if not m:
        raise TitleUnrecognized(f"unrecognized report title {title!r}")
    return m.group("req"), Tool(m.group("tool"))


def title_label(title: str) -> str:
    m = _TITLE_RE.search(title)
    if not m or m.group("label") not in ("untimed", "timed", "probabilistic"):
        raise HtmlStructure(f"report title lacks an analysis label: {title!r}")
    return m.group("label")


def extract_claim_id(assertion_id: str) -> str:
    """Recover the claim id embedded in an assertion name (left inverse of generation)."""
    if assertion_id.endswith("_deadlock_free"):
        return assertion_id[: -len("_deadlock_free")]
    if assertion_id[:2] in ("A_", "P_", "R_", "T_"):
        return assertion_id[2:]
    raise ValueError(f"assertion id {assertion_id!r} does not follow the naming scheme")


# --------------------------------------------------------------------------
# HTML table extraction
# --------------------------------------------------------------------------

class _TableExtractor(HTMLParser):
    """Collects (title, row-cells) per table; titles come from <h2> or <caption>."""

    def __init__(self) -> None:
        super().__init__()
        self.tables: list[tuple[str | None, list[list[str]], list[list[str]]]] = []
        self._pending_title: str | None = None
        self._in_heading = False
        self._in_caption = False
        self._heading_text: list[str] = []
        self._in_table = False
        self._row: list[str] | None = None
        self._cell: list[str] | None = None
        self._row_has_header = False

    def handle_starttag(self, tag, attrs):
        if tag in ("h1", "h2", "h3"):
            self._in_heading = True
            self._heading_text = []
        elif tag == "table":
            self._in_table = True
            self.tables.append((self._pending_title, [], []))
            self._pending_title = None
        elif tag == "caption" and self._in_table:
            self._in_caption = True
            self._heading_text = []
        elif tag == "tr" and self._in_table:
            self._row = []
            self._row_has_header = False
        elif tag in ("td", "th") and self._row is not None:
            self._cell = []
            if tag == "th":
                self._row_has_header = True

    def handle_endtag(self, tag):
        if tag in ("h1", "h2", "h3") and self._in_heading:
            self._in_heading = False
            self._pending_title = " ".join("".join(self._heading_text).split())
        elif tag == "caption" and self._in_caption:
            self._in_caption = False
            title, header, data = self.tables[-1]
            caption = " ".join("".join(self._heading_text).split())
            self.tables[-1] = (title or caption, header, data)
        elif tag in ("td", "th") and self._cell is not None and self._row is not None:
            self._row.append(" ".join("".join(self._cell).split()))
            self._cell = None
        elif tag == "tr" and self._row is not None:
            _, header, data = self.tables[-1]
            (header if self._row_has_header else data).append(self._row)
            self._row = None
        elif tag == "table":
            self._in_table = False

    def handle_data(self, data):
        if self._cell is not None:
            self._cell.append(data)
        elif self._in_heading or self._in_caption:
            self._heading_text.append(data)


def _decode(html: bytes | str) -> str:
    if isinstance(html, bytes):
        return html.decode("utf-8", errors="replace")
    return html


def _parse_result_cell(cell: str) -> bool:
    value = _RESULT_WORDS.get(cell.strip().lower())
    if value is None:
        raise ResultUnparsable(f"result cell {cell!r} not in true/false/passed/failed")
    return value


def _extract_tables(html: bytes | str) -> list[tuple[str, ReportTable]]:
    extractor = _TableExtractor()
    extractor.feed(_decode(html))
    extractor.close()
    out = []
    for title, _header, data in extractor.tables:
        if not title:
            raise HtmlStructure("table without a title caption")
        if not data:
            raise HtmlStructure(f"table {title!r} has no data rows")
        rows = []
        for cells in data:
            if len(cells) < 2:
                raise HtmlStructure(f"table row {cells!r} lacks assertion/result columns")
            detail = " ".join(cells[2:]) if len(cells) > 2 else ""
            rows.append(ReportRow(cells[0], _parse_result_cell(cells[1]), detail))
        out.append((title, ReportTable(title_label(title), tuple(rows))))
    return out


def _report_from_tables(
    titled: list[tuple[str, ReportTable]], expected_tool: Tool
) -> VerificationReport:
    first_title = titled[0][0]
    req_id, tool = parse_report_title(first_title)
    if tool is not expected_tool:
        raise HtmlStructure(f"expected a {expected_tool.value} report, title says {tool.value}")
    for title, _ in titled[1:]:
        other_req, other_tool = parse_report_title(title)
        if (other_req, other_tool) != (req_id, tool):
            raise HtmlStructure("tables of one report disagree on requirement or tool")
    return VerificationReport(
        requirement_id=req_id,
        tool=tool,
        tables=tuple(t for _, t in titled),
        raw_title=first_title,
    )


def parse_fdr_report(html: bytes | str) -> VerificationReport:
    """Parse an FDR report: one (untimed or timed) or two tables, one row per assertion."""
    titled = _extract_tables(html)
    if not titled:
        raise HtmlStructure("FDR report has no tables")
    if len(titled) > 2:
        raise HtmlStructure(f"FDR report has {len(titled)} tables, at most 2 expected")
    return _report_from_tables(titled, Tool.FDR)


def parse_prism_report(html: bytes | str) -> VerificationReport:
    """Parse a PRISM report: exactly one table, one row per constant instantiation."""
    titled = _extract_tables(html)
    if len(titled) != 1:
        raise TableCount(f"PRISM report has {len(titled)} tables, exactly 1 expected")
    return _report_from_tables(titled, Tool.PRISM)


def parse_isabelle_log(log: bytes | str) -> VerificationReport:
    """Parse a proof log into a single synthetic proof table.

    The result is true iff the log reports the proof finished and records no
    error; the terminal status line is kept as the row detail.
    """
    text = _decode(log)
    m = _LEMMA_RE.search(text)
    if not m:
        raise LogUnrecognized("proof log names no *_deadlock_free lemma")
    claim = m.group(1)
    status_line = None
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith(("Finished", "Failed", "***")):
            status_line = stripped
    if status_line is None:
        raise LogUnrecognized("proof log has no terminal status line")
    has_error = "***" in text or status_line.startswith("Failed")
    result = status_line.startswith("Finished") and not has_error
    row = ReportRow(f"{claim}_deadlock_free", result, status_line)
    return VerificationReport(
        requirement_id=claim,
        tool=Tool.ISABELLE,
        tables=(ReportTable("proof", (row,)),),
        raw_title=status_line,
    )


def parse_report(data: bytes | str) -> VerificationReport:
    """Route raw report content to the right parser by sniffing its shape."""
    text = _decode(data)
    if "<table" in text.lower():
        titled = _extract_tables(text)
        if not titled:
            raise HtmlStructure("report has no tables")
        _, tool = parse_report_title(titled[0][0])
        return parse_prism_report(text) if tool is Tool.PRISM else parse_fdr_report(text)
    return parse_isabelle_log(text)


def aggregate(report: VerificationReport) -> bool:
    """Fold the report to one Boolean: conjunction over every consulted row."""
    if report.tool is Tool.PRISM:
        return all(row.result for row in report.tables[0].rows)
    if report.tool is Tool.FDR:
        return all(all(row.result for row in table.rows) for table in report.tables)
    return report.tables[0].rows[0].result
