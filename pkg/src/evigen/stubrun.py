"""Verification backends for the CLI: a hermetic stub and a config-driven exec runner.

The stub synthesizes report files in exactly the formats the report parsers
consume, driven by a result table, so the full pipeline runs without FDR,
PRISM, or Isabelle. The exec backend shells out per tool using argv templates
from the config file and expects each command to write its own report file.
"""

from __future__ import annotations

import json
import shutil
import subprocess
from html import escape
from pathlib import Path

from .catalog import Tool
from .errors import EvigenError
from .fsio import atomic_write_text
from .reports import format_report_title


class ExecError(EvigenError):
    """The exec backend cannot run (missing binary) or a tool command failed."""


def load_manifest(path: str | Path) -> list[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _fdr_labels(assertion_text: str) -> list[str]:
    """Which FDR report tables to emit: labelled assertions get one, unlabelled get both."""
    for line in assertion_text.splitlines():
        if line.startswith("untimed assertion"):
            return ["untimed"]
        if line.startswith("timed assertion"):
            return ["timed"]
        if line.startswith("assertion"):
            return ["untimed", "timed"]
    return ["untimed", "timed"]


def _result_rows(spec, label: str, assertion_id: str) -> list[tuple[str, bool]]:
    """Normalize one stub-results entry into (assertion, verdict) rows for one table."""
    if isinstance(spec, dict):
        if "rows" in spec:
            return [(assertion_id, bool(v)) for v in spec["rows"]]
        if label in spec:
            return [(assertion_id, bool(spec[label]))]
        return [(assertion_id, True)]
    return [(assertion_id, bool(spec))]


def _html_report(tables: list[tuple[str, list[tuple[str, bool]]]]) -> str:
    parts = [
        "<!DOCTYPE html>",
        "<html>",
        '<head><meta charset="utf-8"/><title>Verification report</title></head>',
        "<body>",
    ]
    for title, rows in tables:
        parts.append(f"<h2>{escape(title)}</h2>")
        parts.append("<table>")
        parts.append("<tr><th>Assertion</th><th>Result</th><th>Detail</th></tr>")
        for name, verdict in rows:
            word = "true" if verdict else "false"
            detail = "check passed" if verdict else "check failed"
            parts.append(
                f"<tr><td>{escape(name)}</td><td>{word}</td><td>{escape(detail)}</td></tr>"
            )
        parts.append("</table>")
    parts += ["</body>", "</html>", ""]
    return "\n".join(parts)


def _isabelle_log(req_id: str, assertion_id: str, ok: bool) -> str:
    lines = [f'Loading theory "{req_id}"', f"lemma {assertion_id}"]
    if ok:
        lines.append(f"Finished proof of {assertion_id}: no errors")
    else:
        lines.append(f"Failed to finish proof of {assertion_id}")
    lines.append("")
    return "\n".join(lines)


def report_filename(req_id: str, tool: Tool) -> str:
    suffix = {Tool.FDR: "fdr.html", Tool.PRISM: "prism.html", Tool.ISABELLE: "isabelle.log"}
    return f"{req_id}.{suffix[tool]}"


def run_stub(
    manifest_path: str | Path, out_dir: str | Path, results: dict | None = None
) -> list[Path]:
    """Synthesize one report file per manifest entry; returns the written paths."""
    manifest_path = Path(manifest_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = results or {}
    written = []
    for entry in load_manifest(manifest_path):
        req = entry["requirement_id"]
        tool = Tool(entry["tool"])
        assertion_id = entry["assertion_id"]
        spec = results.get(req, True)
        path = out_dir / report_filename(req, tool)
        if tool is Tool.ISABELLE:
            rows = _result_rows(spec, "proof", assertion_id)
            content = _isabelle_log(req, assertion_id, rows[0][1])
        elif tool is Tool.PRISM:
            title = format_report_title(req, tool, "probabilistic")
            content = _html_report([(title, _result_rows(spec, "probabilistic", assertion_id))])
        else:
            assertion_text = (manifest_path.parent / entry["file"]).read_text(encoding="utf-8")
            tables = [
                (format_report_title(req, tool, label), _result_rows(spec, label, assertion_id))
                for label in _fdr_labels(assertion_text)
            ]
            content = _html_report(tables)
        atomic_write_text(path, content)
        written.append(path)
    return written


def run_exec(
    manifest_path: str | Path, out_dir: str | Path, backend_config: dict
) -> list[Path]:
    """Run configured tool commands; all binaries are checked before anything runs."""
    manifest_path = Path(manifest_path)
    out_dir = Path(out_dir)
    entries = load_manifest(manifest_path)

    plans = []
    for entry in entries:
        tool = entry["tool"]
        config = backend_config.get(tool)
        if not config or not config.get("command"):
            raise ExecError(f"no command configured for tool {tool}")
        argv_template = config["command"]
        report_path = out_dir / report_filename(entry["requirement_id"], Tool(tool))
        substitutions = {
            "file": str(manifest_path.parent / entry["file"]),
            "out": str(report_path),
            "requirement": entry["requirement_id"],
        }
        argv = [arg.format(**substitutions) for arg in argv_template]
        plans.append((argv, report_path, Tool(tool)))

    for argv, _, _ in plans:
        if shutil.which(argv[0]) is None:
            raise ExecError(f"backend binary not found: {argv[0]}")

    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for argv, report_path, tool in plans:
        proc = subprocess.run(argv, capture_output=True, text=True)
        if proc.returncode != 0:
            raise ExecError(f"backend command failed ({proc.returncode}): {' '.join(argv)}")
        if tool is Tool.ISABELLE:
            # theorem-prover commands report on stdout; that is the proof log
            atomic_write_text(report_path, proc.stdout)
        elif not report_path.exists():
            raise ExecError(f"backend command wrote no report at {report_path}")
        written.append(report_path)
    return written
