"""Command-line front end wiring the pipeline: generate, verify, integrate, render, trace.

Exit codes: 0 success (and, for integrate/trace, all results true / all chains
complete); 1 a verification result was false or a traceability chain is
broken; 2 input or usage errors; 3 exec-backend environment failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import acmodel, stubrun
from .catalog import catalog_table
from .errors import EvigenError
from .fsio import atomic_write_bytes, atomic_write_text
from .generate import artifact_filename, generate_all, write_artifacts
from .integrate import process_report
from .reports import parse_report
from .requirements import load_requirements, validate_requirement

log = logging.getLogger("evigen")

CONFIG_ENV = "EVIGEN_CONFIG"
DEFAULT_CONFIG = "evigen.toml"

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_BACKEND = 3

REPORT_SUFFIXES = (".html", ".log", ".txt")


def load_config(explicit: str | None) -> dict:
    path = explicit or os.environ.get(CONFIG_ENV) or DEFAULT_CONFIG
    p = Path(path)
    if not p.exists():
        if explicit or os.environ.get(CONFIG_ENV):
            raise EvigenError(f"config file not found: {path}")
        return {}
    with open(p, "rb") as fh:
        return tomllib.load(fh)


def _load_valid_requirements(path: str):
    reqs = load_requirements(path)
    failures = []
    for r in reqs:
        failures.extend(d for d in validate_requirement(r) if d.severity == "error")
    if failures:
        for d in failures:
            print(f"error: {d.requirement_id}: {d.message}", file=sys.stderr)
        raise EvigenError(f"{len(failures)} validation error(s) in {path}")
    return reqs


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_generate(args, config) -> int:
    reqs = _load_valid_requirements(args.reqs)
    naming = args.semantics_naming or config.get("generate", {}).get("semantics_naming", "plain")
    artifacts = generate_all(reqs, args.module, robo_naming=(naming == "robo"))
    manifest = write_artifacts(artifacts, Path(args.out))
    for artifact in artifacts:
        print(f"{artifact.source_requirement}: {artifact.assertion_id} "
              f"[{artifact.tool.value}] -> {artifact_filename(artifact)}")
    log.info("wrote %d artifact(s) and %s", len(artifacts), manifest)
    return EXIT_OK


def cmd_verify(args, config) -> int:
    if args.backend == "stub":
        results = {}
        if args.stub_results:
            with open(args.stub_results, "r", encoding="utf-8") as fh:
                results = json.load(fh)
        written = stubrun.run_stub(args.manifest, args.out, results)
    else:
        backends = config.get("backend", {})
        try:
            written = stubrun.run_exec(args.manifest, args.out, backends)
        except stubrun.ExecError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BACKEND
    for path in written:
        print(path)
    return EXIT_OK


def _report_files(reports_dir: Path) -> list[Path]:
    return sorted(
        p for p in reports_dir.iterdir()
        if p.is_file() and p.suffix.lower() in REPORT_SUFFIXES
    )


def cmd_integrate(args, config) -> int:
    reqs = _load_valid_requirements(args.reqs)
    ac_path = Path(args.ac)
    ac = acmodel.load_file(ac_path)
    files = _report_files(Path(args.reports))
    if not files:
        raise EvigenError(f"no report files in {args.reports}")

    # Gather first, commit once: any failure leaves the document untouched.
    summaries = []
    for path in files:
        report = parse_report(path.read_bytes())
        ac, summary = process_report(ac, report, reqs, path, now=args.timestamp)
        summaries.append(summary)
    atomic_write_bytes(ac_path, acmodel.save(ac))
    for summary in summaries:
        print(json.dumps(summary, sort_keys=True))
    return EXIT_OK if all(s["result"] for s in summaries) else EXIT_FALSE


def cmd_render(args, config) -> int:
    ac = acmodel.load_file(args.ac)
    dot = acmodel.export_gsn_dot(ac)
    if args.out:
        atomic_write_text(Path(args.out), dot)
    else:
        print(dot, end="")
    return EXIT_OK


def cmd_trace(args, config) -> int:
    reqs = _load_valid_requirements(args.reqs)
    ac = acmodel.load_file(args.ac)
    manifest = {e["requirement_id"]: e for e in stubrun.load_manifest(args.manifest)}

    rows = []
    complete = True
    for r in reqs:
        entry = manifest.get(r.id)
        assertion_id = entry["assertion_id"] if entry else "-"
        link = acmodel.find_link_by_target(ac, r.trace.forwards) if r.trace.forwards else None
        evidence_id = link.source if link else "-"
        ok = bool(
            entry
            and link
            and not acmodel.is_placeholder(link.source)
            and link.source in ac.evidence
        )
        complete &= ok
        rows.append(
            {
                "requirement": r.id,
                "claim": r.trace.backwards,
                "assertion": assertion_id,
                "ac_claim": r.trace.forwards,
                "evidence": evidence_id,
                "complete": ok,
            }
        )
    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
    else:
        for row in rows:
            status = "ok" if row["complete"] else "INCOMPLETE"
            print(
                f"{row['requirement']:<12} {row['claim']:<12} {row['assertion']:<16} "
                f"{row['ac_claim']:<14} {row['evidence']:<40} {status}"
            )
    return EXIT_OK if complete else EXIT_FALSE


def cmd_catalog(args, config) -> int:
    print(catalog_table())
    return EXIT_OK


def cmd_parse_report(args, config) -> int:
    report = parse_report(Path(args.report).read_bytes())
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(f"{report.requirement_id} [{report.tool.value}] {report.raw_title}")
        for table in report.tables:
            for row in table.rows:
                word = "true" if row.result else "false"
                print(f"  {table.label:<14} {row.assertion_name:<24} {word:<6} {row.detail}")
    return EXIT_OK


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evigen",
        description="Generate formal-verification assertions from structured requirements "
        "and integrate verification results into an assurance case.",
    )
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--config", help=f"config file (default ./{DEFAULT_CONFIG}, "
                                          f"override with ${CONFIG_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="instantiate assertion templates from a requirement doc")
    p.add_argument("--reqs", required=True, help="requirement document (XML)")
    p.add_argument("--module", required=True, help="model module identifier for csp blocks")
    p.add_argument("--out", required=True, help="output directory for assertion files")
    p.add_argument("--semantics-naming", choices=("plain", "robo"), default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="run a verification backend over generated assertions")
    p.add_argument("--manifest", required=True, help="assertions manifest (JSON)")
    p.add_argument("--backend", choices=("stub", "exec"), default="stub")
    p.add_argument("--stub-results", help="JSON result table for the stub backend")
    p.add_argument("--out", required=True, help="output directory for reports")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", help="fold verification reports into the assurance case")
    p.add_argument("--reports", required=True, help="directory of report files")
    p.add_argument("--reqs", required=True, help="requirement document (XML)")
    p.add_argument("--ac", required=True, help="assurance-case document (.ac.json)")
    p.add_argument("--timestamp", help="pin the evidence timestamp (ISO-8601)")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("render", help="export the assurance case as GSN-style DOT")
    p.add_argument("--ac", required=True)
    p.add_argument("--out", help="write DOT here instead of stdout")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("trace", help="print the requirement/claim/assertion/evidence matrix")
    p.add_argument("--ac", required=True)
    p.add_argument("--reqs", required=True)
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("catalog", help="dump the requirement/assertion template map")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("parse-report", help="parse one report file and show its structure")
    p.add_argument("report")
    p.set_defaults(func=cmd_parse_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except EvigenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
