"""Evidence integration: report -> claim resolution, evidence synthesis, link rewiring.

Integration is a pure function from one assurance case to the next: the
asserted-evidence link for the resolved claim is repointed at a freshly
generated artifact, and the displaced source (placeholder or stale evidence)
is garbage-collected when nothing else references it. Evidence is produced
for failed verifications too; skipping a failure would misstate the case.
"""

from __future__ import annotations

import hashlib
from datetime import datetime, timezone
from pathlib import Path

from .acmodel import AssuranceCase, EvidenceArtifact, Link, find_link_by_target, is_placeholder
from .catalog import Tool
from .errors import NoLink, TraceMiss
from .reports import VerificationReport, aggregate
from .requirements import StructuredRequirement

_TOOL_METHODS = {
    Tool.FDR: "FDR model checking",
    Tool.PRISM: "PRISM model checking",
    Tool.ISABELLE: "Isabelle theorem proving",
}


def resolve_trace(
    report: VerificationReport, reqs: list[StructuredRequirement]
) -> tuple[str, str]:
    """Map a report to (requirement id, verification-method claim id) via traceability."""
    for r in reqs:
        if r.trace.backwards == report.requirement_id:
            if not r.trace.forwards:
                raise TraceMiss(f"requirement {r.id} has no forwards trace to integrate into")
            return r.id, r.trace.forwards
    raise TraceMiss(
        f"no requirement's backwards trace matches report id {report.requirement_id!r}"
    )


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def gen_evidence(
    result: bool,
    ac_claim_id: str,
    tool: Tool,
    source_report_path: str | Path,
    now: str | None = None,
) -> EvidenceArtifact:
    """Build the evidence artifact for one verification outcome.

    The id is deterministic in (claim, tool, report content); `now` exists so
    callers that need reproducible documents can pin the timestamp.
    """
    digest = hashlib.sha256(Path(source_report_path).read_bytes()).hexdigest()[:12]
    verdict = "supported" if result else "not satisfied"
    description = (
        f"Formal verification by {_TOOL_METHODS[tool]}; "
        f"result: {str(result).lower()}; claim {ac_claim_id} is {verdict}."
    )
    return EvidenceArtifact(
        id=f"ev:{ac_claim_id}:{tool.value}:{digest}",
        supported_claim=ac_claim_id,
        tool=tool,
        result=result,
        generated_at=now if now is not None else _utc_now(),
        source_report=str(source_report_path),
        description=description,
    )


def integrate(ac: AssuranceCase, evidence: EvidenceArtifact, ac_claim_id: str) -> AssuranceCase:
    """Rewire the claim's asserted-evidence link to the new artifact; returns a new case."""
    link = find_link_by_target(ac, ac_claim_id)
    if link is None:
        raise NoLink(f"no asserted-evidence link targets claim {ac_claim_id!r}")
    assert evidence.supported_claim == ac_claim_id

    old_source = link.source
    new_links = tuple(
        Link(l.kind, evidence.id, l.target) if l is link else l for l in ac.links
    )
    new_evidence = dict(ac.evidence)
    new_evidence[evidence.id] = evidence
    if old_source != evidence.id and not is_placeholder(old_source):
        if not any(l.source == old_source for l in new_links):
            new_evidence.pop(old_source, None)
    return AssuranceCase(claims=dict(ac.claims), evidence=new_evidence, links=new_links)


def process_report(
    ac: AssuranceCase,
    report: VerificationReport,
    reqs: list[StructuredRequirement],
    source_report_path: str | Path,
    now: str | None = None,
) -> tuple[AssuranceCase, dict]:
    """One report end to end: aggregate, resolve, synthesize, integrate.

    Returns the updated case plus the machine-readable summary line content.
    """
    result = aggregate(report)
    req_id, claim_id = resolve_trace(report, reqs)
    evidence = gen_evidence(result, claim_id, report.tool, source_report_path, now=now)
    updated = integrate(ac, evidence, claim_id)
    summary = {
        "req": req_id,
        "claim": claim_id,
        "tool": report.tool.value,
        "result": result,
        "evidence_id": evidence.id,
    }
    return updated, summary
