"""Assurance-case data model: claims, evidence, links, persistence, GSN export.

A deliberately small subset of a structured assurance-case metamodel, just
the parts evidence integration touches: goal-style claims, evidence
artifacts, and SupportedBy / InContextOf / AssertedEvidence links. Documents
persist as a single canonical JSON file (key-sorted, LF, ``.ac.json``).

Placeholder evidence uses the reserved id prefix ``placeholder:``; such ids
may source an asserted-evidence link without a matching evidence entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum

from .catalog import Tool
from .errors import DuplicateLink, JsonSyntax, RefIntegrity

PLACEHOLDER_PREFIX = "placeholder:"


class ClaimKind(Enum):
    GOAL = "goal"
    STRATEGY = "strategy"
    CONTEXT = "context"


class LinkKind(Enum):
    SUPPORTED_BY = "SupportedBy"
    IN_CONTEXT_OF = "InContextOf"
    ASSERTED_EVIDENCE = "AssertedEvidence"


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    kind: ClaimKind = ClaimKind.GOAL


@dataclass(frozen=True)
class EvidenceArtifact:
    id: str
    supported_claim: str
    tool: Tool
    result: bool
    generated_at: str  # ISO-8601 UTC
    source_report: str
    description: str


@dataclass(frozen=True)
class Link:
    kind: LinkKind
    source: str
    target: str


@dataclass(frozen=True)
class AssuranceCase:
    claims: dict[str, Claim] = field(default_factory=dict)
    evidence: dict[str, EvidenceArtifact] = field(default_factory=dict)
    links: tuple[Link, ...] = ()

    def copy(self) -> "AssuranceCase":
        return replace(self, claims=dict(self.claims), evidence=dict(self.evidence))


@dataclass(frozen=True)
class AcDiagnostic:
    subject: str
    severity: str  # "error" | "warning" | "note"
    message: str


def is_placeholder(node_id: str) -> bool:
    return node_id.startswith(PLACEHOLDER_PREFIX)


def _check_integrity(ac: AssuranceCase) -> None:
    for ev in ac.evidence.values():
        if ev.supported_claim not in ac.claims:
            raise RefIntegrity(f"evidence {ev.id} supports unknown claim {ev.supported_claim!r}")
    for link in ac.links:
        if link.target not in ac.claims:
            raise RefIntegrity(f"{link.kind.value} link targets unknown claim {link.target!r}")
        if link.kind is LinkKind.ASSERTED_EVIDENCE:
            if not is_placeholder(link.source) and link.source not in ac.evidence:
                raise RefIntegrity(f"asserted-evidence source {link.source!r} is unknown")
        elif link.source not in ac.claims:
            raise RefIntegrity(f"{link.kind.value} link source {link.source!r} is unknown")


def load(data: bytes | str) -> AssuranceCase:
    """Parse an assurance-case JSON document; checks referential integrity."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise JsonSyntax(f"not valid JSON: {exc}") from None
    try:
        claims = {
            cid: Claim(id=cid, statement=c["statement"], kind=ClaimKind(c.get("kind", "goal")))
            for cid, c in doc["claims"].items()
        }
        if "" in claims:
            raise JsonSyntax("claim with an empty id")
        evidence = {
            eid: EvidenceArtifact(
                id=eid,
                supported_claim=e["supported_claim"],
                tool=Tool(e["tool"]),
                result=bool(e["result"]),
                generated_at=e["generated_at"],
                source_report=e["source_report"],
                description=e["description"],
            )
            for eid, e in doc["evidence"].items()
        }
        links = tuple(
            Link(kind=LinkKind(l["kind"]), source=l["source"], target=l["target"])
            for l in doc["links"]
        )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise JsonSyntax(f"malformed assurance-case document: {exc!r}") from None
    ac = AssuranceCase(claims=claims, evidence=evidence, links=links)
    _check_integrity(ac)
    return ac


def save(ac: AssuranceCase) -> bytes:
    """Serialize to canonical JSON: key-sorted, two-space indent, LF, trailing newline."""
    doc = {
        "claims": {
            cid: {"statement": c.statement, "kind": c.kind.value} for cid, c in ac.claims.items()
        },
        "evidence": {
            eid: {
                "supported_claim": e.supported_claim,
                "tool": e.tool.value,
                "result": e.result,
                "generated_at": e.generated_at,
                "source_report": e.source_report,
                "description": e.description,
            }
            for eid, e in ac.evidence.items()
        },
        "links": [
            {"kind": l.kind.value, "source": l.source, "target": l.target} for l in ac.links
        ],
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def load_file(path) -> AssuranceCase:
    with open(path, "rb") as fh:
        return load(fh.read())


def find_link_by_target(ac: AssuranceCase, claim_id: str) -> Link | None:
    """The unique asserted-evidence link targeting the claim, or None."""
    found = [
        l for l in ac.links
        if l.kind is LinkKind.ASSERTED_EVIDENCE and l.target == claim_id
    ]
    if len(found) > 1:
        raise DuplicateLink(f"{len(found)} asserted-evidence links target {claim_id!r}")
    return found[0] if found else None


def validate_structure(ac: AssuranceCase) -> list[AcDiagnostic]:
    """Pattern-conformance diagnostics; an integrated, well-formed case yields []."""
    out: list[AcDiagnostic] = []

    for ev in ac.evidence.values():
        if ev.supported_claim not in ac.claims:
            out.append(AcDiagnostic(ev.id, "error", "evidence supports an unknown claim"))
    referenced: set[str] = set()
    targets_seen: dict[str, int] = {}
    for link in ac.links:
        if link.target not in ac.claims:
            out.append(AcDiagnostic(link.target, "error", "link targets an unknown claim"))
        if link.kind is LinkKind.ASSERTED_EVIDENCE:
            targets_seen[link.target] = targets_seen.get(link.target, 0) + 1
            if is_placeholder(link.source):
                out.append(
                    AcDiagnostic(link.target, "note", "placeholder evidence awaiting integration")
                )
            elif link.source not in ac.evidence:
                out.append(AcDiagnostic(link.source, "error", "dangling evidence source"))
            else:
                referenced.add(link.source)
                if ac.evidence[link.source].supported_claim != link.target:
                    out.append(
                        AcDiagnostic(
                            link.source, "error",
                            "evidence supported_claim disagrees with its link target",
                        )
                    )
        elif link.source not in ac.claims:
            out.append(AcDiagnostic(link.source, "error", "link source is an unknown claim"))

    for claim_id, count in sorted(targets_seen.items()):
        if count > 1:
            out.append(
                AcDiagnostic(claim_id, "error", f"{count} asserted-evidence links target one claim")
            )

    supported = {l.target for l in ac.links}
    supporting = {l.source for l in ac.links if l.kind is not LinkKind.ASSERTED_EVIDENCE}
    for claim_id in sorted(ac.claims):
        if claim_id in supporting and claim_id not in supported:
            out.append(
                AcDiagnostic(claim_id, "warning", "claim supports others but has no support itself")
            )
        if claim_id not in supporting and claim_id not in supported:
            out.append(AcDiagnostic(claim_id, "warning", "claim participates in no links"))

    for eid in sorted(ac.evidence):
        if eid not in referenced:
            out.append(AcDiagnostic(eid, "warning", "evidence referenced by no link"))
    return out


# --------------------------------------------------------------------------
# GSN export
# --------------------------------------------------------------------------

_CLAIM_SHAPES = {
    ClaimKind.GOAL: "shape=box",
    ClaimKind.STRATEGY: "shape=parallelogram",
    ClaimKind.CONTEXT: "shape=box, style=rounded",
}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def export_gsn_dot(ac: AssuranceCase) -> str:
    """Render the case as GSN-style DOT: goals boxed, evidence circled, sorted node order."""
    lines = ["digraph assurance_case {", "  rankdir=TB;"]
    for claim_id in sorted(ac.claims):
        claim = ac.claims[claim_id]
        attrs = _CLAIM_SHAPES[claim.kind]
        label = _dot_escape(f"{claim_id}\n{claim.statement}")
        lines.append(f'  "{_dot_escape(claim_id)}" [{attrs}, label="{label}"];')
    evidence_nodes = set(ac.evidence)
    for link in ac.links:
        if link.kind is LinkKind.ASSERTED_EVIDENCE and is_placeholder(link.source):
            evidence_nodes.add(link.source)
    for node_id in sorted(evidence_nodes):
        if node_id in ac.evidence:
            ev = ac.evidence[node_id]
            label = _dot_escape(f"{node_id}\n{ev.tool.value} result: {str(ev.result).lower()}")
            attrs = "shape=circle"
        else:
            label = _dot_escape(node_id[len(PLACEHOLDER_PREFIX):])
            attrs = "shape=circle, style=dashed"
        lines.append(f'  "{_dot_escape(node_id)}" [{attrs}, label="{label}"];')
    for link in ac.links:
        src = _dot_escape(link.source)
        tgt = _dot_escape(link.target)
        if link.kind is LinkKind.IN_CONTEXT_OF:
            lines.append(f'  "{tgt}" -> "{src}" [label="InContextOf", style=dashed];')
        else:
            # GSN draws support top-down: supported claim to its support
            lines.append(f'  "{tgt}" -> "{src}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
