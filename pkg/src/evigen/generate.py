"""Assertion-template instantiation.

Eleven templates over three notations: CSP refinement blocks and one-line
general assertions for FDR, probabilistic/reward/temporal properties for
PRISM, and a deadlock-freedom lemma skeleton for Isabelle. Generation is a
pure text transformation; equal inputs yield byte-identical artifacts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .catalog import Kind, Locality, TimeLabel, Tool, classify
from .errors import MissingField
from .events import FqEvent, parse_fq_event, render_fq_event
from .fsio import atomic_write_text
from .requirements import (
    ConstantConfig,
    Mode,
    StructuredRequirement,
    constants_of,
    parse_condition_call,
    parse_op_expr,
    parse_term_op,
)


class Notation(Enum):
    CSP_ASSERTION_DSL = "csp_assertion_dsl"
    PRISM_ASSERTION_DSL = "prism_assertion_dsl"
    ISAR = "isar"


_TOOL_NOTATION = {
    Tool.FDR: Notation.CSP_ASSERTION_DSL,
    Tool.PRISM: Notation.PRISM_ASSERTION_DSL,
    Tool.ISABELLE: Notation.ISAR,
}


@dataclass(frozen=True)
class AssertionArtifact:
    claim_id: str
    assertion_id: str
    notation: Notation
    tool: Tool
    text: str
    source_requirement: str

    def __post_init__(self) -> None:
        assert self.text and self.assertion_id in self.text


def _impl_process(module_name: str, robo_naming: bool) -> str:
    return f"{module_name}::O__(0)" if robo_naming else module_name


def _refinement_footer(label: str, claim_id: str) -> str:
    return f"{label} assertion A_{claim_id} : Spec_impl refines Spec in the traces model"


def gen_untimed_global(
    guard: FqEvent,
    required: FqEvent,
    claim_id: str,
    module_name: str,
    source_requirement: str = "",
    robo_naming: bool = False,
) -> AssertionArtifact:
    """Global untimed safety: after the guard, only further guards until the required event."""
    g = render_fq_event(guard)
    r = render_fq_event(required)
    text = "\n".join(
        [
            "untimed csp Spec",
            "csp-begin",
            f"Spec = CHAOS(Events) [|{{| {g} |}}|> (RUN({{| {g} |}}) /\\ {r} -> Spec)",
            "csp-end",
            "",
            f"untimed csp Spec_impl associated to {module_name}",
            "csp-begin",
            f"spec_impl = {_impl_process(module_name, robo_naming)}",
            "csp-end",
            "",
            _refinement_footer("untimed", claim_id),
        ]
    )
    return AssertionArtifact(
        claim_id, f"A_{claim_id}", Notation.CSP_ASSERTION_DSL, Tool.FDR, text,
        source_requirement or claim_id,
    )


def gen_untimed_local(
    scope_guard: FqEvent,
    local_guard: FqEvent,
    required: FqEvent,
    claim_id: str,
    module_name: str,
    source_requirement: str = "",
    robo_naming: bool = False,
) -> AssertionArtifact:
    """Scoped untimed safety: the global pattern armed only inside the scope guard."""
    g1 = render_fq_event(scope_guard)
    g2 = render_fq_event(local_guard)
    r = render_fq_event(required)
    text = "\n".join(
        [
            "untimed csp Spec",
            "csp-begin",
            f"Spec = CHAOS(Events) [|{{| {g1} |}}|> LocalBehaviour",
            f"LocalBehaviour = CHAOS(Events) [|{{| {g2} |}}|> (RUN({{| {g2} |}}) /\\ {r} -> Spec)",
            "csp-end",
            "",
            f"untimed csp Spec_impl associated to {module_name}",
            "csp-begin",
            f"spec_impl = {_impl_process(module_name, robo_naming)}",
            "csp-end",
            "",
            _refinement_footer("untimed", claim_id),
        ]
    )
    return AssertionArtifact(
        claim_id, f"A_{claim_id}", Notation.CSP_ASSERTION_DSL, Tool.FDR, text,
        source_requirement or claim_id,
    )


def gen_timed_deadline(
    trigger: FqEvent,
    target: FqEvent,
    deadline: int,
    claim_id: str,
    module_name: str,
    source_requirement: str = "",
    robo_naming: bool = False,
) -> AssertionArtifact:
    """Deadline pattern: once triggered, time may not pass the deadline before the target."""
    if deadline < 0:
        raise MissingField(f"{claim_id}: deadline must be nonnegative")
    t = render_fq_event(trigger)
    g = render_fq_event(target)
    spec_line = (
        f"Spec = timed_priority(CHAOS(Events) [|{{| {t} |}}|> SKIP; "
        f"((CHAOS(Events) /\\ (WAIT({deadline}); STOPU)) [|{{| {g} |}}|> SKIP); Spec)"
    )
    text = "\n".join(
        [
            "timed csp Spec",
            "csp-begin",
            "Timed(OneStep) {",
            spec_line,
            "}",
            "csp-end",
            "",
            f"timed csp Spec_impl associated to {module_name}",
            "csp-begin",
            "Timed(OneStep) {",
            f"spec_impl = timed_priority({_impl_process(module_name, robo_naming)} "
            f"|\\ {{| {t}, {g}, tock |}})",
            "}",
            "csp-end",
            "",
            _refinement_footer("timed", claim_id),
        ]
    )
    return AssertionArtifact(
        claim_id, f"A_{claim_id}", Notation.CSP_ASSERTION_DSL, Tool.FDR, text,
        source_requirement or claim_id,
    )


_GENERAL_PHRASES = {
    Kind.REACH: ("is", "is not"),
    Kind.DEADLOCK_FDR: ("is", "is not"),
    Kind.DIVERGENCE: ("is", "is not"),
    Kind.TERMINATION: ("terminates", "does not terminate"),
}


def gen_general(
    kind: Kind,
    scope: str,
    state: str | None,
    mode: Mode,
    time_label: TimeLabel,
    claim_id: str,
    source_requirement: str = "",
) -> AssertionArtifact:
    """One-line FDR assertion for reachability, deadlock/divergence freedom, termination."""
    if kind is Kind.REACH and not state:
        raise MissingField(f"{claim_id}: reachability assertion needs a state")
    label = "" if time_label is TimeLabel.BOTH else f"{time_label.value} "
    positive, negative = _GENERAL_PHRASES[kind]
    term = positive if mode is Mode.ALWAYS else negative
    if kind is Kind.REACH:
        body = f"{scope}::{state} {term} reachable in {scope}."
    elif kind is Kind.DEADLOCK_FDR:
        body = f"{scope} {term} deadlock-free."
    elif kind is Kind.DIVERGENCE:
        body = f"{scope} {term} divergence-free."
    else:
        body = f"{scope} {term}."
    text = f"{label}assertion A_{claim_id}: {body}"
    return AssertionArtifact(
        claim_id, f"A_{claim_id}", Notation.CSP_ASSERTION_DSL, Tool.FDR, text,
        source_requirement or claim_id,
    )


def gen_ddlk_isar(scope: str, claim_id: str, source_requirement: str = "") -> AssertionArtifact:
    """Deadlock-freedom lemma skeleton for the theorem prover."""
    if not scope:
        raise MissingField(f"{claim_id}: lemma needs a scope")
    name = f"{claim_id}_deadlock_free"
    text = f'lemma {name}: "deadlock_free {scope}"\n  apply deadlock_free'
    return AssertionArtifact(
        claim_id, name, Notation.ISAR, Tool.ISABELLE, text, source_requirement or claim_id
    )


def _constants_section(constants: list[ConstantConfig]) -> list[str]:
    if not constants:
        return []
    return ["with constant " + " and ".join(c.render() for c in constants)]


def gen_prob(
    prob_target: tuple[str, str],
    path_formula: str,
    constants: list[ConstantConfig],
    claim_id: str,
    source_requirement: str = "",
) -> AssertionArtifact:
    """Probability-bound property over a path formula."""
    op, expr = prob_target
    if op not in (">", ">=", "<", "<=", "=="):
        raise MissingField(f"{claim_id}: bad probability operator {op!r}")
    if not path_formula:
        raise MissingField(f"{claim_id}: probability property needs a path formula")
    lines = [f"prob property P_{claim_id}: Prob {op} {expr} of [{path_formula}]"]
    lines += _constants_section(constants)
    return AssertionArtifact(
        claim_id, f"P_{claim_id}", Notation.PRISM_ASSERTION_DSL, Tool.PRISM,
        "\n".join(lines), source_requirement or claim_id,
    )


def gen_reward(
    reward_event: FqEvent,
    reward_value: str,
    reward_target: tuple[str, str],
    path_formula: str,
    constants: list[ConstantConfig],
    claim_id: str,
    source_requirement: str = "",
) -> AssertionArtifact:
    """Reward structure plus the bound on the reward accumulated along a path formula."""
    op, expr = reward_target
    if not reward_value:
        raise MissingField(f"{claim_id}: reward property needs a reward value")
    if not path_formula:
        raise MissingField(f"{claim_id}: reward property needs a path formula")
    name = f"reward_{claim_id}"
    lines = [
        f"rewards {name} = [{render_fq_event(reward_event)}] true : {reward_value} endrewards",
        f"prob property R_{claim_id}: Reward {name} {op} {expr} of [{path_formula}]",
    ]
    lines += _constants_section(constants)
    return AssertionArtifact(
        claim_id, f"R_{claim_id}", Notation.PRISM_ASSERTION_DSL, Tool.PRISM,
        "\n".join(lines), source_requirement or claim_id,
    )


def gen_temporal(
    term_op: tuple[str, bool],
    path_formula: str,
    constants: list[ConstantConfig],
    claim_id: str,
    source_requirement: str = "",
) -> AssertionArtifact:
    """Qualitative temporal property: [not] Forall/Exists over a path formula."""
    operator, negated = term_op
    if operator not in ("forall", "exists"):
        raise MissingField(f"{claim_id}: bad temporal operator {operator!r}")
    if not path_formula:
        raise MissingField(f"{claim_id}: temporal property needs a path formula")
    rendered = ("not " if negated else "") + operator.capitalize()
    lines = [f"prob property T_{claim_id}: {rendered} [{path_formula}]"]
    lines += _constants_section(constants)
    return AssertionArtifact(
        claim_id, f"T_{claim_id}", Notation.PRISM_ASSERTION_DSL, Tool.PRISM,
        "\n".join(lines), source_requirement or claim_id,
    )


# --------------------------------------------------------------------------
# Driver
# --------------------------------------------------------------------------

def _path_formula(r: StructuredRequirement) -> str:
    for clause in r.until_conditions:
        if clause.prefix == "pathFormula_":
            return clause.body
    raise MissingField(f"{r.id}: no pathFormula_ clause in until section")


def _guard_clause_body(r: StructuredRequirement, prefix: str) -> str:
    for clause in r.guard_conditions:
        if clause.prefix == prefix:
            return clause.body
    raise MissingField(f"{r.id}: no {prefix} clause in guard section")


def generate_for(
    r: StructuredRequirement, module_name: str, robo_naming: bool = False
) -> AssertionArtifact:
    """Instantiate the matching assertion template for one requirement."""
    rk = classify(r)
    claim = r.trace.backwards
    kind = rk.kind

    if kind is Kind.UNTIMED:
        required = parse_fq_event(r.required_condition.body)
        if rk.locality is Locality.LOCAL:
            return gen_untimed_local(
                parse_fq_event(r.guard_conditions[0].body),
                parse_fq_event(r.guard_conditions[1].body),
                required, claim, module_name, r.id, robo_naming,
            )
        return gen_untimed_global(
            parse_fq_event(r.guard_conditions[0].body),
            required, claim, module_name, r.id, robo_naming,
        )

    if kind is Kind.TIMED:
        if r.trigger_condition is None or r.duration is None:
            raise MissingField(f"{r.id}: timed requirement lacks trigger or duration")
        return gen_timed_deadline(
            parse_fq_event(r.trigger_condition.body),
            parse_fq_event(r.required_condition.body),
            r.duration.amount, claim, module_name, r.id, robo_naming,
        )

    if kind in (Kind.REACH, Kind.DEADLOCK_FDR, Kind.DIVERGENCE, Kind.TERMINATION):
        _, args = parse_condition_call(r.required_condition.body)
        scope = args[0]
        state = args[1] if len(args) > 1 else None
        assert r.always_or_never is not None
        return gen_general(kind, scope, state, r.always_or_never, rk.time_label, claim, r.id)

    if kind is Kind.DEADLOCK_ISA:
        _, args = parse_condition_call(r.required_condition.body)
        return gen_ddlk_isar(args[0], claim, r.id)

    constants = constants_of(r)
    if kind is Kind.PROB:
        return gen_prob(
            parse_op_expr(r.required_condition.body), _path_formula(r), constants, claim, r.id
        )
    if kind is Kind.REWARD:
        event = parse_fq_event(_guard_clause_body(r, "reward_event_"))
        value = _guard_clause_body(r, "reward_value_")
        return gen_reward(
            event, value, parse_op_expr(r.required_condition.body),
            _path_formula(r), constants, claim, r.id,
        )
    term = parse_term_op(r.required_condition.body)
    if term is None:
        raise MissingField(f"{r.id}: bad term operator {r.required_condition.body!r}")
    return gen_temporal(term, _path_formula(r), constants, claim, r.id)


def generate_all(
    doc: list[StructuredRequirement], module_name: str, robo_naming: bool = False
) -> list[AssertionArtifact]:
    """One artifact per requirement, input order preserved."""
    return [generate_for(r, module_name, robo_naming) for r in doc]


# --------------------------------------------------------------------------
# Artifact files and manifest
# --------------------------------------------------------------------------

MANIFEST_NAME = "assertions.manifest.json"


def artifact_filename(artifact: AssertionArtifact) -> str:
    ext = ".thy" if artifact.notation is Notation.ISAR else ".assertions"
    return f"{artifact.source_requirement}{ext}"


def write_artifacts(artifacts: list[AssertionArtifact], out_dir: Path) -> Path:
    """Write one UTF-8/LF file per artifact plus the manifest; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for artifact in artifacts:
        name = artifact_filename(artifact)
        atomic_write_text(out_dir / name, artifact.text + "\n")
        entries.append(
            {
                "requirement_id": artifact.source_requirement,
                "claim_id": artifact.claim_id,
                "tool": artifact.tool.value,
                "file": name,
                "assertion_id": artifact.assertion_id,
            }
        )
    manifest = out_dir / MANIFEST_NAME
    atomic_write_text(manifest, json.dumps(entries, indent=2) + "\n")
    return manifest
