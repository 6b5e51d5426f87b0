"""Requirement classification and the requirement-template/assertion-template map.

Classification is a deterministic dispatch: the base template picks the branch,
the required-condition prefix separates the probabilistic family, and the
condition function token selects among the general kinds. Each kind maps to
exactly one assertion template and exactly one verification tool.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import MalformedEvent, Unclassifiable
from .requirements import (
    DEADLOCK_FDR_FUNCTIONS,
    DEADLOCK_ISA_FUNCTIONS,
    DIVERGENCE_FUNCTIONS,
    REACH_FUNCTIONS,
    TERMINATION_FUNCTIONS,
    BaseTemplate,
    StructuredRequirement,
    parse_condition_call,
)


class Kind(Enum):
    UNTIMED = "Untimed"
    TIMED = "Timed"
    REACH = "Reach"
    DEADLOCK_FDR = "DeadlockFdr"
    DEADLOCK_ISA = "DeadlockIsa"
    DIVERGENCE = "Divergence"
    TERMINATION = "Termination"
    PROB = "Prob"
    REWARD = "Reward"
    TEMPORAL = "Temporal"


class Locality(Enum):
    GLOBAL = "global"
    LOCAL = "local"


class TimeLabel(Enum):
    UNTIMED = "untimed"
    TIMED = "timed"
    BOTH = "both"


class Tool(Enum):
    FDR = "FDR"
    PRISM = "PRISM"
    ISABELLE = "Isabelle"


@dataclass(frozen=True)
class RequirementKind:
    kind: Kind
    locality: Locality = Locality.GLOBAL     # meaningful for UNTIMED only
    time_label: TimeLabel = TimeLabel.BOTH   # meaningful for general kinds


@dataclass(frozen=True)
class AtTarget:
    template_id: str
    tool: Tool


# Assertion template -> tool (the one-tool-per-template relation).
TEMPLATE_TOOLS = {
    "AT-UTG": Tool.FDR,
    "AT-UTL": Tool.FDR,
    "AT-DLINE": Tool.FDR,
    "AT-REACH": Tool.FDR,
    "AT-DDLK-1": Tool.FDR,
    "AT-DDLK-2": Tool.ISABELLE,
    "AT-DIV": Tool.FDR,
    "AT-TERM": Tool.FDR,
    "AT-PROB": Tool.PRISM,
    "AT-RWD": Tool.PRISM,
    "AT-TEMP": Tool.PRISM,
}

# Requirement template -> assertion templates, for the audit dump.
CATALOG_ROWS = (
    ("RT-UNTIMED", "AT-UTG"),
    ("RT-UNTIMED", "AT-UTL"),
    ("RT-TIMED", "AT-DLINE"),
    ("RT-REACH", "AT-REACH"),
    ("RT-DDLK", "AT-DDLK-1"),
    ("RT-DDLK", "AT-DDLK-2"),
    ("RT-DIV", "AT-DIV"),
    ("RT-TERM", "AT-TERM"),
    ("RT-PROB", "AT-PROB"),
    ("RT-RWD", "AT-RWD"),
    ("RT-TEMP", "AT-TEMP"),
)

_GENERAL_KINDS = {
    Kind.REACH: REACH_FUNCTIONS,
    Kind.DEADLOCK_FDR: DEADLOCK_FDR_FUNCTIONS,
    Kind.DEADLOCK_ISA: DEADLOCK_ISA_FUNCTIONS,
    Kind.DIVERGENCE: DIVERGENCE_FUNCTIONS,
    Kind.TERMINATION: TERMINATION_FUNCTIONS,
}


def _time_label(function: str) -> TimeLabel:
    if function.endswith("_untimed"):
        return TimeLabel.UNTIMED
    if function.endswith("_timed"):
        return TimeLabel.TIMED
    return TimeLabel.BOTH


def classify(r: StructuredRequirement) -> RequirementKind:
    """Assign the requirement to exactly one kind; Unclassifiable if no rule matches."""
    if r.base_template is BaseTemplate.WHEN:
        prefix = r.required_condition.prefix
        if prefix == "prob_target_":
            return RequirementKind(Kind.PROB)
        if prefix == "reward_target_":
            return RequirementKind(Kind.REWARD)
        if prefix == "term_":
            return RequirementKind(Kind.TEMPORAL)
        guards = len(r.guard_conditions)
        if guards == 1:
            return RequirementKind(Kind.UNTIMED, locality=Locality.GLOBAL)
        if guards == 2:
            return RequirementKind(Kind.UNTIMED, locality=Locality.LOCAL)
        raise Unclassifiable(f"{r.id}: untimed requirement with {guards} guard events")

    if r.base_template is BaseTemplate.TRIGGER_ON_EVENT:
        return RequirementKind(Kind.TIMED)

    # every template: kind from the condition function token
    try:
        function, _ = parse_condition_call(r.required_condition.body)
    except MalformedEvent as exc:
        raise Unclassifiable(f"{r.id}: {exc}") from None
    for kind, functions in _GENERAL_KINDS.items():
        if function in functions:
            label = TimeLabel.BOTH if kind is Kind.DEADLOCK_ISA else _time_label(function)
            return RequirementKind(kind, time_label=label)
    raise Unclassifiable(f"{r.id}: unknown condition function {function!r}")


_KIND_TEMPLATES = {
    (Kind.UNTIMED, Locality.GLOBAL): "AT-UTG",
    (Kind.UNTIMED, Locality.LOCAL): "AT-UTL",
    (Kind.TIMED, None): "AT-DLINE",
    (Kind.REACH, None): "AT-REACH",
    (Kind.DEADLOCK_FDR, None): "AT-DDLK-1",
    (Kind.DEADLOCK_ISA, None): "AT-DDLK-2",
    (Kind.DIVERGENCE, None): "AT-DIV",
    (Kind.TERMINATION, None): "AT-TERM",
    (Kind.PROB, None): "AT-PROB",
    (Kind.REWARD, None): "AT-RWD",
    (Kind.TEMPORAL, None): "AT-TEMP",
}


def targets_for(k: RequirementKind) -> list[AtTarget]:
    """Assertion-template targets for a kind; always exactly one element."""
    key = (k.kind, k.locality if k.kind is Kind.UNTIMED else None)
    template_id = _KIND_TEMPLATES[key]
    return [AtTarget(template_id=template_id, tool=TEMPLATE_TOOLS[template_id])]


def catalog_table() -> str:
    """Read-only textual dump of the requirement-template -> assertion-template -> tool map."""
    lines = [f"{'Requirement template':<22}{'Assertion template':<20}{'Tool':<8}"]
    lines.append("-" * 50)
    for rt, at in CATALOG_ROWS:
        lines.append(f"{rt:<22}{at:<20}{TEMPLATE_TOOLS[at].value:<8}")
    return "\n".join(lines)
