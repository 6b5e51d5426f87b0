"""Structured-requirement model: clause grammar, XML document parser, validator.

A requirement document is the XML export of a requirements-management tool.
Each ``<requirement>`` instantiates one of three base templates (``when``,
``trigger_on_event``, ``every``) and carries two traceability links: backwards
to the software-requirement claim and forwards to the verification-method
claim its evidence will support.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum

from .errors import MalformedEvent, SchemaViolation, UnknownPrefix, XmlSyntax
from .events import parse_fq_event

# Reserved clause prefixes. A clause is either plain (empty prefix) or carries
# exactly one of these; anything else is an authoring defect.
RESERVED_PREFIXES = (
    "prob_target_",
    "reward_target_",
    "reward_event_",
    "reward_value_",
    "pathFormula_",
    "term_",
    "constant_",
    "multi_constant_",
    "required_event_",
)

_QUALIFIED_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(::[A-Za-z_][A-Za-z0-9_]*)*\Z")
_FUNCTION_CALL_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\Z")
_OP_RE = re.compile(r"(>=|<=|==|>|<)[_\s]*(.*)\Z")
_SET_TO_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s+set\s+to\s+(.+)\Z")
_ASSIGN_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)\Z")
_FROM_SET_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s+from(?:\s+set)?\s+(.+)\Z")


class BaseTemplate(Enum):
    WHEN = "when"
    TRIGGER_ON_EVENT = "trigger_on_event"
    EVERY = "every"


class Mode(Enum):
    ALWAYS = "always"
    NEVER = "never"


@dataclass(frozen=True)
class Clause:
    prefix: str = ""
    body: str = ""


@dataclass(frozen=True)
class Duration:
    amount: int
    unit: str = "rounds"


@dataclass(frozen=True)
class TraceLinks:
    backwards: str
    forwards: str


class BindingKind(Enum):
    SINGLE = "single"
    RANGE_SET = "range_set"


@dataclass(frozen=True)
class ConstantConfig:
    """One model-constant binding: a single value or a set of values."""

    name: str
    kind: BindingKind
    expr: str

    def render(self) -> str:
        if self.kind is BindingKind.SINGLE:
            return f"{self.name} set to {self.expr}"
        return f"{self.name} from set {self.expr}"


@dataclass(frozen=True)
class StructuredRequirement:
    id: str
    base_template: BaseTemplate
    trace: TraceLinks
    guard_conditions: tuple[Clause, ...] = ()
    until_conditions: tuple[Clause, ...] = ()
    required_condition: Clause = field(default_factory=Clause)
    trigger_condition: Clause | None = None
    duration: Duration | None = None
    always_or_never: Mode | None = None


@dataclass(frozen=True)
class Diagnostic:
    requirement_id: str
    severity: str  # "error" | "warning"
    message: str


def normalize_ws(text: str) -> str:
    return " ".join(text.split())


def split_prefixed(text: str) -> tuple[str, str]:
    """Split a raw prefixed token into (reserved prefix, remainder).

    Longest reserved prefix wins; unprefixed text comes back unchanged with
    an empty prefix.
    """
    for prefix in sorted(RESERVED_PREFIXES, key=len, reverse=True):
        if text.startswith(prefix):
            return prefix, text[len(prefix):]
    return "", text


def parse_op_expr(body: str) -> tuple[str, str]:
    """Split a comparison body like ``< 0.5`` or ``<_0.5`` into (op, expr)."""
    m = _OP_RE.match(body.strip())
    if not m or not m.group(2).strip():
        raise MalformedEvent(f"expected '<op> <expr>', got {body!r}")
    return m.group(1), m.group(2).strip()


def parse_constant_clause(clause: Clause) -> ConstantConfig:
    """Build a ConstantConfig from a constant_/multi_constant_ clause body."""
    body = normalize_ws(clause.body)
    if clause.prefix == "constant_":
        m = _SET_TO_RE.match(body) or _ASSIGN_RE.match(body)
        if not m:
            raise MalformedEvent(f"bad constant binding {clause.body!r}")
        return ConstantConfig(m.group(1), BindingKind.SINGLE, m.group(2).strip())
    if clause.prefix == "multi_constant_":
        m = _FROM_SET_RE.match(body) or _ASSIGN_RE.match(body)
        if not m:
            raise MalformedEvent(f"bad multi-constant binding {clause.body!r}")
        return ConstantConfig(m.group(1), BindingKind.RANGE_SET, m.group(2).strip())
    raise MalformedEvent(f"clause prefix {clause.prefix!r} is not a constant binding")


def constants_of(r: StructuredRequirement) -> list[ConstantConfig]:
    """Collect the constant bindings recorded in the guard section."""
    return [
        parse_constant_clause(c)
        for c in r.guard_conditions
        if c.prefix in ("constant_", "multi_constant_")
    ]


# --------------------------------------------------------------------------
# XML document parsing
# --------------------------------------------------------------------------

_TEMPLATE_SECTIONS = {
    BaseTemplate.WHEN: {"trace", "guard", "until", "required"},
    BaseTemplate.TRIGGER_ON_EVENT: {"trace", "trigger", "duration", "required"},
    BaseTemplate.EVERY: {"trace", "condition", "mode"},
}


def _element_text(el: ET.Element) -> str:
    return normalize_ws("".join(el.itertext()))


def _clause_from(el: ET.Element, req_id: str) -> Clause:
    body = _element_text(el)
    prefix = el.get("prefix")
    if prefix is None:
        # Exports that embed the data-dictionary name carry the prefix inside
        # the body; peel it off.
        prefix, body = split_prefixed(body)
    elif prefix != "" and prefix not in RESERVED_PREFIXES:
        raise UnknownPrefix(f"{req_id}: clause prefix {prefix!r} is not reserved")
    return Clause(prefix=prefix, body=body.strip())


def _parse_duration(el: ET.Element, req_id: str) -> Duration:
    amount_raw = el.get("amount", "")
    unit = el.get("unit", "")
    try:
        amount = int(amount_raw)
    except ValueError:
        raise SchemaViolation(f"{req_id}: duration amount {amount_raw!r} is not an integer") from None
    if amount < 0:
        raise SchemaViolation(f"{req_id}: duration amount must be nonnegative")
    if unit != "rounds":
        raise SchemaViolation(f"{req_id}: duration unit must be 'rounds', got {unit!r}")
    return Duration(amount=amount, unit=unit)


def _parse_requirement(el: ET.Element) -> StructuredRequirement:
    req_id = el.get("id", "").strip()
    if not req_id:
        raise SchemaViolation("requirement without an id attribute")

    template_raw = el.get("template", "")
    try:
        template = BaseTemplate(template_raw)
    except ValueError:
        raise SchemaViolation(f"{req_id}: unknown template {template_raw!r}") from None

    allowed = _TEMPLATE_SECTIONS[template]
    guards: list[Clause] = []
    untils: list[Clause] = []
    required: Clause | None = None
    trigger: Clause | None = None
    duration: Duration | None = None
    mode: Mode | None = None
    trace: TraceLinks | None = None

    for child in el:
        tag = child.tag
        if tag not in allowed:
            raise SchemaViolation(f"{req_id}: section <{tag}> not allowed in {template.value} template")
        if tag == "trace":
            if trace is not None:
                raise SchemaViolation(f"{req_id}: duplicate <trace>")
            backwards = child.get("backwards", "").strip()
            if not backwards:
                raise SchemaViolation(f"{req_id}: trace requires a nonempty backwards link")
            trace = TraceLinks(backwards=backwards, forwards=child.get("forwards", "").strip())
        elif tag == "guard":
            guards.append(_clause_from(child, req_id))
        elif tag == "until":
            untils.append(_clause_from(child, req_id))
        elif tag == "required":
            if required is not None:
                raise SchemaViolation(f"{req_id}: duplicate <required>")
            required = _clause_from(child, req_id)
        elif tag == "trigger":
            if trigger is not None:
                raise SchemaViolation(f"{req_id}: duplicate <trigger>")
            trigger = Clause(prefix="", body=_element_text(child))
        elif tag == "duration":
            if duration is not None:
                raise SchemaViolation(f"{req_id}: duplicate <duration>")
            duration = _parse_duration(child, req_id)
        elif tag == "condition":
            if required is not None:
                raise SchemaViolation(f"{req_id}: duplicate <condition>")
            required = Clause(prefix="", body=_element_text(child))
        elif tag == "mode":
            if mode is not None:
                raise SchemaViolation(f"{req_id}: duplicate <mode>")
            mode_raw = _element_text(child)
            try:
                mode = Mode(mode_raw)
            except ValueError:
                raise SchemaViolation(f"{req_id}: mode must be always|never, got {mode_raw!r}") from None

    if trace is None:
        raise SchemaViolation(f"{req_id}: missing <trace>")
    if required is None:
        section = "condition" if template is BaseTemplate.EVERY else "required"
        raise SchemaViolation(f"{req_id}: missing <{section}> for {template.value} template")
    if template is BaseTemplate.TRIGGER_ON_EVENT:
        if trigger is None or duration is None:
            raise SchemaViolation(f"{req_id}: trigger_on_event requires <trigger> and <duration>")
    if template is BaseTemplate.EVERY and mode is None:
        raise SchemaViolation(f"{req_id}: every template requires <mode>")

    return StructuredRequirement(
        id=req_id,
        base_template=template,
        trace=trace,
        guard_conditions=tuple(guards),
        until_conditions=tuple(untils),
        required_condition=required,
        trigger_condition=trigger,
        duration=duration,
        always_or_never=mode,
    )


def parse_requirements_doc(data: bytes) -> list[StructuredRequirement]:
    """Parse a requirement document into StructuredRequirements, in document order.

    Raises XmlSyntax for ill-formed XML, SchemaViolation for structural
    defects, UnknownPrefix for unreserved clause prefixes.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise XmlSyntax(f"not well-formed XML: {exc}") from None
    except ValueError as exc:  # e.g. str input with an encoding declaration
        raise XmlSyntax(str(exc)) from None
    if root.tag != "requirements":
        raise SchemaViolation(f"root element must be <requirements>, got <{root.tag}>")
    reqs = []
    for child in root:
        if child.tag != "requirement":
            raise SchemaViolation(f"unexpected element <{child.tag}> under <requirements>")
        reqs.append(_parse_requirement(child))
    return reqs


def load_requirements(path) -> list[StructuredRequirement]:
    with open(path, "rb") as fh:
        return parse_requirements_doc(fh.read())


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

REACH_FUNCTIONS = ("reachable", "reachable_untimed", "reachable_timed")
DEADLOCK_FDR_FUNCTIONS = ("deadlock_free", "deadlock_free_untimed", "deadlock_free_timed")
DEADLOCK_ISA_FUNCTIONS = ("deadlock_free_isa",)
DIVERGENCE_FUNCTIONS = ("divergence_free", "divergence_free_untimed", "divergence_free_timed")
TERMINATION_FUNCTIONS = ("terminate", "terminate_untimed", "terminate_timed")

KNOWN_FUNCTIONS = (
    REACH_FUNCTIONS
    + DEADLOCK_FDR_FUNCTIONS
    + DEADLOCK_ISA_FUNCTIONS
    + DIVERGENCE_FUNCTIONS
    + TERMINATION_FUNCTIONS
)

_BRACKETS = {"(": ")", "[": "]", "{": "}"}


def _brackets_balanced(text: str) -> bool:
    stack: list[str] = []
    for ch in text:
        if ch in _BRACKETS:
            stack.append(_BRACKETS[ch])
        elif ch in _BRACKETS.values():
            if not stack or stack.pop() != ch:
                return False
    return not stack


def parse_condition_call(body: str) -> tuple[str, list[str]]:
    """Split an every-condition body ``function(scope[, state])`` into parts."""
    m = _FUNCTION_CALL_RE.match(normalize_ws(body))
    if not m:
        raise MalformedEvent(f"condition {body!r} is not of the form function(...)")
    args = [a.strip() for a in m.group(2).split(",")] if m.group(2).strip() else []
    return m.group(1), args


def _check_event_clause(r, clause, label, out):
    try:
        parse_fq_event(clause.body)
    except MalformedEvent as exc:
        out.append(Diagnostic(r.id, "error", f"{label}: {exc}"))


def _check_constants(r, out):
    for clause in r.guard_conditions:
        if clause.prefix in ("constant_", "multi_constant_"):
            try:
                parse_constant_clause(clause)
            except MalformedEvent as exc:
                out.append(Diagnostic(r.id, "error", str(exc)))


def _path_formula_clauses(r):
    return [c for c in r.until_conditions if c.prefix == "pathFormula_"]


def _check_path_formula(r, out):
    formulas = _path_formula_clauses(r)
    if not formulas:
        out.append(Diagnostic(r.id, "error", "missing pathFormula_ clause in until section"))
        return
    if len(formulas) > 1:
        out.append(Diagnostic(r.id, "error", "more than one pathFormula_ clause"))
    for c in formulas:
        if not _brackets_balanced(c.body):
            out.append(Diagnostic(r.id, "error", f"unbalanced brackets in path formula {c.body!r}"))


def _check_guard_prefixes(r, allowed, out):
    for clause in r.guard_conditions:
        if clause.prefix not in allowed:
            out.append(
                Diagnostic(r.id, "error", f"guard prefix {clause.prefix!r} not usable here")
            )


def _validate_when(r: StructuredRequirement, out: list[Diagnostic]) -> None:
    prefix = r.required_condition.prefix
    if prefix == "prob_target_":
        _check_guard_prefixes(r, ("constant_", "multi_constant_"), out)
        _check_constants(r, out)
        _check_path_formula(r, out)
        try:
            parse_op_expr(r.required_condition.body)
        except MalformedEvent as exc:
            out.append(Diagnostic(r.id, "error", f"probability target: {exc}"))
    elif prefix == "reward_target_":
        _check_guard_prefixes(
            r, ("constant_", "multi_constant_", "reward_event_", "reward_value_"), out
        )
        _check_constants(r, out)
        _check_path_formula(r, out)
        events = [c for c in r.guard_conditions if c.prefix == "reward_event_"]
        values = [c for c in r.guard_conditions if c.prefix == "reward_value_"]
        if not events:
            out.append(Diagnostic(r.id, "error", "reward requirement lacks a reward_event_ clause"))
        else:
            _check_event_clause(r, events[0], "reward event", out)
        if not values:
            out.append(Diagnostic(r.id, "error", "reward requirement lacks a reward_value_ clause"))
        try:
            parse_op_expr(r.required_condition.body)
        except MalformedEvent as exc:
            out.append(Diagnostic(r.id, "error", f"reward target: {exc}"))
    elif prefix == "term_":
        _check_guard_prefixes(r, ("constant_", "multi_constant_"), out)
        _check_constants(r, out)
        _check_path_formula(r, out)
        if parse_term_op(r.required_condition.body) is None:
            out.append(
                Diagnostic(
                    r.id, "error",
                    f"term operator must be [not] forall|exists, got {r.required_condition.body!r}",
                )
            )
    elif prefix in ("", "required_event_"):
        _check_guard_prefixes(r, ("",), out)
        n = len(r.guard_conditions)
        if n not in (1, 2):
            out.append(
                Diagnostic(r.id, "error", f"untimed requirement needs 1 or 2 guard events, has {n}")
            )
        for clause in r.guard_conditions:
            if clause.prefix == "":
                _check_event_clause(r, clause, "guard event", out)
        _check_event_clause(r, r.required_condition, "required event", out)
        if r.until_conditions:
            out.append(Diagnostic(r.id, "error", "untimed requirement may not have an until section"))
    else:
        out.append(Diagnostic(r.id, "error", f"required prefix {prefix!r} fits no template"))


def parse_term_op(body: str) -> tuple[str, bool] | None:
    """Decode a term_ body into (operator, negated); case-insensitive. None if invalid."""
    words = normalize_ws(body).lower().split()
    negated = False
    if words and words[0] == "not":
        negated = True
        words = words[1:]
    if len(words) == 1 and words[0] in ("forall", "exists"):
        return words[0], negated
    return None


def _validate_every(r: StructuredRequirement, out: list[Diagnostic]) -> None:
    if r.always_or_never is None:
        out.append(Diagnostic(r.id, "error", "every requirement lacks a mode"))
    if r.required_condition.prefix:
        out.append(Diagnostic(r.id, "error", "every condition must be a plain clause"))
    try:
        function, args = parse_condition_call(r.required_condition.body)
    except MalformedEvent as exc:
        out.append(Diagnostic(r.id, "error", str(exc)))
        return
    if function not in KNOWN_FUNCTIONS:
        out.append(Diagnostic(r.id, "error", f"unknown condition function {function!r}"))
        return
    expected = 2 if function in REACH_FUNCTIONS else 1
    if len(args) != expected:
        out.append(
            Diagnostic(r.id, "error", f"{function} expects {expected} argument(s), got {len(args)}")
        )
        return
    for arg in args:
        if not _QUALIFIED_RE.match(arg):
            out.append(Diagnostic(r.id, "error", f"bad component identifier {arg!r}"))


def validate_requirement(r: StructuredRequirement) -> list[Diagnostic]:
    """Check type invariants and template realizability; empty list means valid."""
    out: list[Diagnostic] = []
    if not r.trace.backwards:
        out.append(Diagnostic(r.id, "error", "backwards trace link is empty"))
    if not r.trace.forwards:
        out.append(Diagnostic(r.id, "error", "forwards trace link is empty"))

    if r.base_template is BaseTemplate.WHEN:
        if r.trigger_condition is not None or r.duration is not None:
            out.append(Diagnostic(r.id, "error", "when requirement may not carry trigger/duration"))
        _validate_when(r, out)
    elif r.base_template is BaseTemplate.TRIGGER_ON_EVENT:
        if r.trigger_condition is None or r.duration is None:
            out.append(Diagnostic(r.id, "error", "timed requirement needs trigger and duration"))
        else:
            _check_event_clause(r, r.trigger_condition, "trigger event", out)
        _check_event_clause(r, r.required_condition, "target event", out)
        if r.guard_conditions or r.until_conditions:
            out.append(Diagnostic(r.id, "error", "timed requirement may not have guard/until sections"))
    elif r.base_template is BaseTemplate.EVERY:
        _validate_every(r, out)
    return out
