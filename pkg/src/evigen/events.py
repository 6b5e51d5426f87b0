"""Fully-qualified RoboChart event references.

An event is addressed as ``scope::…::name`` with an optional ``.in``/``.out``
direction and an optional payload, written ``.value`` for a literal or
``?variable`` for a binder. Parsing and rendering round-trip exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import MalformedEvent

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
# Payload literals are opaque tokens (enumeration values, numerics) over the
# same ASCII charset, but may start with a digit, e.g. `.0`.
LITERAL_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class Direction(Enum):
    NONE = "none"
    IN = "in"
    OUT = "out"


class PayloadKind(Enum):
    NONE = "none"
    LITERAL = "literal"
    BINDER = "binder"


@dataclass(frozen=True)
class Payload:
    kind: PayloadKind = PayloadKind.NONE
    value: str = ""

    @staticmethod
    def none() -> "Payload":
        return Payload(PayloadKind.NONE, "")

    @staticmethod
    def literal(value: str) -> "Payload":
        return Payload(PayloadKind.LITERAL, value)

    @staticmethod
    def binder(variable: str) -> "Payload":
        return Payload(PayloadKind.BINDER, variable)


@dataclass(frozen=True)
class FqEvent:
    """One event reference: scope path, name, direction, payload."""

    scope_path: tuple[str, ...] = ()
    event_name: str = ""
    direction: Direction = Direction.NONE
    payload: Payload = field(default_factory=Payload.none)

    def __post_init__(self) -> None:
        if not IDENT_RE.match(self.event_name):
            raise MalformedEvent(f"event name {self.event_name!r} is not an identifier")
        for seg in self.scope_path:
            if not IDENT_RE.match(seg):
                raise MalformedEvent(f"scope segment {seg!r} is not an identifier")
        if self.payload.kind is PayloadKind.LITERAL:
            if not LITERAL_RE.match(self.payload.value):
                raise MalformedEvent(f"payload literal {self.payload.value!r} is not a token")
            if self.payload.value in ("in", "out"):
                # would re-parse as a direction token
                raise MalformedEvent("payload literal may not be 'in' or 'out'")
        if self.payload.kind is PayloadKind.BINDER and not IDENT_RE.match(self.payload.value):
            raise MalformedEvent(f"binder variable {self.payload.value!r} is not an identifier")


def render_fq_event(e: FqEvent) -> str:
    """Emit the canonical ``scope::…::name[.in|.out][.value|?var]`` form."""
    out = "::".join((*e.scope_path, e.event_name))
    if e.direction is not Direction.NONE:
        out += f".{e.direction.value}"
    if e.payload.kind is PayloadKind.LITERAL:
        out += f".{e.payload.value}"
    elif e.payload.kind is PayloadKind.BINDER:
        out += f"?{e.payload.value}"
    return out


def parse_fq_event(text: str) -> FqEvent:
    """Parse an fq_event string; raises MalformedEvent on any grammar violation."""
    if not isinstance(text, str):
        raise MalformedEvent("event reference must be a string")
    trimmed = text.strip()
    if not trimmed:
        raise MalformedEvent("empty event reference")

    segments = [seg.strip() for seg in trimmed.split("::")]
    *scope, last = segments
    for seg in scope:
        if not IDENT_RE.match(seg):
            raise MalformedEvent(f"bad scope segment {seg!r} in {text!r}")

    # The final segment carries name, direction and payload. A binder is
    # introduced by '?'; everything else is dot-separated.
    binder = None
    if "?" in last:
        last, _, binder = last.partition("?")
    parts = last.split(".")
    name = parts[0]
    if not IDENT_RE.match(name):
        raise MalformedEvent(f"bad event name {name!r} in {text!r}")

    direction = Direction.NONE
    rest = parts[1:]
    if rest and rest[0] in ("in", "out"):
        direction = Direction(rest[0])
        rest = rest[1:]
    if rest and rest[0] in ("in", "out"):
        raise MalformedEvent(f"conflicting directions in {text!r}")

    payload = Payload.none()
    if binder is not None:
        if rest:
            raise MalformedEvent(f"both literal and binder payloads in {text!r}")
        if not IDENT_RE.match(binder):
            raise MalformedEvent(f"bad binder variable {binder!r} in {text!r}")
        payload = Payload.binder(binder)
    elif rest:
        if len(rest) > 1:
            raise MalformedEvent(f"trailing payload parts in {text!r}")
        if not LITERAL_RE.match(rest[0]):
            raise MalformedEvent(f"bad payload literal {rest[0]!r} in {text!r}")
        payload = Payload.literal(rest[0])

    return FqEvent(tuple(scope), name, direction, payload)
