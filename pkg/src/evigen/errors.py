"""Exception hierarchy. Every declared failure mode of the pipeline is one class here."""


class EvigenError(Exception):
    """Base class for all evigen failures."""


# --- requirement model ------------------------------------------------------

class MalformedEvent(EvigenError):
    """A fully-qualified event string violates the fq_event grammar."""


class XmlSyntax(EvigenError):
    """Requirement document is not well-formed XML."""


class SchemaViolation(EvigenError):
    """Requirement document is well-formed XML but breaks the document schema."""


class UnknownPrefix(EvigenError):
    """A clause carries a prefix outside the reserved set."""


# --- catalog / generation ---------------------------------------------------

class Unclassifiable(EvigenError):
    """No requirement-template rule matches; catalog and requirement disagree."""


class MissingField(EvigenError):
    """An assertion-template placeholder has no source clause."""


# --- report parsing ---------------------------------------------------------

class TitleUnrecognized(EvigenError):
    """Report title does not follow the '<req>.assertions using <tool>' pattern."""


class HtmlStructure(EvigenError):
    """Report HTML lacks the expected table/title structure."""


class ResultUnparsable(EvigenError):
    """A result cell is outside the true/false/passed/failed vocabulary."""


class TableCount(EvigenError):
    """Report has the wrong number of tables for its tool."""


class LogUnrecognized(EvigenError):
    """Proof log lacks a lemma name or terminal status line."""


# --- assurance case ---------------------------------------------------------

class JsonSyntax(EvigenError):
    """Assurance-case document is not valid JSON."""


class RefIntegrity(EvigenError):
    """A link endpoint does not resolve to an existing id."""


class DuplicateLink(EvigenError):
    """More than one asserted-evidence link targets the same claim."""


# --- integration ------------------------------------------------------------

class TraceMiss(EvigenError):
    """No requirement's backwards trace matches the report's requirement id."""


class NoLink(EvigenError):
    """The assurance case has no asserted-evidence link for the claim."""
