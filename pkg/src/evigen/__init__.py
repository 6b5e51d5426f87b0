"""evigen: formal-verification assertion generation and assurance-case evidence integration.

The pipeline turns structured requirement documents into tool-ready
assertions (CSP refinement blocks for FDR, probabilistic properties for
PRISM, lemma skeletons for Isabelle), parses the resulting verification
reports, and rewires the assurance case so every verification-method claim
is supported by a traceable evidence artifact.
"""

from .acmodel import (
    AssuranceCase,
    Claim,
    ClaimKind,
    EvidenceArtifact,
    Link,
    LinkKind,
    export_gsn_dot,
    find_link_by_target,
    load,
    save,
    validate_structure,
)
from .catalog import AtTarget, Kind, Locality, RequirementKind, TimeLabel, Tool, classify, targets_for
from .errors import EvigenError
from .events import Direction, FqEvent, Payload, PayloadKind, parse_fq_event, render_fq_event
from .generate import AssertionArtifact, Notation, generate_all, write_artifacts
from .integrate import gen_evidence, integrate, process_report, resolve_trace
from .reports import (
    VerificationReport,
    aggregate,
    parse_fdr_report,
    parse_isabelle_log,
    parse_prism_report,
    parse_report,
    parse_report_title,
)
from .requirements import (
    Clause,
    ConstantConfig,
    StructuredRequirement,
    TraceLinks,
    parse_requirements_doc,
    validate_requirement,
)

__version__ = "0.1.0"
