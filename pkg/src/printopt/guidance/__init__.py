from .catalog import CATALOG, CatalogEntry, catalog_text
from .prompt import GuidanceRequest, build_request, diagnostics_text, system_text
from .providers import (
    GuidanceAttempt,
    NullProvider,
    RemoteProvider,
    RETRY_LIMIT,
    ScriptedProvider,
    request_guidance,
)
from .schema import (
    CorrectiveAction,
    GuidanceResponse,
    ISSUE_NAMES,
    parse_response,
    validate_action,
    validate_response,
)
from .scripted import RULES, ScriptedExpert, issue_severity, worst_issue

__all__ = [
    "CATALOG",
    "CatalogEntry",
    "catalog_text",
    "GuidanceRequest",
    "build_request",
    "diagnostics_text",
    "system_text",
    "GuidanceAttempt",
    "NullProvider",
    "RemoteProvider",
    "RETRY_LIMIT",
    "ScriptedProvider",
    "request_guidance",
    "CorrectiveAction",
    "GuidanceResponse",
    "ISSUE_NAMES",
    "parse_response",
    "validate_action",
    "validate_response",
    "RULES",
    "ScriptedExpert",
    "issue_severity",
    "worst_issue",
]
