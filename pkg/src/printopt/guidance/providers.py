"""Guidance sources and the retry loop that talks to them.

Every provider exposes ``propose(request) -> str | None``: the raw reply
text, or None to decline. ``request_guidance`` owns parsing, validation,
and the retry budget; a provider that keeps replying garbage degrades to
the no-guidance sentinel instead of failing the optimization run.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

import httpx

from ..errors import TransportError
from .prompt import GuidanceRequest
from .schema import GuidanceResponse, parse_response
from .scripted import ScriptedExpert

RETRY_LIMIT = 2

_CORRECTION = (
    "\n\nYour previous reply could not be used: {error}\n"
    "Reply again with exactly one JSON object matching the required schema,"
    " with no surrounding prose."
)


class NullProvider:
    """Always declines; optimization proceeds unguided."""

    def propose(self, request: GuidanceRequest) -> str | None:
        return None


class ScriptedProvider:
    """Serves rule-table replies through the normal wire format."""

    def __init__(self) -> None:
        self._expert = ScriptedExpert()

    def propose(self, request: GuidanceRequest) -> str | None:
        if request.report is None:
            return None
        return self._expert.reply_text(request.report, request.budget)


class RemoteProvider:
    """Chat-completion endpoint speaking the common HTTP wire format.

    The API key is read from the environment at request time, never
    stored. A custom ``transport`` lets tests swap in canned responses.
    """

    def __init__(
        self,
        model: str,
        base_url: str = "https://api.openai.com/v1",
        api_key_env: str = "PRINTOPT_API_KEY",
        timeout: float = 120.0,
        transport: httpx.BaseTransport | None = None,
    ) -> None:
        self.model = model
        self.base_url = base_url
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.transport = transport

    def propose(self, request: GuidanceRequest) -> str | None:
        headers = {}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        body = {
            "model": self.model,
            "temperature": 0.0,
            "messages": [
                {"role": "system", "content": request.system_text},
                {"role": "user", "content": request.user_text},
            ],
        }
        try:
            with httpx.Client(
                base_url=self.base_url,
                timeout=self.timeout,
                transport=self.transport,
            ) as client:
                resp = client.post("/chat/completions", json=body, headers=headers)
        except httpx.HTTPError as exc:
            raise TransportError(f"guidance request failed: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(
                f"guidance endpoint returned {resp.status_code}: {resp.text[:200]}"
            )
        try:
            data = resp.json()
            return data["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed completion payload: {exc}") from exc


@dataclass(frozen=True)
class GuidanceAttempt:
    """One provider round-trip, kept for the run's audit trail."""

    reply: str | None
    error: str | None


def request_guidance(
    provider,
    request: GuidanceRequest,
    retries: int = RETRY_LIMIT,
) -> tuple[GuidanceResponse | None, list[GuidanceAttempt]]:
    """Ask, re-ask with the validation error appended, then give up.

    A zero budget means guidance is off for this round: no request is
    made at all. Returns the validated response (or None) plus the
    attempt log.
    """
    attempts: list[GuidanceAttempt] = []
    if provider is None or request.budget <= 0:
        return None, attempts
    user_text = request.user_text
    for _ in range(retries + 1):
        try:
            text = provider.propose(replace(request, user_text=user_text))
        except TransportError as exc:
            attempts.append(GuidanceAttempt(reply=None, error=str(exc)))
            continue
        if text is None:
            attempts.append(GuidanceAttempt(reply=None, error=None))
            return None, attempts
        try:
            response = parse_response(text, request.budget)
        except ValueError as exc:
            attempts.append(GuidanceAttempt(reply=text, error=str(exc)))
            user_text = request.user_text + _CORRECTION.format(error=exc)
            continue
        attempts.append(GuidanceAttempt(reply=text, error=None))
        return response, attempts
    return None, attempts
