"""Uniform chat-completion interface over HTTP providers and the mock.

Two wire formats are supported: OpenAI-compatible (``POST
{base_url}/chat/completions``) and Ollama-compatible (``POST
{base_url}/api/chat``), both driven with JSON-constrained output when the
provider config asks for it. Transport failures never raise; they come
back as exchanges with ``decode_status="transport_failed"`` and a reason
code so callers can apply their own resilience policy.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any, Optional

import httpx

from ..prompting import RenderedPrompt
from ..types import TokenUsage

if TYPE_CHECKING:
    from .mock import MockScript

PROVIDER_KINDS = ("openai_compatible", "ollama_compatible", "mock")

# Providers that omit usage get this proxy: any monotone token estimate
# supports the cross-workflow consumption comparison.
def approx_tokens(text: str) -> int:
    return len(text.split())


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "mock"
    base_url: str = ""
    model: str = "mock"
    api_key: Optional[str] = None
    timeout: float = 30.0
    json_mode: bool = True

    def __post_init__(self) -> None:
        if self.kind not in PROVIDER_KINDS:
            raise ValueError(f"unknown provider kind {self.kind!r}")
        if self.kind != "mock" and not self.base_url:
            raise ValueError(f"{self.kind} provider requires a base_url")


@dataclass(frozen=True)
class LlmExchange:
    """One prompt/response round trip."""

    prompt: RenderedPrompt
    raw_text: str = ""
    usage: TokenUsage = field(default_factory=TokenUsage)
    decode_status: str = "ok"   # ok | decode_failed | transport_failed
    reason: str = ""            # failure reason code when not ok
    latency: float = 0.0


def load_provider_config(path: str) -> ProviderConfig:
    """Read provider settings from a JSON file.

    The API key never lives in the file; ``api_key_env`` names the
    environment variable to read it from.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    api_key = None
    key_env = raw.pop("api_key_env", None)
    if key_env:
        api_key = os.environ.get(key_env)
    return ProviderConfig(
        kind=raw.get("kind", "mock"),
        base_url=raw.get("base_url", ""),
        model=raw.get("model", "mock"),
        api_key=api_key,
        timeout=float(raw.get("timeout", 30.0)),
        json_mode=bool(raw.get("json_mode", True)),
    )


def _openai_request(config: ProviderConfig, text: str) -> tuple[str, dict[str, Any], dict[str, str]]:
    url = config.base_url.rstrip("/") + "/chat/completions"
    body: dict[str, Any] = {
        "model": config.model,
        "messages": [{"role": "user", "content": text}],
    }
    if config.json_mode:
        body["response_format"] = {"type": "json_object"}
    headers = {}
    if config.api_key:
        headers["Authorization"] = f"Bearer {config.api_key}"
    return url, body, headers


def _ollama_request(config: ProviderConfig, text: str) -> tuple[str, dict[str, Any], dict[str, str]]:
    url = config.base_url.rstrip("/") + "/api/chat"
    body: dict[str, Any] = {
        "model": config.model,
        "messages": [{"role": "user", "content": text}],
        "stream": False,
    }
    if config.json_mode:
        body["format"] = "json"
    return url, body, {}


def _parse_openai(data: dict[str, Any], prompt_text: str) -> tuple[str, TokenUsage]:
    content = data["choices"][0]["message"]["content"]
    usage = data.get("usage") or {}
    return content, TokenUsage(
        prompt_tokens=int(usage.get("prompt_tokens", approx_tokens(prompt_text))),
        completion_tokens=int(usage.get("completion_tokens", approx_tokens(content))),
    )


def _parse_ollama(data: dict[str, Any], prompt_text: str) -> tuple[str, TokenUsage]:
    content = data["message"]["content"]
    return content, TokenUsage(
        prompt_tokens=int(data.get("prompt_eval_count", approx_tokens(prompt_text))),
        completion_tokens=int(data.get("eval_count", approx_tokens(content))),
    )


class LlmClient:
    """A provider plus the transport it talks through.

    Stateless per call and safe for concurrent use. For the mock kind a
    :class:`~beaconql.llm.mock.MockScript` supplies responses; for HTTP
    kinds an ``httpx.Client`` can be injected (tests route it at an ASGI
    app), otherwise a one-shot client is created per call.
    """

    def __init__(self, config: ProviderConfig, *,
                 script: "MockScript | None" = None,
                 http: Optional[httpx.Client] = None) -> None:
        if config.kind == "mock" and script is None:
            raise ValueError("mock provider requires a script")
        self.config = config
        self._script = script
        self._http = http

    def complete(self, prompt: RenderedPrompt) -> LlmExchange:
        """Run one chat completion; failures come back as data, never raise."""
        started = time.monotonic()
        if self.config.kind == "mock":
            text = self._script.respond(prompt.text)
            return LlmExchange(
                prompt=prompt,
                raw_text=text,
                usage=TokenUsage(approx_tokens(prompt.text), approx_tokens(text)),
                decode_status="ok",
                latency=time.monotonic() - started,
            )
        return self._complete_http(prompt, started)

    def _complete_http(self, prompt: RenderedPrompt, started: float) -> LlmExchange:
        if self.config.kind == "openai_compatible":
            url, body, headers = _openai_request(self.config, prompt.text)
            parse = _parse_openai
        else:
            url, body, headers = _ollama_request(self.config, prompt.text)
            parse = _parse_ollama

        def fail(reason: str) -> LlmExchange:
            return LlmExchange(prompt=prompt, raw_text="", usage=TokenUsage(0, 0),
                               decode_status="transport_failed", reason=reason,
                               latency=time.monotonic() - started)

        # Exactly one retry, and only for timeouts.
        for attempt in (0, 1):
            try:
                if self._http is not None:
                    response = self._http.post(url, json=body, headers=headers,
                                               timeout=self.config.timeout)
                else:
                    with httpx.Client(timeout=self.config.timeout) as client:
                        response = client.post(url, json=body, headers=headers)
            except httpx.TimeoutException:
                if attempt == 0:
                    continue
                return fail("timeout")
            except httpx.HTTPError:
                return fail("unreachable")
            if response.status_code in (401, 403):
                return fail("auth")
            if response.status_code == 429:
                return fail("rate_limited")
            if response.status_code >= 400:
                return fail(f"http_{response.status_code}")
            try:
                text, usage = parse(response.json(), prompt.text)
            except (KeyError, IndexError, TypeError, ValueError):
                return fail("malformed_response")
            return LlmExchange(prompt=prompt, raw_text=text, usage=usage,
                               decode_status="ok",
                               latency=time.monotonic() - started)
        raise AssertionError("unreachable")


def mark_decode_failed(exchange: LlmExchange, reason: str) -> LlmExchange:
    return replace(exchange, decode_status="decode_failed", reason=reason)
