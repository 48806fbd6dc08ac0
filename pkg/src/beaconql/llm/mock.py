"""Deterministic scripted provider for offline runs and tests."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .gateway import LlmClient, LlmExchange, ProviderConfig

Matcher = Union[str, Callable[[str], bool]]


@dataclass(frozen=True)
class MockRule:
    """Matches a prompt (substring or predicate) to a canned response."""

    matcher: Matcher
    response: str

    def matches(self, prompt_text: str) -> bool:
        if callable(self.matcher):
            return bool(self.matcher(prompt_text))
        return self.matcher in prompt_text


class MockScript:
    """Ordered first-match-wins response rules; referentially transparent."""

    def __init__(self, rules: Sequence[MockRule] = (), default: str = "") -> None:
        self._rules = tuple(rules)
        self._default = default

    def respond(self, prompt_text: str) -> str:
        for rule in self._rules:
            if rule.matches(prompt_text):
                return rule.response
        return self._default


def mock_client(script: MockScript, *, json_mode: bool = True) -> LlmClient:
    return LlmClient(ProviderConfig(kind="mock", json_mode=json_mode), script=script)


class FaultInjector:
    """Wraps a provider, forcing transport failures on matching prompts.

    Used by resilience and early-termination tests to fail exactly one
    step of a workflow while the rest of the script stays intact.
    """

    def __init__(self, inner: LlmClient, fail_when: Matcher, reason: str = "timeout") -> None:
        self.config = inner.config
        self._inner = inner
        self._rule = MockRule(fail_when, "")
        self._reason = reason

    def complete(self, prompt) -> LlmExchange:
        if self._rule.matches(prompt.text):
            from ..types import TokenUsage
            return LlmExchange(prompt=prompt, raw_text="", usage=TokenUsage(0, 0),
                               decode_status="transport_failed", reason=self._reason)
        return self._inner.complete(prompt)
