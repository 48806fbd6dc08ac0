"""Shared extraction result types.

A draft records what each extractor produced together with a per-field
status, so a single failed completion degrades one field instead of the
whole question. Every exchange that contributed is kept as an audit trail.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

from ..llm.decode import Validity
from ..llm.gateway import LlmExchange
from ..types import Filter, Granularity, Scope, TokenUsage, VariantParams

__all__ = ["ExtractionDraft", "FieldStatus", "Validity"]


@dataclass(frozen=True)
class FieldStatus:
    state: str          # known | unknown | failed
    reason: str = ""    # transport/decode reason code when failed

    def __post_init__(self) -> None:
        if self.state not in ("known", "unknown", "failed"):
            raise ValueError(f"bad field state {self.state!r}")
        if self.state == "failed" and not self.reason:
            raise ValueError("failed status needs a reason code")

    @classmethod
    def known(cls) -> "FieldStatus":
        return cls("known")

    @classmethod
    def unknown(cls) -> "FieldStatus":
        return cls("unknown")

    @classmethod
    def failed(cls, reason: str) -> "FieldStatus":
        return cls("failed", reason)

    @property
    def is_known(self) -> bool:
        return self.state == "known"


@dataclass(frozen=True)
class ExtractionDraft:
    question: str
    validity: Validity
    scope: Scope = Scope.UNKNOWN
    scope_status: FieldStatus = field(default_factory=FieldStatus.unknown)
    granularity: Granularity = Granularity.UNKNOWN
    granularity_status: FieldStatus = field(default_factory=FieldStatus.unknown)
    variant: Optional[VariantParams] = None
    variant_status: FieldStatus = field(default_factory=FieldStatus.unknown)
    filters: tuple[Filter, ...] = ()
    filters_status: FieldStatus = field(default_factory=FieldStatus.unknown)
    residue: tuple[str, ...] = ()
    exchanges: tuple[LlmExchange, ...] = ()

    @property
    def total_usage(self) -> TokenUsage:
        return reduce(lambda a, b: a + b, (x.usage for x in self.exchanges), TokenUsage())
