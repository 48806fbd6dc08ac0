"""Multistep extraction: scope, granularity, schema, text-to-SQL, field parse.

The chain runs strictly sequentially and terminates early on failure, so
token spend stops at the failing step. Terms extracted this way come out
of the generated SQL, which keeps them aligned with the schema vocabulary;
the trade-off is that one bad step loses the whole question.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Union

from ..llm.decode import Validity
from ..llm.gateway import LlmClient, LlmExchange
from ..prompting import TemplateRegistry, default_registry
from ..types import Granularity, Scope
from .drafts import ExtractionDraft, FieldStatus
from .sqlfields import SqlExtraction, SqlParseError, parse_sql_fields

EARLY_TERMINATION = "early-termination"

# Scopes with a shipped BIRD-format schema.
SCHEMA_SCOPES = (Scope.INDIVIDUALS, Scope.BIOSAMPLES, Scope.G_VARIANTS)


class UnsupportedScope(Exception):
    pass


@dataclass(frozen=True)
class SchemaDoc:
    scope: Scope
    text: str


StepRecord = Union[LlmExchange, SqlExtraction, str]


@dataclass(frozen=True)
class StepTrace:
    steps: tuple[tuple[str, StepRecord], ...] = ()
    terminated_at: Optional[str] = None

    @property
    def step_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.steps)

    @property
    def exchanges(self) -> tuple[LlmExchange, ...]:
        return tuple(rec for _, rec in self.steps if isinstance(rec, LlmExchange))


def render_schema(scope: Scope) -> SchemaDoc:
    if scope not in SCHEMA_SCOPES:
        raise UnsupportedScope(f"no schema shipped for scope {scope.value!r}")
    text = resources.files("beaconql").joinpath(
        f"extraction/schemas/{scope.value}.bird.txt").read_text(encoding="utf-8")
    return SchemaDoc(scope=scope, text=text)


def _normalize_token(raw: str) -> str:
    token = raw.strip().splitlines()[0] if raw.strip() else ""
    return token.strip().strip(string.punctuation + "'\"`").lower()


def classify_scope(question: str, provider: LlmClient,
                   registry: TemplateRegistry | None = None) -> tuple[Scope, LlmExchange]:
    registry = registry or default_registry()
    prompt = registry.render("multistep/scope", {"input": question})
    exchange = provider.complete(prompt)
    if exchange.decode_status == "transport_failed":
        return Scope.UNKNOWN, exchange
    return Scope.parse(_normalize_token(exchange.raw_text)), exchange


def classify_granularity(question: str, provider: LlmClient,
                         registry: TemplateRegistry | None = None) -> tuple[Granularity, LlmExchange]:
    registry = registry or default_registry()
    prompt = registry.render("multistep/granularity", {"input": question})
    exchange = provider.complete(prompt)
    if exchange.decode_status == "transport_failed":
        return Granularity.UNKNOWN, exchange
    return Granularity.parse(_normalize_token(exchange.raw_text)), exchange


def generate_sql(question: str, schema: SchemaDoc, provider: LlmClient,
                 registry: TemplateRegistry | None = None) -> tuple[Optional[str], LlmExchange]:
    """Ask for the SQL statement text. It is parsed downstream, never executed."""
    registry = registry or default_registry()
    prompt = registry.render("multistep/text2sql", {"schema": schema.text, "input": question})
    exchange = provider.complete(prompt)
    if exchange.decode_status == "transport_failed" or not exchange.raw_text.strip():
        return None, exchange
    return exchange.raw_text.strip(), exchange


def extract_multistep(question: str, provider: LlmClient,
                      registry: TemplateRegistry | None = None
                      ) -> tuple[ExtractionDraft, StepTrace]:
    registry = registry or default_registry()
    steps: list[tuple[str, StepRecord]] = []

    # This chain extracts only what matches the schema, so it replaces the
    # validation prompt; a question that fits nothing terminates at scope.
    validity = Validity(yes=True)

    def terminated(at: str, *, scope=Scope.UNKNOWN, scope_status=None,
                   granularity=Granularity.UNKNOWN, granularity_status=None) -> tuple:
        failed = FieldStatus.failed(EARLY_TERMINATION)
        draft = ExtractionDraft(
            question=question,
            validity=validity,
            scope=scope,
            scope_status=scope_status or failed,
            granularity=granularity,
            granularity_status=granularity_status or failed,
            variant=None,
            variant_status=failed,
            filters=(),
            filters_status=failed,
            exchanges=tuple(rec for _, rec in steps if isinstance(rec, LlmExchange)),
        )
        return draft, StepTrace(steps=tuple(steps), terminated_at=at)

    scope, exchange = classify_scope(question, provider, registry)
    steps.append(("scope", exchange))
    if exchange.decode_status == "transport_failed":
        return terminated("scope", scope_status=FieldStatus.failed(exchange.reason or "transport"))
    if not scope.is_concrete:
        return terminated("scope", scope_status=FieldStatus.unknown())
    scope_status = FieldStatus.known()

    granularity, exchange = classify_granularity(question, provider, registry)
    steps.append(("granularity", exchange))
    if exchange.decode_status == "transport_failed":
        return terminated("granularity", scope=scope, scope_status=scope_status,
                          granularity_status=FieldStatus.failed(exchange.reason or "transport"))
    granularity_status = FieldStatus.known() if granularity.is_concrete else FieldStatus.unknown()

    try:
        schema = render_schema(scope)
    except UnsupportedScope as exc:
        steps.append(("schema", str(exc)))
        return terminated("schema", scope=scope, scope_status=scope_status,
                          granularity=granularity, granularity_status=granularity_status)
    steps.append(("schema", schema.scope.value))

    sql, exchange = generate_sql(question, schema, provider, registry)
    steps.append(("text2sql", exchange))
    if sql is None:
        return terminated("text2sql", scope=scope, scope_status=scope_status,
                          granularity=granularity, granularity_status=granularity_status)

    try:
        extraction = parse_sql_fields(sql, current_scope=scope)
    except SqlParseError as exc:
        steps.append(("parse", f"error: {exc}"))
        return terminated("parse", scope=scope, scope_status=scope_status,
                          granularity=granularity, granularity_status=granularity_status)
    steps.append(("parse", extraction))

    draft = ExtractionDraft(
        question=question,
        validity=validity,
        scope=scope,
        scope_status=scope_status,
        granularity=granularity,
        granularity_status=granularity_status,
        variant=extraction.variant,
        variant_status=FieldStatus.known(),
        filters=extraction.filters,
        filters_status=FieldStatus.known(),
        residue=extraction.residue,
        exchanges=tuple(rec for _, rec in steps if isinstance(rec, LlmExchange)),
    )
    return draft, StepTrace(steps=tuple(steps), terminated_at=None)
