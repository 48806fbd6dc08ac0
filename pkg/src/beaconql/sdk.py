"""Fluent Beacon client: build a query, fetch, get a tabular frame back.

Builders are immutable values (each ``with_*`` returns a new builder) and
the client is deterministic and LLM-free. The caller's bearer token is
attached verbatim to every outgoing request: the SDK never mints or
elevates credentials, so it can never read data its caller cannot.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Any, Optional, Union

import httpx

from .payload import build_payload, canonical_json, parse_response
from .types import (
    BeaconQuery,
    BeaconResponse,
    Filter,
    Granularity,
    InvalidFilter,
    Scope,
    VariantParams,
)


class SdkError(Exception):
    pass


class InvalidScope(SdkError):
    pass


class EmptyFilter(SdkError):
    pass


class HttpError(SdkError):
    def __init__(self, status: int, detail: str = ""):
        super().__init__(f"beacon returned HTTP {status}" + (f": {detail}" if detail else ""))
        self.status = status


class Unauthorized(HttpError):
    def __init__(self, detail: str = ""):
        super().__init__(401, detail)


FRAME_KINDS = ("text", "integer", "real", "boolean", "object", "list")

DEFAULT_ROW_CAP = 10_000


@dataclass(frozen=True)
class Column:
    name: str
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in FRAME_KINDS:
            raise ValueError(f"unknown column kind {self.kind!r}")


@dataclass(frozen=True)
class ResultFrame:
    columns: tuple[Column, ...]
    rows: tuple[tuple[Any, ...], ...]

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("frame must be rectangular")

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column(self, name: str) -> list[Any]:
        index = self.column_names.index(name)
        return [row[index] for row in self.rows]


def _kind_of(value: Any) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "real"
    if isinstance(value, dict):
        return "object"
    if isinstance(value, list):
        return "list"
    return "text"


def frame_from_records(records: tuple[dict[str, Any], ...] | list[dict[str, Any]],
                       row_cap: int = DEFAULT_ROW_CAP) -> ResultFrame:
    """Flatten top-level JSON attributes into columns.

    Nested objects/lists stay whole in object/list cells; column kind is
    inferred from the first non-null value.
    """
    names: list[str] = []
    for record in records:
        for key in record:
            if key not in names:
                names.append(key)
    kinds: dict[str, str] = {}
    for name in names:
        kinds[name] = "text"
        for record in records:
            if record.get(name) is not None:
                kinds[name] = _kind_of(record[name])
                break
    columns = tuple(Column(name, kinds[name]) for name in names)
    rows = tuple(tuple(record.get(name) for name in names)
                 for record in records[:row_cap])
    return ResultFrame(columns=columns, rows=rows)


FetchResult = Union[ResultFrame, int, bool]


@dataclass(frozen=True)
class QueryBuilder:
    """Fluent, immutable query construction against one endpoint."""

    endpoint: str
    auth_token: str
    partial: BeaconQuery = BeaconQuery()
    row_cap: int = DEFAULT_ROW_CAP

    def with_scope(self, scope: Scope) -> "QueryBuilder":
        if not scope.is_concrete:
            raise InvalidScope("scope must be concrete")
        return replace(self, partial=replace(self.partial, scope=scope))

    def with_filter(self, filter_type: str, term: str, scope: Scope) -> "QueryBuilder":
        if not term or not term.strip():
            raise EmptyFilter("filter term must be non-empty")
        if filter_type == "ontology":
            new = Filter(scope=scope, id=term, filter_type="ontology")
        elif filter_type == "alphanumeric":
            new = Filter(scope=scope, value=term, filter_type="alphanumeric")
        elif filter_type == "custom":
            new = Filter(scope=scope, term=term, filter_type="custom")
        else:
            raise InvalidFilter(f"unsupported filter type {filter_type!r}")
        return replace(self, partial=replace(self.partial,
                                             filters=self.partial.filters + (new,)))

    def with_variant(self, params: VariantParams) -> "QueryBuilder":
        # VariantParams validates its own intervals at construction.
        return replace(self, partial=replace(self.partial, variant=params))

    def payload(self, granularity: Granularity) -> bytes:
        """The exact request bytes fetch() sends; the SDK adds nothing."""
        query = replace(self.partial, granularity=granularity)
        return canonical_json(build_payload(query))

    def authorization_header(self) -> str:
        token = self.auth_token
        return token if token.startswith("Bearer ") else f"Bearer {token}"

    def fetch(self, granularity: Granularity,
              http: Optional[httpx.Client] = None) -> FetchResult:
        if not self.partial.scope.is_concrete:
            raise InvalidScope("set a scope before fetching")
        body = self.payload(granularity)
        url = self.endpoint.rstrip("/") + "/" + self.partial.scope.value
        headers = {
            "Authorization": self.authorization_header(),
            "Content-Type": "application/json",
        }
        if http is not None:
            response = http.post(url, content=body, headers=headers)
        else:
            with httpx.Client() as client:
                response = client.post(url, content=body, headers=headers)
        if response.status_code == 401:
            raise Unauthorized(response.text)
        if response.status_code >= 400:
            raise HttpError(response.status_code, response.text)
        parsed: BeaconResponse = parse_response(granularity, response.json())
        if granularity is Granularity.BOOLEAN:
            return parsed.exists
        if granularity is Granularity.COUNT:
            return parsed.count
        return frame_from_records(parsed.records, row_cap=self.row_cap)
