"""Beacon v2 payload serialization and response parsing.

The wire format is the one Beacon endpoints accept:

    {"query": {"filters": [...], "requestedGranularity": ...,
               "requestParameters": {...}}}

Query scope travels in the URL path, not the body. Start/end positions
serialize as arrays of decimal strings, and reference/alternate bases
default to "N" for positional queries. ``canonical_json`` pins a fixed key
order so payload bytes are stable across runs and key-order variations.
"""
from __future__ import annotations

import json
from importlib import resources
from typing import Any, Optional

from .types import (
    DEFAULT_ASSEMBLY,
    DEFAULT_BASES,
    BeaconQuery,
    BeaconResponse,
    Filter,
    Granularity,
    MissingGranularity,
    MissingScope,
    Scope,
    ShapeMismatch,
    VariantParams,
)

# Canonical key ranking; unknown keys sort alphabetically after these.
_KEY_ORDER = (
    "query",
    "filters",
    "requestedGranularity",
    "requestParameters",
    "assemblyId",
    "start",
    "end",
    "referenceName",
    "referenceBases",
    "alternateBases",
    "geneId",
    "scope",
    "id",
    "value",
    "exists",
    "count",
    "records",
)
_KEY_RANK = {key: i for i, key in enumerate(_KEY_ORDER)}


def _order_keys(doc: Any) -> Any:
    if isinstance(doc, dict):
        ordered = sorted(doc, key=lambda k: (_KEY_RANK.get(k, len(_KEY_ORDER)), k))
        return {k: _order_keys(doc[k]) for k in ordered}
    if isinstance(doc, list):
        return [_order_keys(item) for item in doc]
    return doc


def canonical_json(doc: Any) -> bytes:
    """Serialize a JSON document deterministically.

    Idempotent and insensitive to input key order; two semantically equal
    documents always produce identical bytes.
    """
    return json.dumps(_order_keys(doc), indent=2, ensure_ascii=False).encode("utf-8")


def _filter_to_dict(f: Filter) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if f.scope.is_concrete:
        out["scope"] = f.scope.value
    if f.id is not None:
        out["id"] = f.id
    if f.value is not None:
        out["value"] = f.value
    elif f.id is None:
        # Term-only filters serialize their raw phrase as a match pattern.
        out["value"] = f"%{f.term}%"
    return out


def _variant_to_dict(v: VariantParams) -> dict[str, Any]:
    params: dict[str, Any] = {"assemblyId": v.assembly_id or DEFAULT_ASSEMBLY}
    if v.start:
        params["start"] = [str(p) for p in v.start]
    if v.end:
        params["end"] = [str(p) for p in v.end]
    if v.reference_name is not None:
        params["referenceName"] = v.reference_name
    if v.is_positional:
        params["referenceBases"] = v.reference_bases or DEFAULT_BASES
        params["alternateBases"] = v.alternate_bases or DEFAULT_BASES
    else:
        if v.reference_bases is not None:
            params["referenceBases"] = v.reference_bases
        if v.alternate_bases is not None:
            params["alternateBases"] = v.alternate_bases
    if v.gene_id is not None:
        params["geneId"] = v.gene_id
    return params


def build_payload(query: BeaconQuery) -> dict[str, Any]:
    """Serialize a query into the Beacon request body.

    The scope must be concrete even though it serializes into the URL path
    rather than the body; refusing the unknown sentinel here keeps every
    downstream surface free of it.
    """
    if not query.scope.is_concrete:
        raise MissingScope("query scope is unknown")
    if not query.granularity.is_concrete:
        raise MissingGranularity("query granularity is unknown")
    body: dict[str, Any] = {
        "query": {
            "filters": [_filter_to_dict(f) for f in query.filters],
            "requestedGranularity": query.granularity.value,
        }
    }
    if query.variant is not None:
        body["query"]["requestParameters"] = _variant_to_dict(query.variant)
    return body


def _parse_positions(raw: Any) -> tuple[int, ...]:
    if raw is None:
        return ()
    return tuple(int(v) for v in raw)


def parse_payload(scope: Scope, doc: dict[str, Any]) -> BeaconQuery:
    """Reconstruct a query from a request body plus its path scope."""
    query = doc.get("query")
    if not isinstance(query, dict):
        raise ShapeMismatch("payload lacks a query object")
    granularity = Granularity.parse(str(query.get("requestedGranularity", "unknown")))
    if not granularity.is_concrete:
        raise MissingGranularity("payload lacks a concrete requestedGranularity")
    filters = []
    for raw in query.get("filters", []):
        filters.append(Filter(
            scope=Scope.parse(raw["scope"]) if "scope" in raw else scope,
            id=raw.get("id"),
            value=raw.get("value"),
        ))
    variant: Optional[VariantParams] = None
    params = query.get("requestParameters")
    if params is not None:
        variant = VariantParams(
            assembly_id=params.get("assemblyId"),
            reference_name=params.get("referenceName"),
            start=_parse_positions(params.get("start")),
            end=_parse_positions(params.get("end")),
            reference_bases=params.get("referenceBases"),
            alternate_bases=params.get("alternateBases"),
            gene_id=params.get("geneId"),
        )
    return BeaconQuery(scope=scope, granularity=granularity, variant=variant,
                       filters=tuple(filters))


def parse_response(granularity: Granularity, body: dict[str, Any]) -> BeaconResponse:
    """Parse the response body for the requested granularity.

    Exactly the matching field is read; its absence (or a wrong type) is a
    :class:`ShapeMismatch`. Extra fields in the body are ignored.
    """
    if granularity is Granularity.BOOLEAN:
        exists = body.get("exists")
        if not isinstance(exists, bool):
            raise ShapeMismatch("boolean response lacks a boolean 'exists' field")
        return BeaconResponse(granularity=granularity, exists=exists)
    if granularity is Granularity.COUNT:
        count = body.get("count")
        if isinstance(count, bool) or not isinstance(count, int) or count < 0:
            raise ShapeMismatch("count response lacks a non-negative integer 'count' field")
        return BeaconResponse(granularity=granularity, count=count)
    if granularity is Granularity.RECORD:
        records = body.get("records")
        if not isinstance(records, list) or not all(isinstance(r, dict) for r in records):
            raise ShapeMismatch("record response lacks a 'records' list of objects")
        return BeaconResponse(granularity=granularity, records=tuple(records))
    raise MissingGranularity("cannot parse a response for unknown granularity")


def payload_schema() -> dict[str, Any]:
    """The JSON-schema document describing the request body."""
    text = resources.files("beaconql").joinpath("assets/beacon_payload.schema.json").read_text()
    return json.loads(text)
