"""Structured decoding of provider output against the registered schemas.

Each extractor prompt embeds a JSON skeleton; the matching schema here
validates field names, enum domains and nesting, and rejects unknown extra
fields. Providers can lie even in JSON mode, so decoding always validates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Union

from ..types import Granularity, Scope
from .gateway import LlmExchange


@dataclass(frozen=True)
class Validity:
    yes: bool
    reason: str = ""

    def __post_init__(self) -> None:
        if not self.yes and not self.reason:
            raise ValueError("an invalid verdict needs a reason")

    def to_json(self) -> str:
        return json.dumps({"yes": self.yes, "reason": self.reason})


class DecodeError(Exception):
    pass


class NotJson(DecodeError):
    pass


class SchemaViolation(DecodeError):
    def __init__(self, field: str, detail: str = ""):
        super().__init__(f"schema violation at {field!r}" + (f": {detail}" if detail else ""))
        self.field = field


class EnumViolation(DecodeError):
    def __init__(self, field: str, value: Any, allowed: tuple[str, ...]):
        super().__init__(f"{field!r} value {value!r} outside {allowed}")
        self.field = field
        self.value = value


SCOPE_VALUES = tuple(s.value for s in Scope)
GRANULARITY_VALUES = tuple(g.value for g in Granularity)

# Raw start/end as the model may emit them: a number, a shorthand string
# like "500k", an array of one or two of those, or the "unknown" sentinel.
PositionValue = Union[int, float, str]


@dataclass(frozen=True)
class VariantsOutput:
    success: bool
    assembly_id: str = "unknown"
    chromosome: str = "unknown"
    start: tuple[PositionValue, ...] = ()
    end: tuple[PositionValue, ...] = ()

    def to_json(self) -> str:
        def pos(values: tuple[PositionValue, ...]) -> Any:
            return list(values) if values else "unknown"
        return json.dumps({
            "success": self.success,
            "assembly_id": self.assembly_id,
            "chromosome": self.chromosome,
            "start": pos(self.start),
            "end": pos(self.end),
        })


@dataclass(frozen=True)
class FilterTermOut:
    term: str
    scope: Scope

    def to_json_obj(self) -> dict[str, str]:
        return {"term": self.term, "scope": self.scope.value}


@dataclass(frozen=True)
class FiltersOutput:
    filters: tuple[FilterTermOut, ...] = ()

    def to_json(self) -> str:
        return json.dumps({"filters": [f.to_json_obj() for f in self.filters]})


@dataclass(frozen=True)
class CodegenOutput:
    code: str
    files: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = ()
    feedback: tuple[str, ...] = ()

    def to_json(self) -> str:
        return json.dumps({
            "code": self.code,
            "files": list(self.files),
            "assumptions": list(self.assumptions),
            "feedback": list(self.feedback),
        })


# Declared output directory in generated code; the runner remaps it to a
# per-run sandbox before execution.
DECLARED_OUTPUT_PREFIX = "/tmp/"


def _load_object(raw_text: str) -> dict[str, Any]:
    try:
        doc = json.loads(raw_text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise NotJson(str(exc)) from None
    if not isinstance(doc, dict):
        raise NotJson(f"expected a JSON object, got {type(doc).__name__}")
    return doc


def _reject_extras(doc: dict[str, Any], allowed: tuple[str, ...]) -> None:
    extras = set(doc) - set(allowed)
    if extras:
        raise SchemaViolation(sorted(extras)[0], "unexpected field")


def _require_str(doc: dict[str, Any], key: str) -> str:
    value = doc.get(key)
    if not isinstance(value, str):
        raise SchemaViolation(key, "expected a string")
    return value


def _require_bool(doc: dict[str, Any], key: str) -> bool:
    value = doc.get(key)
    if not isinstance(value, bool):
        raise SchemaViolation(key, "expected a boolean")
    return value


def _decode_scope(doc: dict[str, Any]) -> Scope:
    _reject_extras(doc, ("scope",))
    value = _require_str(doc, "scope")
    if value not in SCOPE_VALUES:
        raise EnumViolation("scope", value, SCOPE_VALUES)
    return Scope(value)


def _decode_granularity(doc: dict[str, Any]) -> Granularity:
    _reject_extras(doc, ("granularity",))
    value = _require_str(doc, "granularity")
    if value not in GRANULARITY_VALUES:
        raise EnumViolation("granularity", value, GRANULARITY_VALUES)
    return Granularity(value)


def _decode_positions(doc: dict[str, Any], key: str) -> tuple[PositionValue, ...]:
    value = doc.get(key, "unknown")
    if value == "unknown" or value is None:
        return ()
    if isinstance(value, (int, float, str)):
        value = [value]
    if not isinstance(value, list) or not 1 <= len(value) <= 2:
        raise SchemaViolation(key, "expected an array of one or two positions")
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (int, float, str)):
            raise SchemaViolation(key, f"bad position {item!r}")
    return tuple(value)


def _decode_variants(doc: dict[str, Any]) -> VariantsOutput:
    _reject_extras(doc, ("success", "assembly_id", "chromosome", "start", "end"))
    success = _require_bool(doc, "success")
    assembly = doc.get("assembly_id", "unknown")
    chromosome = doc.get("chromosome", "unknown")
    if not isinstance(assembly, str):
        raise SchemaViolation("assembly_id", "expected a string")
    if not isinstance(chromosome, str):
        raise SchemaViolation("chromosome", "expected a string")
    return VariantsOutput(
        success=success,
        assembly_id=assembly,
        chromosome=chromosome,
        start=_decode_positions(doc, "start"),
        end=_decode_positions(doc, "end"),
    )


def _decode_filters(doc: dict[str, Any]) -> FiltersOutput:
    _reject_extras(doc, ("filters",))
    raw = doc.get("filters")
    if not isinstance(raw, list):
        raise SchemaViolation("filters", "expected an array")
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise SchemaViolation(f"filters[{i}]", "expected an object")
        _reject_extras(item, ("term", "scope"))
        term = item.get("term")
        if not isinstance(term, str) or not term:
            raise SchemaViolation(f"filters[{i}].term", "expected a non-empty string")
        scope = item.get("scope", "unknown")
        if scope not in SCOPE_VALUES:
            raise EnumViolation(f"filters[{i}].scope", scope, SCOPE_VALUES)
        out.append(FilterTermOut(term=term, scope=Scope(scope)))
    return FiltersOutput(filters=tuple(out))


def _decode_validity(doc: dict[str, Any]) -> Validity:
    _reject_extras(doc, ("yes", "reason"))
    yes = _require_bool(doc, "yes")
    reason = doc.get("reason", "")
    if not isinstance(reason, str):
        raise SchemaViolation("reason", "expected a string")
    if not yes and not reason:
        raise SchemaViolation("reason", "required for a negative verdict")
    return Validity(yes=yes, reason=reason)


def _decode_codegen(doc: dict[str, Any]) -> CodegenOutput:
    _reject_extras(doc, ("code", "files", "assumptions", "feedback"))
    code = _require_str(doc, "code")
    lists = {}
    for key in ("files", "assumptions", "feedback"):
        raw = doc.get(key, [])
        if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
            raise SchemaViolation(key, "expected an array of strings")
        lists[key] = tuple(raw)
    for path in lists["files"]:
        if not path.startswith(DECLARED_OUTPUT_PREFIX):
            raise SchemaViolation("files", f"{path!r} outside {DECLARED_OUTPUT_PREFIX}")
    return CodegenOutput(code=code, files=lists["files"],
                         assumptions=lists["assumptions"], feedback=lists["feedback"])


_DECODERS = {
    "scope-result": _decode_scope,
    "granularity-result": _decode_granularity,
    "variants-result": _decode_variants,
    "filters-result": _decode_filters,
    "validity-result": _decode_validity,
    "codegen-result": _decode_codegen,
}

SCHEMA_IDS = tuple(_DECODERS)


def decode_structured(exchange: LlmExchange, schema_id: str) -> Any:
    """Parse and validate an exchange's raw text against a named schema."""
    if schema_id not in _DECODERS:
        raise KeyError(f"unknown schema {schema_id!r}")
    return _DECODERS[schema_id](_load_object(exchange.raw_text))
