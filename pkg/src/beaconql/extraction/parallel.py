"""Parallel extraction: a validator plus four independent field extractors.

All five completions fan out concurrently and merge after every one has
settled, so a failure in any single extractor costs exactly that field.
The validator runs alongside the extractors rather than gating them; an
invalid verdict flags the draft, and the service layer refuses to build a
payload from it.
"""
from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional

from ..llm.decode import (
    DecodeError,
    FiltersOutput,
    Validity,
    VariantsOutput,
    decode_structured,
)
from ..llm.gateway import LlmClient, LlmExchange, mark_decode_failed
from ..prompting import TemplateRegistry, default_registry
from ..types import BeaconQueryError, Filter, Granularity, Scope, VariantParams
from .drafts import ExtractionDraft, FieldStatus

_SHORTHAND_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([kKmM]?)\s*$")
_SUFFIX_FACTOR = {"": 1, "k": 1_000, "m": 1_000_000}


def normalize_position(value: Any) -> int:
    """Expand numeric shorthand ("500k", "1.5m") into an integer position."""
    if isinstance(value, bool):
        raise ValueError(f"bad position {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError(f"non-integral position {value!r}")
        return int(value)
    match = _SHORTHAND_RE.match(str(value).replace(",", ""))
    if not match:
        raise ValueError(f"bad position {value!r}")
    number = float(match.group(1)) * _SUFFIX_FACTOR[match.group(2).lower()]
    if not number.is_integer():
        raise ValueError(f"non-integral position {value!r}")
    return int(number)


def variant_params_from_output(out: VariantsOutput) -> Optional[VariantParams]:
    """Turn raw extractor output into validated variant params.

    ``success: false`` means the question simply has no variant part.
    """
    if not out.success:
        return None
    params = VariantParams(
        assembly_id=None if out.assembly_id in ("", "unknown") else out.assembly_id,
        reference_name=None if out.chromosome in ("", "unknown") else out.chromosome,
        start=tuple(normalize_position(v) for v in out.start),
        end=tuple(normalize_position(v) for v in out.end),
    )
    return None if params.is_empty else params


def filters_from_output(out: FiltersOutput) -> tuple[Filter, ...]:
    return tuple(Filter(term=f.term, scope=f.scope, filter_type="custom")
                 for f in out.filters)


def _attempt(provider: LlmClient, registry: TemplateRegistry, template_id: str,
             question: str, schema_id: str) -> tuple[LlmExchange, Any, str]:
    """Render, complete and decode one extractor; never raises.

    Returns (exchange, decoded value or None, failure reason or "").
    """
    prompt = registry.render(template_id, {"query": question})
    exchange = provider.complete(prompt)
    if exchange.decode_status == "transport_failed":
        return exchange, None, exchange.reason or "transport"
    try:
        value = decode_structured(exchange, schema_id)
    except DecodeError as exc:
        reason = f"decode_{type(exc).__name__.lower()}"
        return mark_decode_failed(exchange, reason), None, reason
    return exchange, value, ""


def validate_question(question: str, provider: LlmClient,
                      registry: TemplateRegistry | None = None) -> Validity:
    """Run the validator template; unavailable or undecodable fails closed."""
    registry = registry or default_registry()
    _, validity, reason = _attempt(provider, registry, "parallel/validator",
                                   question, "validity-result")
    if reason:
        return Validity(yes=False, reason="validator unavailable")
    return validity


def extract_parallel(question: str, provider: LlmClient,
                     registry: TemplateRegistry | None = None) -> ExtractionDraft:
    registry = registry or default_registry()

    tasks: dict[str, tuple[str, str]] = {
        "validator": ("parallel/validator", "validity-result"),
        "scope": ("parallel/scope", "scope-result"),
        "granularity": ("parallel/granularity", "granularity-result"),
        "variants": ("parallel/variants", "variants-result"),
        "filters": ("parallel/filters", "filters-result"),
    }
    with ThreadPoolExecutor(max_workers=len(tasks)) as pool:
        futures = {
            name: pool.submit(_attempt, provider, registry, template_id, question, schema_id)
            for name, (template_id, schema_id) in tasks.items()
        }
        results = {name: future.result() for name, future in futures.items()}

    exchanges = tuple(results[name][0] for name in tasks)

    _, validity, validator_reason = results["validator"]
    if validator_reason:
        validity = Validity(yes=False, reason="validator unavailable")

    _, scope_value, scope_reason = results["scope"]
    if scope_reason:
        scope, scope_status = Scope.UNKNOWN, FieldStatus.failed(scope_reason)
    else:
        scope = scope_value
        scope_status = FieldStatus.known() if scope.is_concrete else FieldStatus.unknown()

    _, gran_value, gran_reason = results["granularity"]
    if gran_reason:
        granularity, gran_status = Granularity.UNKNOWN, FieldStatus.failed(gran_reason)
    else:
        granularity = gran_value
        gran_status = FieldStatus.known() if granularity.is_concrete else FieldStatus.unknown()

    _, variants_value, variants_reason = results["variants"]
    variant: Optional[VariantParams] = None
    if variants_reason:
        variant_status = FieldStatus.failed(variants_reason)
    else:
        try:
            variant = variant_params_from_output(variants_value)
            variant_status = FieldStatus.known()
        except (ValueError, BeaconQueryError) as exc:
            variant_status = FieldStatus.failed(f"normalization_{type(exc).__name__.lower()}")

    _, filters_value, filters_reason = results["filters"]
    if filters_reason:
        filters: tuple[Filter, ...] = ()
        filters_status = FieldStatus.failed(filters_reason)
    else:
        filters = filters_from_output(filters_value)
        filters_status = FieldStatus.known()

    return ExtractionDraft(
        question=question,
        validity=validity,
        scope=scope,
        scope_status=scope_status,
        granularity=granularity,
        granularity_status=gran_status,
        variant=variant,
        variant_status=variant_status,
        filters=filters,
        filters_status=filters_status,
        exchanges=exchanges,
    )
