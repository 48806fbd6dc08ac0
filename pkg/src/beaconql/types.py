"""Core Beacon v2 query domain types.

All types here are immutable values; they can be shared freely between
threads. Validation happens at construction so an instance that exists is
an instance that satisfies its invariants (serialization-time rules, such
as "no unknown sentinel in a payload", live in :mod:`beaconql.payload`).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class BeaconQueryError(Exception):
    """Base class for query construction/serialization errors."""


class MissingScope(BeaconQueryError):
    pass


class MissingGranularity(BeaconQueryError):
    pass


class InvalidInterval(BeaconQueryError):
    pass


class InvalidBases(BeaconQueryError):
    pass


class InvalidFilter(BeaconQueryError):
    pass


class ShapeMismatch(BeaconQueryError):
    """Response body does not carry the field the granularity demands."""


class Scope(Enum):
    INDIVIDUALS = "individuals"
    BIOSAMPLES = "biosamples"
    RUNS = "runs"
    ANALYSES = "analyses"
    DATASETS = "datasets"
    COHORTS = "cohorts"
    G_VARIANTS = "g_variants"
    # Pipeline-internal sentinel; must never appear in a serialized payload.
    UNKNOWN = "unknown"

    @property
    def is_concrete(self) -> bool:
        return self is not Scope.UNKNOWN

    @classmethod
    def parse(cls, value: str) -> "Scope":
        try:
            return cls(value)
        except ValueError:
            return cls.UNKNOWN


class Granularity(Enum):
    RECORD = "record"
    COUNT = "count"
    BOOLEAN = "boolean"
    UNKNOWN = "unknown"

    @property
    def is_concrete(self) -> bool:
        return self is not Granularity.UNKNOWN

    @classmethod
    def parse(cls, value: str) -> "Granularity":
        try:
            return cls(value)
        except ValueError:
            return cls.UNKNOWN


IUPAC_BASES_RE = re.compile(r"^[ACGTUNRYSWKMBDHV\-\.]*$")
CHROMOSOMES = tuple(str(n) for n in range(1, 23)) + ("X", "Y")

DEFAULT_ASSEMBLY = "GRCh38"
DEFAULT_BASES = "N"


@dataclass(frozen=True)
class VariantParams:
    """Genomic variant request parameters.

    ``start`` and ``end`` are base-position intervals of one or two
    non-negative integers (two-element form is a bracket query). Reference
    and alternate bases default to ``N`` and must be IUPAC strings.
    """

    assembly_id: Optional[str] = None
    reference_name: Optional[str] = None
    start: tuple[int, ...] = ()
    end: tuple[int, ...] = ()
    reference_bases: Optional[str] = None
    alternate_bases: Optional[str] = None
    gene_id: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", tuple(int(v) for v in self.start))
        object.__setattr__(self, "end", tuple(int(v) for v in self.end))
        for name, interval in (("start", self.start), ("end", self.end)):
            if len(interval) > 2:
                raise InvalidInterval(f"{name} takes one or two positions, got {len(interval)}")
            if any(v < 0 for v in interval):
                raise InvalidInterval(f"{name} positions must be non-negative: {interval}")
            if len(interval) == 2 and interval[0] > interval[1]:
                raise InvalidInterval(f"{name} bracket must be ascending: {interval}")
        if len(self.start) == 1 and len(self.end) == 1 and self.start[0] > self.end[0]:
            raise InvalidInterval(f"start {self.start[0]} > end {self.end[0]}")
        for name, bases in (("reference_bases", self.reference_bases),
                            ("alternate_bases", self.alternate_bases)):
            if bases is not None and not IUPAC_BASES_RE.match(bases):
                raise InvalidBases(f"{name} {bases!r} is not an IUPAC base string")
        if self.reference_name is not None and self.reference_name not in CHROMOSOMES:
            raise InvalidInterval(f"reference_name must be a chromosome label, got {self.reference_name!r}")

    @property
    def is_positional(self) -> bool:
        return bool(self.start or self.end)

    @property
    def is_empty(self) -> bool:
        return not (self.start or self.end or self.reference_name or self.gene_id
                    or self.assembly_id or self.reference_bases or self.alternate_bases)


ONTOLOGY_CODE_RE = re.compile(r"^[A-Za-z][A-Za-z0-9._-]*: ?\S+")

FILTER_TYPES = ("ontology", "alphanumeric", "custom")


def infer_filter_type(filter_id: Optional[str], value: Optional[str]) -> str:
    """Classify a filter by its payload content.

    ``PREFIX:code`` (or ``PREFIX: code``) ids are ontology filters; a
    ``%``-pattern value without a code is alphanumeric; anything else is
    custom.
    """
    if filter_id and ONTOLOGY_CODE_RE.match(filter_id):
        return "ontology"
    if value and "%" in value:
        return "alphanumeric"
    return "custom"


@dataclass(frozen=True)
class Filter:
    """One phenotypic/ontology condition attached to a query.

    ``term`` is the raw extracted phrase (pipeline-internal, never
    serialized); ``id`` and ``value`` are the confirmed payload fields.
    """

    scope: Scope = Scope.UNKNOWN
    id: Optional[str] = None
    value: Optional[str] = None
    term: str = ""
    filter_type: Optional[str] = None

    def __post_init__(self) -> None:
        if not (self.id or self.value or self.term):
            raise InvalidFilter("filter needs at least one of id/value/term")
        if self.filter_type is None:
            object.__setattr__(self, "filter_type", infer_filter_type(self.id, self.value))
        if self.filter_type not in FILTER_TYPES:
            raise InvalidFilter(f"unsupported filter type {self.filter_type!r}")

@dataclass(frozen=True)
class BeaconQuery:
    """A fully-specified Beacon v2 request."""

    scope: Scope = Scope.UNKNOWN
    granularity: Granularity = Granularity.UNKNOWN
    variant: Optional[VariantParams] = None
    filters: tuple[Filter, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "filters", tuple(self.filters))


@dataclass(frozen=True)
class BeaconResponse:
    """Parsed Beacon answer; exactly one field matches the request granularity."""

    granularity: Granularity
    exists: Optional[bool] = None
    count: Optional[int] = None
    records: Optional[tuple[dict[str, Any], ...]] = None

    def __post_init__(self) -> None:
        populated = {
            Granularity.BOOLEAN: self.exists is not None,
            Granularity.COUNT: self.count is not None,
            Granularity.RECORD: self.records is not None,
        }
        if not populated.get(self.granularity, False):
            raise ShapeMismatch(f"no {self.granularity.value} field populated")
        if sum(populated.values()) != 1:
            raise ShapeMismatch("exactly one of exists/count/records may be populated")
        if self.count is not None and self.count < 0:
            raise ShapeMismatch("count must be non-negative")
        if self.records is not None:
            object.__setattr__(self, "records", tuple(self.records))


@dataclass(frozen=True)
class TokenUsage:
    """Token counts for one or more LLM exchanges."""

    prompt_tokens: int = 0
    completion_tokens: int = 0

    def __post_init__(self) -> None:
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be non-negative")

    def __add__(self, other: "TokenUsage") -> "TokenUsage":
        return TokenUsage(self.prompt_tokens + other.prompt_tokens,
                          self.completion_tokens + other.completion_tokens)

    @property
    def total(self) -> int:
        return self.prompt_tokens + self.completion_tokens
