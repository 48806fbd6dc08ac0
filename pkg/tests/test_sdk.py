from __future__ import annotations


import pytest

from beaconql.payload import build_payload, canonical_json
from beaconql.sdk import (
    Column,
    EmptyFilter,
    HttpError,
    InvalidScope,
    QueryBuilder,
    ResultFrame,
    Unauthorized,
    frame_from_records,
)
from beaconql.types import Granularity, InvalidInterval, Scope, VariantParams

TOKEN = "user-jwt-alpha"


def builder(beacon_client) -> QueryBuilder:
    return QueryBuilder(endpoint="http://testserver", auth_token=TOKEN)


class RecordingClient:
    """Wraps an httpx-compatible client, capturing every outgoing request."""

    def __init__(self, inner):
        self.inner = inner
        self.requests = []

    def post(self, url, content=None, headers=None, **kwargs):
        self.requests.append({"url": url, "content": content, "headers": dict(headers or {})})
        return self.inner.post(url, content=content, headers=headers, **kwargs)


class TestBuilderSemantics:
    def test_with_scope_returns_new_builder(self, beacon_client):
        base = builder(beacon_client)
        scoped = base.with_scope(Scope.INDIVIDUALS)
        assert base.partial.scope is Scope.UNKNOWN
        assert scoped.partial.scope is Scope.INDIVIDUALS

    def test_with_scope_rejects_unknown(self, beacon_client):
        with pytest.raises(InvalidScope):
            builder(beacon_client).with_scope(Scope.UNKNOWN)

    def test_scope_overwrite_last_wins(self, beacon_client):
        b = builder(beacon_client).with_scope(Scope.RUNS).with_scope(Scope.INDIVIDUALS)
        assert b.partial.scope is Scope.INDIVIDUALS

    def test_filters_append_in_order(self, beacon_client):
        b = (builder(beacon_client)
             .with_filter("ontology", "SNOMED: 36340605", Scope.G_VARIANTS)
             .with_filter("custom", "parkinson", Scope.INDIVIDUALS))
        assert [f.filter_type for f in b.partial.filters] == ["ontology", "custom"]
        assert b.partial.filters[0].id == "SNOMED: 36340605"

    def test_empty_filter_rejected(self, beacon_client):
        with pytest.raises(EmptyFilter):
            builder(beacon_client).with_filter("alphanumeric", "", Scope.INDIVIDUALS)

    def test_variant_invalid_interval(self, beacon_client):
        with pytest.raises(InvalidInterval):
            builder(beacon_client).with_variant(VariantParams(start=(5,), end=(4,)))

    def test_variant_overwrite(self, beacon_client):
        first = VariantParams(reference_name="1")
        second = VariantParams(reference_name="4")
        b = builder(beacon_client).with_variant(first).with_variant(second)
        assert b.partial.variant == second


class TestFetch:
    def test_count_of_parkinson_individuals(self, beacon_client):
        b = (builder(beacon_client).with_scope(Scope.INDIVIDUALS)
             .with_filter("alphanumeric", "%parkinson%", Scope.INDIVIDUALS))
        assert b.fetch(Granularity.COUNT, http=beacon_client) == 24

    def test_boolean_false_for_empty_region(self, beacon_client):
        b = (builder(beacon_client).with_scope(Scope.G_VARIANTS)
             .with_variant(VariantParams(reference_name="21", start=(1,), end=(2_000_000,))))
        assert b.fetch(Granularity.BOOLEAN, http=beacon_client) is False

    def test_record_frame_kinds(self, beacon_client):
        b = (builder(beacon_client).with_scope(Scope.INDIVIDUALS)
             .with_filter("alphanumeric", "%parkinson%", Scope.INDIVIDUALS))
        frame = b.fetch(Granularity.RECORD, http=beacon_client)
        kinds = {c.name: c.kind for c in frame.columns}
        assert kinds["id"] == "text"
        assert kinds["sex"] == "object"
        assert kinds["diseases"] == "list"
        assert all(set(cell) == {"id", "label"} for cell in frame.column("sex"))

    def test_record_rows_match_count(self, beacon_client):
        b = (builder(beacon_client).with_scope(Scope.INDIVIDUALS)
             .with_filter("custom", "colon cancer", Scope.INDIVIDUALS))
        frame = b.fetch(Granularity.RECORD, http=beacon_client)
        count = b.fetch(Granularity.COUNT, http=beacon_client)
        assert len(frame.rows) == count

    def test_fetch_requires_scope(self, beacon_client):
        with pytest.raises(InvalidScope):
            builder(beacon_client).fetch(Granularity.COUNT, http=beacon_client)

    def test_unauthorized_propagates(self, beacon_client):
        b = QueryBuilder(endpoint="http://testserver", auth_token="").with_scope(
            Scope.INDIVIDUALS).with_filter("custom", "x", Scope.INDIVIDUALS)
        with pytest.raises(Unauthorized):
            b.fetch(Granularity.COUNT, http=beacon_client)

    def test_http_error_carries_status(self, beacon_client):
        b = builder(beacon_client).with_scope(Scope.RUNS)
        with pytest.raises(HttpError) as excinfo:
            b.fetch(Granularity.COUNT, http=beacon_client)
        assert excinfo.value.status == 404


class TestWireInvariants:
    def test_fetch_body_equals_core_payload_bytes(self, beacon_client):
        recording = RecordingClient(beacon_client)
        b = (builder(beacon_client).with_scope(Scope.G_VARIANTS)
             .with_variant(VariantParams(reference_name="1", start=(110000,), end=(110100,)))
             .with_filter("alphanumeric", "%parkinson%", Scope.INDIVIDUALS))
        b.fetch(Granularity.RECORD, http=recording)
        sent = recording.requests[0]["content"]
        from dataclasses import replace
        expected = canonical_json(build_payload(
            replace(b.partial, granularity=Granularity.RECORD)))
        assert sent == expected

    def test_auth_header_passes_token_through_verbatim(self, beacon_client):
        recording = RecordingClient(beacon_client)
        b = builder(beacon_client).with_scope(Scope.INDIVIDUALS)
        b.fetch(Granularity.COUNT, http=recording)
        assert recording.requests[0]["headers"]["Authorization"] == f"Bearer {TOKEN}"

    def test_prefixed_token_not_double_wrapped(self, beacon_client):
        recording = RecordingClient(beacon_client)
        b = QueryBuilder(endpoint="http://testserver",
                         auth_token="Bearer already-prefixed").with_scope(Scope.INDIVIDUALS)
        b.fetch(Granularity.COUNT, http=recording)
        assert recording.requests[0]["headers"]["Authorization"] == "Bearer already-prefixed"

    def test_path_is_scope(self, beacon_client):
        recording = RecordingClient(beacon_client)
        builder(beacon_client).with_scope(Scope.BIOSAMPLES).fetch(
            Granularity.COUNT, http=recording)
        assert recording.requests[0]["url"].endswith("/biosamples")


class TestResultFrame:
    def test_rectangular_enforced(self):
        with pytest.raises(ValueError):
            ResultFrame(columns=(Column("a", "text"),), rows=((1, 2),))

    def test_column_order_first_appearance(self):
        frame = frame_from_records([{"b": 1}, {"a": "x", "b": 2}])
        assert frame.column_names == ("b", "a")

    def test_kind_inference_skips_nulls(self):
        frame = frame_from_records([{"v": None}, {"v": 2.5}])
        assert frame.columns[0].kind == "real"

    def test_boolean_detected_before_integer(self):
        frame = frame_from_records([{"flag": True}])
        assert frame.columns[0].kind == "boolean"

    def test_row_cap(self):
        frame = frame_from_records([{"i": n} for n in range(50)], row_cap=10)
        assert len(frame.rows) == 10
