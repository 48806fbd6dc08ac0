from __future__ import annotations

import json
from pathlib import Path

import pytest

from beaconql.extraction.sqlfields import SqlParseError, parse_sql_fields
from beaconql.types import Scope

from sql_corpus import CORPUS

DATA = Path(__file__).parent / "data"


def _variant_fields(extraction):
    if extraction.variant is None:
        return None
    return {k: v for k, v in vars(extraction.variant).items() if v not in (None, ())}


@pytest.mark.parametrize("case", CORPUS, ids=[c["id"] for c in CORPUS])
def test_corpus_statement(case):
    extraction = parse_sql_fields(case["sql"], current_scope=Scope(case["scope"]))
    assert _variant_fields(extraction) == case["variant"]
    assert [(f.filter_type, f.id, f.value, f.term, f.scope.value)
            for f in extraction.filters] == case["filters"]
    assert list(extraction.residue) == case["residue"]


class TestReferenceCrossCheck:
    """Frozen record from an independent parse of the same corpus."""

    @pytest.fixture(scope="class")
    def reference(self):
        return json.loads((DATA / "sql_reference.json").read_text())

    def test_reference_covers_corpus(self, reference):
        assert [entry["id"] for entry in reference["statements"]] == \
            [case["id"] for case in CORPUS]
        assert all(entry["sqlite_accepts"] for entry in reference["statements"])

    def test_every_reference_predicate_is_classified(self, reference):
        """Variant fields + filters + residue must jointly cover, and never
        exceed, the WHERE predicates the independent splitter sees."""
        by_id = {case["id"]: case for case in CORPUS}
        for entry in reference["statements"]:
            case = by_id[entry["id"]]
            extraction = parse_sql_fields(case["sql"], current_scope=Scope(case["scope"]))
            classified = len(extraction.filters) + len(extraction.residue)
            if extraction.variant is not None:
                v = extraction.variant
                classified += sum(1 for x in (v.reference_name, v.assembly_id, v.gene_id)
                                  if x is not None)
                classified += len(v.start) + len(v.end)
                # A point interval (start = x) consumes one predicate but one
                # position; bracket bounds consume one predicate each.
            assert classified == len(entry["predicates"]), entry["id"]


class TestErrors:
    @pytest.mark.parametrize("sql", [
        "DROP TABLE x",
        "DELETE FROM Individuals",
        "SELECT id FROM Individuals",                       # not SELECT *
        "SELECT * FROM Individuals WHERE a = 1 OR b = 2",   # disjunction
        "SELECT * FROM Individuals WHERE label LIKE '%unterminated",
        "SELECT * FROM Individuals WHERE",
        "SELECT * FROM Individuals WHERE x = 1 garbage",
        "SELECT * FROM GenomicVariations WHERE start >= 10 AND end <= 5",
    ])
    def test_rejected(self, sql):
        with pytest.raises(SqlParseError):
            parse_sql_fields(sql)

    def test_duplicate_bound_goes_to_residue(self):
        extraction = parse_sql_fields(
            "SELECT * FROM GenomicVariations WHERE start >= 5 AND start >= 9")
        assert extraction.variant.start == (5,)
        assert extraction.residue == ("start >= 9",)


class TestTotality:
    """Every WHERE predicate lands in exactly one bucket."""

    @pytest.mark.parametrize("case", CORPUS, ids=[c["id"] for c in CORPUS])
    def test_disjoint_and_covering(self, case):
        extraction = parse_sql_fields(case["sql"], current_scope=Scope(case["scope"]))
        filter_terms = [f.term for f in extraction.filters]
        assert len(filter_terms) == len(set(filter_terms)) or case["id"] == "two-ontology-filters"
        for rendered in extraction.residue:
            assert rendered not in filter_terms
