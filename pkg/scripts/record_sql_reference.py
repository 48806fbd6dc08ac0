#!/usr/bin/env python3
"""Record the independent reference parse of the SQL fixture corpus.

Each corpus statement runs through SQLite's parser (EXPLAIN against stub
tables, a real SQL frontend) and through a WHERE splitter that shares no
code with the package parser. The result freezes into
tests/data/sql_reference.json; rerun after editing tests/sql_corpus.py.
"""
from __future__ import annotations

import json
import re
import sqlite3
import sys
from pathlib import Path

TESTS = Path(__file__).resolve().parent.parent / "tests"
sys.path.insert(0, str(TESTS))

from sql_corpus import CORPUS  # noqa: E402

_DDL = [
    'CREATE TABLE GenomicVariations (variantInternalId, variation, caseLevelData, '
    'frequencyInPopulations, identifiers, molecularAttributes, variantLevelData, '
    'chr, start, "end", assemblyId, geneId, variantType)',
    "CREATE TABLE OntologyTerm (id, label)",
    "CREATE TABLE Individuals (id, sex, karyotypicSex, ethnicity, diseases)",
    "CREATE TABLE Biosamples (id, individualId, biosampleStatus, sampleOriginType)",
]

_PRED_RE = re.compile(
    r"^\s*(?P<column>[\w.]+)\s*(?P<op>>=|<=|!=|=|>|<|[Ll][Ii][Kk][Ee])\s*(?P<value>.+?)\s*$")


def split_where(sql: str) -> list[dict[str, str]]:
    """Naive independent splitter: text after WHERE, split on AND."""
    match = re.search(r"\bwhere\b", sql, re.IGNORECASE)
    if not match:
        return []
    clause = sql[match.end():].strip().rstrip(";")
    predicates = []
    for chunk in re.split(r"\band\b", clause, flags=re.IGNORECASE):
        m = _PRED_RE.match(chunk.strip())
        if not m:
            raise SystemExit(f"reference splitter cannot read {chunk!r}")
        value = m.group("value").strip()
        if value.startswith("'") and value.endswith("'"):
            value = value[1:-1]
        predicates.append({
            "column": m.group("column"),
            "op": m.group("op").upper(),
            "value": value,
        })
    return predicates


def main() -> None:
    db = sqlite3.connect(":memory:")
    for ddl in _DDL:
        db.execute(ddl)
    entries = []
    for case in CORPUS:
        db.execute("EXPLAIN " + case["sql"])  # raises on syntax errors
        entries.append({
            "id": case["id"],
            "sql": case["sql"],
            "sqlite_accepts": True,
            "predicates": split_where(case["sql"]),
        })
    out = TESTS / "data" / "sql_reference.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"reference": "sqlite3 EXPLAIN + regex splitter",
                               "statements": entries}, indent=2) + "\n")
    print(f"recorded {len(entries)} statements to {out}")


if __name__ == "__main__":
    main()
