"""The shipped rule-based provider.

Builds a deterministic mock from an answer table asset covering the
bundled evaluation dataset plus the walk-through questions, for both
workflows: each table row yields responses for the five fan-out prompts,
the two classification prompts and the text-to-SQL prompt. Prompts are
recognized by template landmarks plus the question in the QUERY/QUESTION
section, so identical questions get aligned answers everywhere.
"""
from __future__ import annotations

import json
from importlib import resources
from typing import Any, Callable

from .gateway import LlmClient
from .mock import MockRule, MockScript, mock_client

_MARKS = {
    "validator": "You are a query builder for GA4GH Beacon V2",
    "par_scope": "SCOPE MUST BE ONE OF",
    "par_granularity": "CANDIDATE GRANULARITIES",
    "par_variants": "extract the assembly, chromosome, start base and end base",
    "par_filters": "Ignore anything that corresponds to a genomic variant",
    "ms_scope": "Classify the above user query into one of the below scopes",
    "ms_granularity": "Classify the above user query into one of the below categories",
    "text2sql": "SQL QUERY:",
    "codegen": "All inputs are pandas dataframes",
}


def _matcher(mark: str, question: str | None = None) -> Callable[[str], bool]:
    landmark = _MARKS[mark]
    if question is None:
        return lambda text: landmark in text
    needles = (f"QUERY\n{question}\n", f"QUESTION\n{question}\n")
    return lambda text: landmark in text and any(n in text for n in needles)


def load_answer_table() -> dict[str, Any]:
    text = resources.files("beaconql").joinpath("llm/assets/mock_answers.json").read_text()
    return json.loads(text)


def build_script(table: dict[str, Any] | None = None) -> MockScript:
    table = table or load_answer_table()
    rules: list[MockRule] = []

    for request, greeting in table.get("greetings", {}).items():
        rules.append(MockRule(_matcher("validator", request), greeting))

    # Longer questions first so prefix questions cannot shadow them.
    for row in sorted(table["questions"], key=lambda r: -len(r["question"])):
        question = row["question"]
        rules.append(MockRule(_matcher("validator", question), json.dumps(row["validity"])))
        rules.append(MockRule(_matcher("par_scope", question),
                              json.dumps({"scope": row["scope"]})))
        rules.append(MockRule(_matcher("par_granularity", question),
                              json.dumps({"granularity": row["granularity"]})))
        rules.append(MockRule(_matcher("par_variants", question), json.dumps(row["variants"])))
        rules.append(MockRule(_matcher("par_filters", question),
                              json.dumps({"filters": row["filters"]})))
        rules.append(MockRule(_matcher("ms_scope", question), row["scope"]))
        rules.append(MockRule(_matcher("ms_granularity", question), row["granularity"]))
        if row.get("sql"):
            rules.append(MockRule(_matcher("text2sql", question), row["sql"]))

    for entry in table.get("analytics", []):
        needle = entry["contains"]
        response = json.dumps(entry["response"])
        rules.append(MockRule(
            (lambda n: lambda text: _MARKS["codegen"] in text and n in text)(needle),
            response))

    # Unscripted questions fall back to honest don't-know answers.
    rules.extend([
        MockRule(_matcher("validator"),
                 json.dumps({"yes": False, "reason": "question not recognized"})),
        MockRule(_matcher("par_scope"), json.dumps({"scope": "unknown"})),
        MockRule(_matcher("par_granularity"), json.dumps({"granularity": "unknown"})),
        MockRule(_matcher("par_variants"), json.dumps({
            "success": False, "assembly_id": "unknown", "chromosome": "unknown",
            "start": "unknown", "end": "unknown"})),
        MockRule(_matcher("par_filters"), json.dumps({"filters": []})),
        MockRule(_matcher("ms_scope"), "unknown"),
        MockRule(_matcher("ms_granularity"), "unknown"),
        MockRule(_matcher("text2sql"), "SELECT * FROM GenomicVariations"),
    ])
    return MockScript(rules=rules, default="")


def rule_based_provider() -> LlmClient:
    """Provider answering the bundled dataset and walk-through questions."""
    return mock_client(build_script())
