"""Evaluation dataset and prediction file loading.

One UTF-8 tab-delimited file per task, each with a header row:

  scope.tsv        id  question  scope
  granularity.tsv  id  question  granularity
  variants.tsv     id  question  chrom  start  end   (positions space-separated)
  filters.tsv      id  question  filters               (term~scope;term~scope)
  invalids.tsv     id  question

Predictions are one JSON file per model:
``{"model": name, "predictions": {case_id: {...task-shaped fields...}}}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

TASKS = ("scope", "granularity", "variants", "filters", "invalids")

_SCOPES = ("individuals", "biosamples", "runs", "analyses", "datasets", "cohorts", "g_variants")
_GRANULARITIES = ("record", "count", "boolean")


class FormatError(Exception):
    def __init__(self, message: str, row: int | None = None, filename: str = ""):
        where = f"{filename}:{row}" if row is not None else filename
        super().__init__(f"{where}: {message}" if where else message)
        self.row = row


@dataclass(frozen=True)
class EvalCase:
    id: str
    task: str
    question: str
    gold: Any   # task-shaped; see loaders below


def _positions(raw: str, filename: str, row: int) -> tuple[int, ...]:
    raw = raw.strip()
    if not raw:
        return ()
    try:
        return tuple(int(token) for token in raw.split())
    except ValueError:
        raise FormatError(f"bad positions {raw!r}", row, filename) from None


def _parse_filters(raw: str, filename: str, row: int) -> tuple[dict[str, str], ...]:
    out = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "~" not in chunk:
            raise FormatError(f"filter {chunk!r} must be term~scope", row, filename)
        term, scope = chunk.split("~", 1)
        if scope not in _SCOPES:
            raise FormatError(f"bad filter scope {scope!r}", row, filename)
        out.append({"term": term, "scope": scope})
    return tuple(out)


def _read_rows(path: Path, expected_columns: int) -> list[tuple[int, list[str]]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError("empty file", None, path.name)
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != expected_columns:
            raise FormatError(
                f"expected {expected_columns} columns, got {len(cells)}", number, path.name)
        rows.append((number, cells))
    if not rows:
        raise FormatError("no data rows", None, path.name)
    return rows


def _load_task(path: Path, task: str) -> list[EvalCase]:
    cases = []
    if task == "scope":
        for row, (case_id, question, label) in ((n, c) for n, c in _read_rows(path, 3)):
            if label not in _SCOPES:
                raise FormatError(f"bad scope label {label!r}", row, path.name)
            cases.append(EvalCase(case_id, task, question, label))
    elif task == "granularity":
        for row, (case_id, question, label) in ((n, c) for n, c in _read_rows(path, 3)):
            if label not in _GRANULARITIES:
                raise FormatError(f"bad granularity label {label!r}", row, path.name)
            cases.append(EvalCase(case_id, task, question, label))
    elif task == "variants":
        for row, (case_id, question, chrom, start, end) in ((n, c) for n, c in _read_rows(path, 5)):
            gold = {
                "chrom": chrom.strip() or None,
                "start": list(_positions(start, path.name, row)),
                "end": list(_positions(end, path.name, row)),
            }
            cases.append(EvalCase(case_id, task, question, gold))
    elif task == "filters":
        for row, (case_id, question, raw) in ((n, c) for n, c in _read_rows(path, 3)):
            cases.append(EvalCase(case_id, task, question,
                                  list(_parse_filters(raw, path.name, row))))
    elif task == "invalids":
        for _row, (case_id, question) in ((n, c) for n, c in _read_rows(path, 2)):
            cases.append(EvalCase(case_id, task, question, False))
    else:
        raise FormatError(f"unknown task {task!r}", None, path.name)
    return cases


def load_dataset(path: str | Path) -> list[EvalCase]:
    """Load every per-task file found under a dataset directory."""
    directory = Path(path)
    cases: list[EvalCase] = []
    found = False
    for task in TASKS:
        file = directory / f"{task}.tsv"
        if file.exists():
            found = True
            cases.extend(_load_task(file, task))
    if not found:
        raise FormatError(f"no task files in {directory}")
    seen = set()
    for case in cases:
        if case.id in seen:
            raise FormatError(f"duplicate case id {case.id!r}")
        seen.add(case.id)
    return cases


def load_default_dataset() -> list[EvalCase]:
    base = resources.files("beaconql").joinpath("evalkit/data")
    with resources.as_file(base) as directory:
        return load_dataset(directory)


@dataclass(frozen=True)
class PredictionSet:
    model: str
    by_case: dict[str, dict[str, Any]]


def load_predictions(path: str | Path) -> PredictionSet:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}", None, path.name) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("predictions"), dict):
        raise FormatError("expected {model, predictions} object", None, path.name)
    return PredictionSet(model=str(doc.get("model", path.stem)),
                         by_case=doc["predictions"])
