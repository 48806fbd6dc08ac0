"""Metrics over extraction predictions.

Scope/granularity labels score as ROUGE over label strings; variants score
field-wise with positions compared as normalized integers (never as ROUGE
strings, so "500k" vs "500000" cannot become a tokenization accident);
filter terms use a greedy descending-score injective assignment against
gold terms. Term-level rates follow from the same matching:

  extraction_accuracy   matched gold units / gold units
  incompleteness        missed gold units / gold units
  hallucination_rate    cases with >=1 predicted unit matching nothing
  unknown_rate          cases flagged unknown (over all cases)

The invalids task scores as rejection precision.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .dataset import EvalCase, PredictionSet
from .rouge import rouge1_prf

DEFAULT_MATCH_THRESHOLD = 0.5


class MissingPrediction(Exception):
    def __init__(self, case_id: str):
        super().__init__(f"no prediction for case {case_id!r}")
        self.case_id = case_id


@dataclass(frozen=True)
class TaskMetrics:
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    unknown_rate: float = 0.0
    extraction_accuracy: float = 0.0
    incompleteness: float = 0.0
    hallucination_rate: float = 0.0
    cases: int = 0

    def as_dict(self) -> dict[str, float]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "unknown_rate": self.unknown_rate,
            "extraction_accuracy": self.extraction_accuracy,
            "incompleteness": self.incompleteness,
            "hallucination_rate": self.hallucination_rate,
            "cases": self.cases,
        }


@dataclass(frozen=True)
class ModelMetrics:
    model: str
    tasks: dict[str, TaskMetrics] = field(default_factory=dict)


@dataclass(frozen=True)
class MetricsReport:
    models: tuple[ModelMetrics, ...] = ()


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _prf_sets(predicted: Sequence[str], gold: Sequence[str]) -> tuple[float, float, float, list[int], list[int]]:
    """Greedy best-match assignment; returns case P/R/F1 and matched indexes."""
    if not predicted and not gold:
        return 1.0, 1.0, 1.0, [], []
    if not predicted or not gold:
        return 0.0, 0.0, 0.0, [], []
    pairs = []
    for pi, pred in enumerate(predicted):
        for gi, ref in enumerate(gold):
            precision, recall, f1 = rouge1_prf(pred, ref)
            if f1 > 0:
                pairs.append((f1, precision, recall, pi, gi))
    pairs.sort(key=lambda item: (-item[0], item[3], item[4]))
    taken_pred: set[int] = set()
    taken_gold: set[int] = set()
    precision_sum = recall_sum = 0.0
    for f1, precision, recall, pi, gi in pairs:
        if pi in taken_pred or gi in taken_gold:
            continue
        taken_pred.add(pi)
        taken_gold.add(gi)
        precision_sum += precision
        recall_sum += recall
    case_p = precision_sum / len(predicted)
    case_r = recall_sum / len(gold)
    case_f = 2 * case_p * case_r / (case_p + case_r) if case_p + case_r > 0 else 0.0
    return case_p, case_r, case_f, sorted(taken_pred), sorted(taken_gold)


def _match_units(predicted: Sequence[str], gold: Sequence[str],
                 threshold: float) -> tuple[int, int]:
    """(matched gold count, hallucinated predicted count) at the threshold."""
    if not gold:
        return 0, len(predicted)
    pairs = []
    for pi, pred in enumerate(predicted):
        for gi, ref in enumerate(gold):
            f1 = rouge1_prf(pred, ref)[2]
            if f1 >= threshold:
                pairs.append((f1, pi, gi))
    pairs.sort(key=lambda item: (-item[0], item[1], item[2]))
    taken_pred: set[int] = set()
    taken_gold: set[int] = set()
    for _f1, pi, gi in pairs:
        if pi in taken_pred or gi in taken_gold:
            continue
        taken_pred.add(pi)
        taken_gold.add(gi)
    hallucinated = sum(
        1 for pi, pred in enumerate(predicted)
        if not any(rouge1_prf(pred, g)[2] >= threshold for g in gold)
    )
    return len(taken_gold), hallucinated


def _label_case(prediction: dict[str, Any], gold: str) -> dict[str, Any]:
    label = str(prediction.get("label", "") or "")
    unknown = bool(prediction.get("unknown", False)) or label == "unknown"
    effective = "" if unknown else label
    precision, recall, f1 = rouge1_prf(effective, gold)
    return {
        "prf": (precision, recall, f1),
        "unknown": unknown,
        "gold_units": 1,
        "matched_units": 1 if f1 >= 1.0 else 0,
        "hallucinated": 0 if unknown or f1 > 0 else 1,
    }


def _variant_field_score(pred_value: Any, gold_value: Any, numeric: bool) -> float | None:
    """1/0 per field; None when the field exists on neither side."""
    pred_missing = pred_value in (None, [], ())
    gold_missing = gold_value in (None, [], ())
    if pred_missing and gold_missing:
        return None
    if pred_missing or gold_missing:
        return 0.0
    if numeric:
        try:
            pred_norm = [int(v) for v in pred_value]
            gold_norm = [int(v) for v in gold_value]
        except (TypeError, ValueError):
            return 0.0
        return 1.0 if pred_norm == gold_norm else 0.0
    return 1.0 if str(pred_value).strip() == str(gold_value).strip() else 0.0


def _variants_case(prediction: dict[str, Any], gold: dict[str, Any]) -> dict[str, Any]:
    unknown = bool(prediction.get("unknown", False))
    fields = (
        ("chrom", False),
        ("start", True),
        ("end", True),
    )
    scores = []
    gold_units = 0
    matched = 0
    hallucinated = 0
    for name, numeric in fields:
        pred_value = None if unknown else prediction.get(name)
        gold_value = gold.get(name)
        score = _variant_field_score(pred_value, gold_value, numeric)
        if score is not None:
            scores.append(score)
        gold_present = gold_value not in (None, [], ())
        pred_present = pred_value not in (None, [], ())
        if gold_present:
            gold_units += 1
            if score == 1.0:
                matched += 1
        elif pred_present:
            hallucinated += 1
    value = _mean(scores) if scores else 1.0
    return {
        "prf": (value, value, value),
        "unknown": unknown,
        "gold_units": gold_units,
        "matched_units": matched,
        "hallucinated": hallucinated,
    }


def _filters_case(prediction: dict[str, Any], gold: list[dict[str, str]],
                  threshold: float) -> dict[str, Any]:
    unknown = bool(prediction.get("unknown", False))
    predicted_terms = [] if unknown else [
        str(item.get("term", "")) for item in prediction.get("terms", [])
    ]
    gold_terms = [item["term"] for item in gold]
    precision, recall, f1, _mp, _mg = _prf_sets(predicted_terms, gold_terms)
    matched, hallucinated = _match_units(predicted_terms, gold_terms, threshold)
    return {
        "prf": (precision, recall, f1),
        "unknown": unknown,
        "gold_units": len(gold_terms),
        "matched_units": matched,
        "hallucinated": hallucinated,
    }


def _invalids_case(prediction: dict[str, Any]) -> dict[str, Any]:
    rejected = bool(prediction.get("rejected", False))
    score = 1.0 if rejected else 0.0
    return {
        "prf": (score, score, score),
        "unknown": False,
        "gold_units": 1,
        "matched_units": 1 if rejected else 0,
        "hallucinated": 0,
    }


def _score_case(case: EvalCase, prediction: dict[str, Any], threshold: float) -> dict[str, Any]:
    if case.task in ("scope", "granularity"):
        return _label_case(prediction, case.gold)
    if case.task == "variants":
        return _variants_case(prediction, case.gold)
    if case.task == "filters":
        return _filters_case(prediction, case.gold, threshold)
    return _invalids_case(prediction)


def _aggregate(rows: list[dict[str, Any]]) -> TaskMetrics:
    gold_units = sum(row["gold_units"] for row in rows)
    matched = sum(row["matched_units"] for row in rows)
    return TaskMetrics(
        precision=_mean([row["prf"][0] for row in rows]),
        recall=_mean([row["prf"][1] for row in rows]),
        f1=_mean([row["prf"][2] for row in rows]),
        unknown_rate=_mean([1.0 if row["unknown"] else 0.0 for row in rows]),
        extraction_accuracy=(matched / gold_units) if gold_units else 1.0,
        incompleteness=((gold_units - matched) / gold_units) if gold_units else 0.0,
        hallucination_rate=_mean([1.0 if row["hallucinated"] else 0.0 for row in rows]),
        cases=len(rows),
    )


def evaluate(dataset: Sequence[EvalCase],
             prediction_sets: Iterable[PredictionSet],
             match_threshold: float = DEFAULT_MATCH_THRESHOLD) -> MetricsReport:
    models = []
    for predictions in prediction_sets:
        per_task: dict[str, list[dict[str, Any]]] = {}
        for case in dataset:
            if case.id not in predictions.by_case:
                raise MissingPrediction(case.id)
            row = _score_case(case, predictions.by_case[case.id], match_threshold)
            per_task.setdefault(case.task, []).append(row)
        models.append(ModelMetrics(
            model=predictions.model,
            tasks={task: _aggregate(rows) for task, rows in sorted(per_task.items())},
        ))
    return MetricsReport(models=tuple(models))


def perfect_predictions(dataset: Sequence[EvalCase], model: str = "oracle") -> PredictionSet:
    """Prediction file derived from the gold labels (testing and demos)."""
    by_case: dict[str, dict[str, Any]] = {}
    for case in dataset:
        if case.task in ("scope", "granularity"):
            by_case[case.id] = {"label": case.gold}
        elif case.task == "variants":
            by_case[case.id] = {"chrom": case.gold["chrom"], "start": case.gold["start"],
                                "end": case.gold["end"]}
        elif case.task == "filters":
            by_case[case.id] = {"terms": [dict(item) for item in case.gold]}
        else:
            by_case[case.id] = {"rejected": True}
    return PredictionSet(model=model, by_case=by_case)
