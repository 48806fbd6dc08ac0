"""Report emission: human table or machine-stable JSON."""
from __future__ import annotations

import json

from .metrics import MetricsReport, ModelMetrics, TaskMetrics

_TASK_HEADS = (
    ("scope", "Scope extraction"),
    ("granularity", "Granularity extraction"),
    ("variants", "Variants extraction"),
    ("filters", "Filters extraction"),
    ("invalids", "Query validation"),
)

_METRIC_ROWS = (
    ("precision", "Precision"),
    ("recall", "Recall"),
    ("f1", "F1-score"),
    ("unknown_rate", "Unknown rate"),
    ("extraction_accuracy", "Extraction accuracy"),
    ("incompleteness", "Incompleteness"),
    ("hallucination_rate", "Hallucination rate"),
)


def _format_cell(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def emit_report(report: MetricsReport, format: str = "table") -> str:
    if format == "json":
        doc = {
            "models": [
                {
                    "model": model.model,
                    "tasks": {task: metrics.as_dict() for task, metrics in sorted(model.tasks.items())},
                }
                for model in report.models
            ]
        }
        return json.dumps(doc, indent=2, sort_keys=True)
    if format != "table":
        raise ValueError(f"unknown format {format!r}")

    headers = ["Model", "Metric"] + [head for _task, head in _TASK_HEADS]
    rows = [headers]
    for model in report.models:
        for key, label in _METRIC_ROWS:
            row = [model.model, label]
            for task, _head in _TASK_HEADS:
                metrics = model.tasks.get(task)
                row.append(_format_cell(getattr(metrics, key) if metrics else None))
            rows.append(row)
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    lines = []
    for index, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        if index == 0:
            lines.append("  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


def load_report(text: str) -> MetricsReport:
    doc = json.loads(text)
    models = []
    for entry in doc.get("models", []):
        tasks = {}
        for task, metrics in entry.get("tasks", {}).items():
            fields = {k: v for k, v in metrics.items()}
            tasks[task] = TaskMetrics(**fields)
        models.append(ModelMetrics(model=entry["model"], tasks=tasks))
    return MetricsReport(models=tuple(models))
