from .dataset import EvalCase, FormatError, load_dataset, load_default_dataset, load_predictions
from .metrics import MetricsReport, MissingPrediction, evaluate, perfect_predictions
from .report import emit_report, load_report
from .rouge import rouge1_prf, tokenize

__all__ = [
    "EvalCase",
    "FormatError",
    "MetricsReport",
    "MissingPrediction",
    "emit_report",
    "evaluate",
    "load_dataset",
    "load_default_dataset",
    "load_predictions",
    "load_report",
    "perfect_predictions",
    "rouge1_prf",
    "tokenize",
]
