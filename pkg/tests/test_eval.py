from __future__ import annotations

import json
import re
from random import Random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from beaconql.evalkit import (
    EvalCase,
    FormatError,
    MissingPrediction,
    emit_report,
    evaluate,
    load_dataset,
    load_default_dataset,
    load_predictions,
    load_report,
    perfect_predictions,
    rouge1_prf,
)
from beaconql.evalkit.dataset import PredictionSet


def oracle_rouge1(candidate: str, reference: str):
    """Brute force: for every candidate token occurrence, consume one
    matching reference occurrence if any remains. Shares no code with the
    implementation under test."""
    cand = re.findall(r"[a-z0-9]+", candidate.lower())
    ref = re.findall(r"[a-z0-9]+", reference.lower())
    if not cand and not ref:
        return (1.0, 1.0, 1.0)
    if not cand or not ref:
        return (0.0, 0.0, 0.0)
    pool = list(ref)
    matched = 0
    for token in cand:
        if token in pool:
            pool.remove(token)
            matched += 1
    precision = matched / len(cand)
    recall = matched / len(ref)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return (precision, recall, f1)


WORDS = ["chromosome", "7", "on", "variant", "cancer", "colon", "the", "gene",
         "egfr", "500k", "x", "disease"]


class TestRouge:
    def test_identity(self):
        assert rouge1_prf("chromosome 7", "chromosome 7") == (1.0, 1.0, 1.0)

    def test_derived_example(self):
        precision, recall, f1 = rouge1_prf("chromosome 7", "on chromosome 7")
        assert precision == pytest.approx(1.0)
        assert recall == pytest.approx(0.6667, abs=1e-4)
        assert f1 == pytest.approx(0.8, abs=1e-4)

    def test_disjoint(self):
        assert rouge1_prf("apple", "banana") == (0.0, 0.0, 0.0)

    def test_empty_conventions(self):
        assert rouge1_prf("", "") == (1.0, 1.0, 1.0)
        assert rouge1_prf("a", "") == (0.0, 0.0, 0.0)
        assert rouge1_prf("", "a") == (0.0, 0.0, 0.0)

    def test_clipped_counts(self):
        # "7 7" can match the single reference "7" only once.
        precision, recall, _ = rouge1_prf("7 7", "7")
        assert precision == pytest.approx(0.5)
        assert recall == pytest.approx(1.0)

    def test_500_random_pairs_match_oracle(self):
        rng = Random(99)
        for _ in range(500):
            a = " ".join(rng.choices(WORDS, k=rng.randrange(0, 8)))
            b = " ".join(rng.choices(WORDS, k=rng.randrange(0, 8)))
            got = rouge1_prf(a, b)
            want = oracle_rouge1(a, b)
            assert got == pytest.approx(want), (a, b)

    @given(st.text(max_size=30), st.text(max_size=30))
    def test_symmetry_precision_recall(self, a, b):
        assert rouge1_prf(a, b)[0] == pytest.approx(rouge1_prf(b, a)[1])

    @given(st.text(max_size=30), st.text(max_size=30))
    def test_harmonic_mean_identity(self, a, b):
        precision, recall, f1 = rouge1_prf(a, b)
        expected = 0.0 if precision + recall == 0 else \
            2 * precision * recall / (precision + recall)
        assert f1 == pytest.approx(expected)


class TestDatasetLoading:
    def test_default_dataset_counts(self):
        cases = load_default_dataset()
        by_task = {}
        for case in cases:
            by_task[case.task] = by_task.get(case.task, 0) + 1
        assert by_task == {"scope": 15, "granularity": 10, "variants": 10,
                           "filters": 10, "invalids": 5}
        assert len(cases) == 50

    def test_bad_label_is_format_error(self, tmp_path):
        (tmp_path / "scope.tsv").write_text("id\tquestion\tscope\nS1\tq\tpeople\n")
        with pytest.raises(FormatError):
            load_dataset(tmp_path)

    def test_wrong_shape_is_format_error(self, tmp_path):
        (tmp_path / "scope.tsv").write_text("id\tquestion\tscope\nS1\tq\t7\t100\t200\n")
        with pytest.raises(FormatError):
            load_dataset(tmp_path)

    def test_empty_file_is_format_error(self, tmp_path):
        (tmp_path / "scope.tsv").write_text("")
        with pytest.raises(FormatError):
            load_dataset(tmp_path)

    def test_empty_directory_is_format_error(self, tmp_path):
        with pytest.raises(FormatError):
            load_dataset(tmp_path)

    def test_error_carries_row_number(self, tmp_path):
        (tmp_path / "scope.tsv").write_text(
            "id\tquestion\tscope\nS1\tq\tindividuals\nS2\tq\tnope\n")
        with pytest.raises(FormatError) as excinfo:
            load_dataset(tmp_path)
        assert excinfo.value.row == 3


class TestEvaluate:
    def test_perfect_oracle_scores_ones(self):
        dataset = load_default_dataset()
        report = evaluate(dataset, [perfect_predictions(dataset)])
        for task, metrics in report.models[0].tasks.items():
            assert metrics.precision == pytest.approx(1.0), task
            assert metrics.recall == pytest.approx(1.0), task
            assert metrics.f1 == pytest.approx(1.0), task
            assert metrics.unknown_rate == 0.0
            assert metrics.extraction_accuracy == pytest.approx(1.0)
            assert metrics.incompleteness == pytest.approx(0.0)
            assert metrics.hallucination_rate == 0.0

    def test_degraded_fixture_exact_rates(self):
        dataset = [
            EvalCase(f"C{i}", "filters", f"q{i}",
                     [{"term": term, "scope": "individuals"}])
            for i, term in enumerate(
                ["asthma", "migraine", "colon cancer", "parkinson disease",
                 "lactose intolerance"])
        ]
        by_case = {
            "C0": {"terms": [{"term": "asthma", "scope": "individuals"}]},
            "C1": {"terms": [{"term": "migraine", "scope": "individuals"}]},
            # one extra term matching nothing -> the hallucinating case
            "C2": {"terms": [{"term": "colon cancer", "scope": "individuals"},
                             {"term": "purple elephants", "scope": "individuals"}]},
            "C3": {"terms": [{"term": "parkinson disease", "scope": "individuals"}]},
            # one missed gold term
            "C4": {"terms": []},
        }
        report = evaluate(dataset, [PredictionSet("degraded", by_case)])
        metrics = report.models[0].tasks["filters"]
        assert metrics.extraction_accuracy == pytest.approx(0.8)
        assert metrics.incompleteness == pytest.approx(0.2)
        assert metrics.hallucination_rate == pytest.approx(0.2)

    def test_missing_prediction_named(self):
        dataset = load_default_dataset()
        broken = perfect_predictions(dataset)
        del broken.by_case["S01"]
        with pytest.raises(MissingPrediction) as excinfo:
            evaluate(dataset, [broken])
        assert excinfo.value.case_id == "S01"

    def test_unknown_rate_counts_flags(self):
        dataset = [EvalCase("A", "scope", "q", "individuals"),
                   EvalCase("B", "scope", "q2", "runs")]
        predictions = PredictionSet("m", {
            "A": {"label": "unknown"},
            "B": {"label": "runs"},
        })
        metrics = evaluate(dataset, [predictions]).models[0].tasks["scope"]
        assert metrics.unknown_rate == pytest.approx(0.5)

    def test_numeric_fields_compared_as_integers(self):
        dataset = [EvalCase("V", "variants", "q",
                            {"chrom": "7", "start": [500000], "end": [510000]})]
        predictions = PredictionSet("m", {
            "V": {"chrom": "7", "start": ["500000"], "end": ["510000"]}})
        metrics = evaluate(dataset, [predictions]).models[0].tasks["variants"]
        assert metrics.f1 == pytest.approx(1.0)

    def test_invalids_scored_as_rejection_precision(self):
        dataset = [EvalCase("I1", "invalids", "pizza?", False),
                   EvalCase("I2", "invalids", "jokes?", False)]
        predictions = PredictionSet("m", {"I1": {"rejected": True},
                                          "I2": {"rejected": False}})
        metrics = evaluate(dataset, [predictions]).models[0].tasks["invalids"]
        assert metrics.precision == pytest.approx(0.5)

    def test_greedy_matching_is_injective(self):
        dataset = [EvalCase("F", "filters", "q",
                            [{"term": "colon cancer", "scope": "individuals"}])]
        # Two identical predicted terms cannot both match the single gold.
        predictions = PredictionSet("m", {"F": {"terms": [
            {"term": "colon cancer", "scope": "individuals"},
            {"term": "colon cancer", "scope": "individuals"}]}})
        metrics = evaluate(dataset, [predictions]).models[0].tasks["filters"]
        assert metrics.precision == pytest.approx(0.5)
        assert metrics.recall == pytest.approx(1.0)

    def test_random_prediction_fuzz_keeps_metrics_in_unit_interval(self):
        dataset = load_default_dataset()
        rng = Random(4242)
        labels = ["individuals", "biosamples", "runs", "g_variants", "unknown",
                  "record", "count", "boolean"]
        for trial in range(1000):
            by_case = {}
            for case in dataset:
                roll = rng.random()
                if case.task in ("scope", "granularity"):
                    by_case[case.id] = {"label": rng.choice(labels),
                                        "unknown": roll < 0.2}
                elif case.task == "variants":
                    by_case[case.id] = {
                        "chrom": rng.choice(["7", "1", None]),
                        "start": rng.choice([[], [rng.randrange(10**6)]]),
                        "end": rng.choice([[], [rng.randrange(10**6)]]),
                        "unknown": roll < 0.1,
                    }
                elif case.task == "filters":
                    by_case[case.id] = {"terms": [
                        {"term": " ".join(rng.choices(WORDS, k=2)), "scope": "individuals"}
                        for _ in range(rng.randrange(0, 3))]}
                else:
                    by_case[case.id] = {"rejected": rng.random() < 0.5}
            report = evaluate(dataset, [PredictionSet(f"fuzz{trial}", by_case)])
            for metrics in report.models[0].tasks.values():
                for value in (metrics.precision, metrics.recall, metrics.f1,
                              metrics.unknown_rate, metrics.extraction_accuracy,
                              metrics.incompleteness, metrics.hallucination_rate):
                    assert 0.0 <= value <= 1.0


class TestReport:
    def test_table_has_task_columns(self):
        dataset = load_default_dataset()
        report = evaluate(dataset, [perfect_predictions(dataset)])
        table = emit_report(report, format="table")
        for head in ("Scope extraction", "Granularity extraction", "Variants extraction",
                     "Filters extraction", "Query validation"):
            assert head in table

    def test_json_round_trips_through_loader(self):
        dataset = load_default_dataset()
        report = evaluate(dataset, [perfect_predictions(dataset)])
        assert load_report(emit_report(report, format="json")) == report

    def test_empty_report_is_header_only(self):
        from beaconql.evalkit.metrics import MetricsReport
        table = emit_report(MetricsReport(), format="table")
        assert table.count("\n") == 2  # header + underline
        assert "Model" in table

    def test_predictions_file_round_trip(self, tmp_path):
        dataset = load_default_dataset()
        oracle = perfect_predictions(dataset)
        path = tmp_path / "oracle.json"
        path.write_text(json.dumps({"model": oracle.model, "predictions": oracle.by_case}))
        assert load_predictions(path) == oracle
