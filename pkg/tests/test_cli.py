from __future__ import annotations

import json
from importlib import resources

import pytest
from click.testing import CliRunner

from beaconql.cli import main
from beaconql.evalkit import load_default_dataset, perfect_predictions


@pytest.fixture()
def dataset_dir(tmp_path):
    source = resources.files("beaconql").joinpath("evalkit/data")
    for task in ("scope", "granularity", "variants", "filters", "invalids"):
        (tmp_path / f"{task}.tsv").write_text(
            source.joinpath(f"{task}.tsv").read_text())
    return tmp_path


@pytest.fixture()
def oracle_file(tmp_path):
    oracle = perfect_predictions(load_default_dataset())
    path = tmp_path / "oracle.json"
    path.write_text(json.dumps({"model": oracle.model, "predictions": oracle.by_case}))
    return path


class TestEvalCommands:
    def test_run_table(self, dataset_dir, oracle_file):
        runner = CliRunner()
        result = runner.invoke(main, ["eval", "run", "--dataset", str(dataset_dir),
                                      "--predictions", str(oracle_file)])
        assert result.exit_code == 0
        assert "Scope extraction" in result.output
        assert "oracle" in result.output

    def test_run_json(self, dataset_dir, oracle_file):
        runner = CliRunner()
        result = runner.invoke(main, ["eval", "run", "--dataset", str(dataset_dir),
                                      "--predictions", str(oracle_file),
                                      "--format", "json"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["models"][0]["tasks"]["scope"]["f1"] == 1.0

    def test_format_error_exits_2(self, tmp_path, oracle_file):
        (tmp_path / "scope.tsv").write_text("id\tquestion\tscope\nS1\tq\tbogus\n")
        runner = CliRunner()
        result = runner.invoke(main, ["eval", "run", "--dataset", str(tmp_path),
                                      "--predictions", str(oracle_file)])
        assert result.exit_code == 2

    def test_missing_prediction_exits_2(self, dataset_dir, tmp_path):
        partial = tmp_path / "partial.json"
        partial.write_text(json.dumps({"model": "m", "predictions": {}}))
        runner = CliRunner()
        result = runner.invoke(main, ["eval", "run", "--dataset", str(dataset_dir),
                                      "--predictions", str(partial)])
        assert result.exit_code == 2

    def test_score_derived_example(self):
        runner = CliRunner()
        result = runner.invoke(main, ["eval", "score", "--candidate", "chromosome 7",
                                      "--reference", "on chromosome 7"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["precision"] == pytest.approx(1.0)
        assert doc["recall"] == pytest.approx(2 / 3)
        assert doc["f1"] == pytest.approx(0.8)


class TestFixtureCommand:
    def test_regenerates_bundled_cohort(self, tmp_path):
        runner = CliRunner()
        out = tmp_path / "cohort.json"
        result = runner.invoke(main, ["fixture", "--out", str(out)])
        assert result.exit_code == 0
        shipped = resources.files("beaconql").joinpath("mockbeacon/data/cohort.json").read_text()
        assert out.read_text() == shipped
