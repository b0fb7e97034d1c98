import json
from pathlib import Path

import pytest

from stc import synthetic
from stc.cli import main
from stc.config import ConfigError, load_config
from stc.corpus import save_jsonl


@pytest.fixture
def corpus_file(tmp_path):
    spec = synthetic.SyntheticSpec(
        n_categories=2, docs_per_class=15, sentences_per_doc=3,
        keyword_positions=(1, 2), noise_vocab_size=8, seed=4,
    )
    path = tmp_path / "corpus.jsonl"
    save_jsonl(synthetic.generate(spec), path)
    return path


@pytest.fixture
def config_file(tmp_path, corpus_file):
    config = {
        "corpus": str(corpus_file),
        "mode": "mono",
        "seed": 5,
        "output_dir": str(tmp_path / "out"),
        "fractions": [0.5],
        "n_runs": 1,
        "stc": {"n_states": 150, "iterations": 2, "epochs": 3, "lambda_grid": [1e-3]},
        "baseline": {"epochs": 3, "lambda_grid": [1e-3]},
        "histogram": {"fraction": 0.5, "bins": 5},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


class TestConfig:
    def test_load_valid(self, config_file):
        cfg = load_config(config_file)
        assert cfg.mode == "mono"
        assert cfg.fractions == (0.5,)
        assert cfg.stc_n_states == 150

    def test_unknown_top_level_key(self, tmp_path, config_file):
        raw = json.loads(config_file.read_text())
        raw["n_run"] = 3  # typo
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(raw))
        with pytest.raises(ConfigError, match="n_run"):
            load_config(bad)

    def test_unknown_nested_key(self, tmp_path, config_file):
        raw = json.loads(config_file.read_text())
        raw["stc"]["rollouts"] = 2  # typo for rollouts_per_state
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(raw))
        with pytest.raises(ConfigError, match="config.stc"):
            load_config(bad)

    def test_seed_required(self, tmp_path, config_file):
        raw = json.loads(config_file.read_text())
        del raw["seed"]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(raw))
        with pytest.raises(ConfigError, match="seed"):
            load_config(bad)

    def test_missing_corpus_path(self, tmp_path, config_file):
        raw = json.loads(config_file.read_text())
        raw["corpus"] = str(tmp_path / "nope.jsonl")
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(raw))
        with pytest.raises(ConfigError, match="does not exist"):
            load_config(bad)

    def test_overrides_beat_file(self, config_file):
        cfg = load_config(config_file, overrides={"seed": 99})
        assert cfg.seed == 99

    def test_bad_fraction(self, tmp_path, config_file):
        raw = json.loads(config_file.read_text())
        raw["fractions"] = [1.5]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(raw))
        with pytest.raises(ConfigError, match="fractions"):
            load_config(bad)


class TestConvert:
    def test_cardoso_roundtrip(self, tmp_path, capsys):
        train = tmp_path / "train.txt"
        test = tmp_path / "test.txt"
        train.write_text("earn\tprofits rose. costs fell.\nacq\tmerger done.\n", encoding="utf-8")
        test.write_text("earn\tdividends up.\n", encoding="utf-8")
        out = tmp_path / "corpus.jsonl"
        code = main(["convert", "--layout", "cardoso", "--train", str(train),
                     "--test", str(test), "--out", str(out)])
        assert code == 0
        assert "3 documents" in capsys.readouterr().out
        assert out.exists()

    def test_dirs_by_class(self, tmp_path, capsys):
        for cls in ("spam", "ham"):
            d = tmp_path / "data" / cls
            d.mkdir(parents=True)
            (d / "a.txt").write_text(f"text about {cls}. more text.", encoding="utf-8")
        out = tmp_path / "corpus.jsonl"
        code = main(["convert", "--layout", "dirs-by-class", "--root", str(tmp_path / "data"),
                     "--out", str(out)])
        assert code == 0
        assert "2 categories" in capsys.readouterr().out

    def test_missing_input_is_validation_error(self, tmp_path):
        code = main(["convert", "--layout", "cardoso", "--train", str(tmp_path / "no.txt"),
                     "--test", str(tmp_path / "no2.txt"), "--out", str(tmp_path / "o.jsonl")])
        assert code == 1

    def test_empty_input_dir_is_validation_error(self, tmp_path):
        (tmp_path / "empty").mkdir()
        code = main(["convert", "--layout", "dirs-by-class", "--root", str(tmp_path / "empty"),
                     "--out", str(tmp_path / "o.jsonl")])
        assert code == 1


class TestTrainEvaluateTrace:
    def test_baseline_train_then_evaluate(self, config_file, tmp_path, capsys):
        assert main(["train", "--config", str(config_file), "--method", "baseline"]) == 0
        model = tmp_path / "out" / "baseline.model.json"
        assert model.exists()
        assert main(["evaluate", "--config", str(config_file), "--model", str(model)]) == 0
        out = capsys.readouterr().out
        assert "micro_f1" in out
        assert (tmp_path / "out" / "metrics_baseline.json").exists()

    def test_stc_train_writes_telemetry_and_trace_runs(self, config_file, corpus_file, tmp_path, capsys):
        assert main(["train", "--config", str(config_file), "--method", "stc"]) == 0
        model = tmp_path / "out" / "stc.model.json"
        telemetry = tmp_path / "out" / "telemetry.jsonl"
        assert model.exists() and telemetry.exists()
        records = [json.loads(line) for line in telemetry.read_text().splitlines()]
        assert all(
            set(r) == {"iteration", "n_examples", "n_skipped_states", "mean_episode_reward"}
            for r in records
        )
        capsys.readouterr()

        doc_id = json.loads(corpus_file.read_text().splitlines()[0])["id"]
        assert main(["trace", "--model", str(model), "--corpus", str(corpus_file),
                     "--doc-id", doc_id]) == 0
        out = capsys.readouterr().out
        assert "step 1:" in out and "reward:" in out

    def test_train_rerun_is_byte_identical(self, config_file, tmp_path):
        assert main(["train", "--config", str(config_file), "--method", "baseline"]) == 0
        first = (tmp_path / "out" / "baseline.model.json").read_bytes()
        assert main(["train", "--config", str(config_file), "--method", "baseline"]) == 0
        second = (tmp_path / "out" / "baseline.model.json").read_bytes()
        assert first == second

    def test_evaluate_checksum_mismatch_fails(self, config_file, tmp_path, corpus_file):
        assert main(["train", "--config", str(config_file), "--method", "baseline"]) == 0
        model = tmp_path / "out" / "baseline.model.json"
        record = json.loads(model.read_text())
        record["vocab_checksum"] = "0" * 64
        model.write_text(json.dumps(record))
        assert main(["evaluate", "--config", str(config_file), "--model", str(model)]) == 2

    def test_trace_unknown_doc_id(self, config_file, corpus_file, tmp_path):
        assert main(["train", "--config", str(config_file), "--method", "stc"]) == 0
        model = tmp_path / "out" / "stc.model.json"
        code = main(["trace", "--model", str(model), "--corpus", str(corpus_file),
                     "--doc-id", "does-not-exist"])
        assert code == 1

    def test_invalid_config_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert main(["train", "--config", str(bad), "--method", "stc"]) == 1


class TestExperimentCommand:
    def test_experiment_writes_reports(self, config_file, tmp_path, capsys):
        assert main(["experiment", "--config", str(config_file)]) == 0
        out_dir = tmp_path / "out"
        for name in ("cells.csv", "aggregate.csv", "report.json", "reading_histogram.csv"):
            assert (out_dir / name).exists(), name
        histogram = (out_dir / "reading_histogram.csv").read_text().splitlines()
        assert histogram[0] == "bin_lo,bin_hi,count"

    def test_experiment_rerun_byte_identical(self, config_file, tmp_path):
        assert main(["experiment", "--config", str(config_file)]) == 0
        out_dir = tmp_path / "out"
        first = {p.name: p.read_bytes() for p in out_dir.iterdir() if p.suffix in (".csv", ".json")}
        assert main(["experiment", "--config", str(config_file)]) == 0
        second = {p.name: p.read_bytes() for p in out_dir.iterdir() if p.suffix in (".csv", ".json")}
        assert first == second
