"""
End-to-end tests of the ``mfdh`` command line over the synthetic dataset.
"""

import json

import pytest

from app.infrastructure.code_store import read_codes
from app.main import build_parser, main


def metrics(directory, task):
    return json.loads((directory / f"metrics_{task}.json").read_text())


class TestParser:
    @pytest.mark.parametrize(
        "argv",
        [
            ["train", "--config", "c.json"],
            ["encode", "--model", "m", "--descriptors", "d", "--modality", "image", "--out", "o"],
            ["search", "--query-codes", "q", "--db-codes", "d", "--out", "o"],
            ["eval", "--query-codes", "q", "--db-codes", "d", "--query-labels", "a",
             "--db-labels", "b", "--task", "I2T", "--out", "o"],
            ["synth", "--out", "o"],
        ],
    )
    def test_subcommands(self, argv):
        assert build_parser().parse_args(argv).command == argv[0]

    def test_search_modes_are_exclusive(self):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(
                ["search", "--query-codes", "q", "--db-codes", "d", "--out", "o", "--top-r", "3", "--radius", "1"]
            )
        assert info.value.code == 2


@pytest.mark.integration
class TestTrain:
    def test_outputs(self, trained_dir):
        for name in (
            "model.mfdh", "image_dictionary.csv", "text_dictionary.csv", "train_image.codes",
            "train_text.codes", "train_B.codes", "query_image.codes", "query_text.codes",
            "training_report.json",
        ):
            assert (trained_dir / name).exists(), name
        report = json.loads((trained_dir / "training_report.json").read_text())
        trace = report["objective_trace"]
        assert all(b <= a + 1e-9 * abs(a) for a, b in zip(trace, trace[1:]))
        assert report["code_length"] == 16 and report["n_samples"] == 300
        assert report["converged"] and report["iterations"] <= 50
        assert len(report["evaluation"]) == 4

    @pytest.mark.slow
    def test_synthetic_classes_are_retrieved(self, trained_dir):
        random_baseline = 1 / 3
        for task in ("I2T", "T2I", "I2I", "T2T"):
            document = metrics(trained_dir, task)
            assert document["map"] >= 0.9, task
            assert document["map"] >= 2.5 * random_baseline, task
            assert document["n_queries"] == 90 and document["n_database"] == 300
            assert document["pr_curve"][-1]["recall"] == pytest.approx(1.0)

    def test_rerun_is_byte_identical(self, synthetic_dir, trained_dir, tmp_path):
        out_dir = tmp_path / "again"
        assert main(["train", "--config", str(synthetic_dir / "config.json"), "--out", str(out_dir)]) == 0
        assert (out_dir / "model.mfdh").read_bytes() == (trained_dir / "model.mfdh").read_bytes()
        assert (out_dir / "train_B.codes").read_text() == (trained_dir / "train_B.codes").read_text()

    def test_zero_iterations(self, synthetic_dir, tmp_path):
        config = json.loads((synthetic_dir / "config.json").read_text())
        config["train"]["max_outer_iters"] = 0
        path = synthetic_dir / "config_no_iters.json"
        path.write_text(json.dumps(config))
        out_dir = tmp_path / "init"
        assert main(["train", "--config", str(path), "--out", str(out_dir)]) == 0
        report = json.loads((out_dir / "training_report.json").read_text())
        assert report["iterations"] == 0 and len(report["objective_trace"]) == 1

    def test_malformed_config(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"paths": {"image_descriptors": 3}}')
        assert main(["train", "--config", str(path)]) == 2
        path.write_text("{")
        assert main(["train", "--config", str(path)]) == 2

    def test_missing_config(self, tmp_path):
        assert main(["train", "--config", str(tmp_path / "nope.json")]) == 2


@pytest.mark.integration
class TestEncodeSearchEval:
    def test_encode_matches_training_codes(self, synthetic_dir, trained_dir, tmp_path):
        out = tmp_path / "img.codes"
        code = main([
            "encode", "--model", str(trained_dir / "model.mfdh"),
            "--descriptors", str(synthetic_dir / "train_image.desc"), "--modality", "image", "--out", str(out),
        ])
        assert code == 0
        assert out.read_text() == (trained_dir / "train_image.codes").read_text()

    def test_dimension_mismatch(self, synthetic_dir, trained_dir, tmp_path):
        code = main([
            "encode", "--model", str(trained_dir / "model.mfdh"),
            "--descriptors", str(synthetic_dir / "train_text.desc"), "--modality", "image",
            "--out", str(tmp_path / "x.codes"),
        ])
        assert code == 2
        assert not (tmp_path / "x.codes").exists()

    def test_empty_descriptor_file(self, trained_dir, tmp_path):
        descriptors = tmp_path / "empty.desc"
        descriptors.write_text("MFDH-DESC v1 dim=8\n")
        out = tmp_path / "empty.codes"
        code = main([
            "encode", "--model", str(trained_dir / "model.mfdh"),
            "--descriptors", str(descriptors), "--modality", "image", "--out", str(out),
        ])
        assert code == 0
        index = read_codes(out)
        assert len(index) == 0 and index.length == 16

    def test_search_ranked_and_radius(self, trained_dir, tmp_path):
        ranked = tmp_path / "ranked.tsv"
        assert main([
            "search", "--query-codes", str(trained_dir / "query_image.codes"),
            "--db-codes", str(trained_dir / "train_text.codes"), "--top-r", "5", "--out", str(ranked),
        ]) == 0
        rows = [line.split("\t") for line in ranked.read_text().splitlines()]
        assert rows[0] == ["query_id", "rank", "db_id", "distance"]
        assert len(rows) == 1 + 90 * 5
        first_query = [row for row in rows[1:] if row[0] == rows[1][0]]
        assert [int(row[1]) for row in first_query] == [1, 2, 3, 4, 5]
        distances = [int(row[3]) for row in first_query]
        assert distances == sorted(distances)

        within = tmp_path / "radius.tsv"
        assert main([
            "search", "--query-codes", str(trained_dir / "query_image.codes"),
            "--db-codes", str(trained_dir / "train_text.codes"), "--radius", "2", "--out", str(within),
        ]) == 0
        assert all(int(line.split("\t")[3]) <= 2 for line in within.read_text().splitlines()[1:])

        assert main([
            "search", "--query-codes", str(trained_dir / "query_image.codes"),
            "--db-codes", str(trained_dir / "train_text.codes"), "--radius", "17", "--out", str(within),
        ]) == 2

    @pytest.mark.parametrize("mode", [[], ["--top-r", "5"], ["--radius", "16"]])
    def test_search_empty_database(self, trained_dir, tmp_path, mode):
        database = tmp_path / "empty.codes"
        database.write_text("MFDH-CODES v1 L=16 n=0\n")
        out = tmp_path / "hits.tsv"
        assert main([
            "search", "--query-codes", str(trained_dir / "query_image.codes"),
            "--db-codes", str(database), "--out", str(out), *mode,
        ]) == 0
        assert out.read_text() == "query_id\trank\tdb_id\tdistance\n"

    def test_search_invalid_top_r_on_empty_database(self, trained_dir, tmp_path):
        database = tmp_path / "empty.codes"
        database.write_text("MFDH-CODES v1 L=16 n=0\n")
        assert main([
            "search", "--query-codes", str(trained_dir / "query_image.codes"),
            "--db-codes", str(database), "--top-r", "0", "--out", str(tmp_path / "hits.tsv"),
        ]) == 2

    def test_eval_reproduces_the_training_metrics(self, synthetic_dir, trained_dir, tmp_path, capsys):
        out = tmp_path / "i2t.json"
        assert main([
            "eval", "--query-codes", str(trained_dir / "query_image.codes"),
            "--db-codes", str(trained_dir / "train_text.codes"),
            "--query-labels", str(synthetic_dir / "query_labels.txt"),
            "--db-labels", str(synthetic_dir / "train_labels.txt"),
            "--task", "I2T", "--model", str(trained_dir / "model.mfdh"), "--out", str(out),
        ]) == 0
        assert "I2T MAP@300" in capsys.readouterr().out
        document = json.loads(out.read_text())
        assert document["map"] == pytest.approx(metrics(trained_dir, "I2T")["map"], abs=1e-12)
        assert document["relevance"] == "single_label"
        assert out.with_suffix(".tsv").read_text().startswith("r\tprecision\trecall\n")


class TestSynth:
    def test_writes_a_trainable_dataset(self, tmp_path, capsys):
        assert main(["synth", "--out", str(tmp_path / "data"), "--seed", "3"]) == 0
        assert "300 train / 90 query" in capsys.readouterr().out
        config = json.loads((tmp_path / "data" / "config.json").read_text())
        assert config["seed"] == 3
        assert config["train"]["L"] == 16
        for name in ("train_image.desc", "train_text.desc", "train_labels.txt",
                     "query_image.desc", "query_text.desc", "query_labels.txt"):
            assert (tmp_path / "data" / name).exists()
