#!/usr/bin/env python3
"""
Development smoke run of the mfdh pipeline
Generates the synthetic dataset, trains, re-encodes, searches and evaluates
"""

import json
import sys
import tempfile
from pathlib import Path
from typing import Optional

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from app.main import main  # noqa: E402


class PipelineSmokeTester:
    """Runs every subcommand once against a scratch directory"""

    def __init__(self, work_dir: Path, seed: int = 0):
        self.work_dir = work_dir
        self.data_dir = work_dir / "data"
        self.run_dir = work_dir / "run"
        self.seed = seed
        self.model_path: Optional[Path] = None

    def _call(self, argv) -> bool:
        code = main(argv)
        if code != 0:
            print(f"   exit code {code} for: mfdh {' '.join(argv)}")
        return code == 0

    def test_synth(self) -> bool:
        """Write the synthetic three-class dataset"""
        if self._call(["synth", "--out", str(self.data_dir), "--seed", str(self.seed)]):
            print("✅ Synthetic dataset written")
            return True
        print("❌ Synthetic dataset generation failed")
        return False

    def test_train(self) -> bool:
        """Train on the synthetic config"""
        config = self.data_dir / "config.json"
        if not self._call(["train", "--config", str(config), "--out", str(self.run_dir)]):
            print("❌ Training failed")
            return False
        self.model_path = self.run_dir / "model.mfdh"
        report = json.loads((self.run_dir / "training_report.json").read_text())
        print("✅ Training finished")
        print(f"   iterations: {report['iterations']}, objective: {report['objective_trace'][-1]:.4f}")
        return True

    def test_encode(self) -> bool:
        """Re-encode the query images with the saved model"""
        if not self.model_path:
            print("❌ No model available")
            return False
        out = self.work_dir / "query_image.codes"
        ok = self._call([
            "encode", "--model", str(self.model_path),
            "--descriptors", str(self.data_dir / "query_image.desc"),
            "--modality", "image", "--out", str(out),
        ])
        if ok and out.read_text() == (self.run_dir / "query_image.codes").read_text():
            print("✅ Encoding reproduces the training run's query codes")
            return True
        print("❌ Encoding failed or disagrees with the training run")
        return False

    def test_search(self) -> bool:
        """Top-10 image-to-text search"""
        out = self.work_dir / "i2t_top10.tsv"
        ok = self._call([
            "search", "--query-codes", str(self.run_dir / "query_image.codes"),
            "--db-codes", str(self.run_dir / "train_text.codes"), "--top-r", "10", "--out", str(out),
        ])
        if ok:
            print(f"✅ Search wrote {len(out.read_text().splitlines()) - 1} rows")
        else:
            print("❌ Search failed")
        return ok

    def test_eval(self) -> bool:
        """MAP for every task"""
        passed = True
        for task, query, database in (
            ("I2T", "query_image", "train_text"),
            ("T2I", "query_text", "train_image"),
        ):
            out = self.work_dir / f"metrics_{task}.json"
            passed &= self._call([
                "eval", "--query-codes", str(self.run_dir / f"{query}.codes"),
                "--db-codes", str(self.run_dir / f"{database}.codes"),
                "--query-labels", str(self.data_dir / "query_labels.txt"),
                "--db-labels", str(self.data_dir / "train_labels.txt"),
                "--task", task, "--out", str(out),
            ])
        print("✅ Evaluation finished" if passed else "❌ Evaluation failed")
        return passed

    def run_all_tests(self) -> bool:
        """Run every stage in order"""
        print("🚀 Running mfdh pipeline smoke test")
        print("=" * 50)

        tests = [
            ("Synthetic data", self.test_synth),
            ("Train", self.test_train),
            ("Encode", self.test_encode),
            ("Search", self.test_search),
            ("Evaluate", self.test_eval),
        ]

        passed = 0
        for test_name, test_func in tests:
            print(f"\n🧪 Running: {test_name}")
            if test_func():
                passed += 1
            else:
                print(f"   Stage '{test_name}' failed")

        print("\n" + "=" * 50)
        print(f"📊 Results: {passed}/{len(tests)} stages passed")
        return passed == len(tests)


if __name__ == "__main__":
    with tempfile.TemporaryDirectory(prefix="mfdh-smoke-") as scratch:
        tester = PipelineSmokeTester(Path(scratch))
        success = tester.run_all_tests()
    sys.exit(0 if success else 1)
