"""The full command-line pipeline in a scratch directory:

  ingest -> build-corpus -> run -> evaluate -> verify

Run: python3 demos/07_cli_pipeline.py
"""
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

DATA = Path(__file__).parent / "data"


def cli(*argv: str) -> subprocess.CompletedProcess:
    print(f"\n$ kgslim {' '.join(argv)}")
    proc = subprocess.run(
        [sys.executable, "-m", "kgslim.cli", *argv], capture_output=True, text=True
    )
    for line in (proc.stdout + proc.stderr).strip().splitlines():
        print(f"  {line}")
    if proc.returncode != 0:
        raise SystemExit(f"command failed with exit code {proc.returncode}")
    return proc


def main() -> None:
    with tempfile.TemporaryDirectory() as scratch_str:
        scratch = Path(scratch_str)
        for name in ("sample_graphs.jsonl", "corpus.txt", "lexicon.tsv"):
            shutil.copy(DATA / name, scratch / name)

        print("Step 1 — ingest validates the dataset and keeps graphs complex")
        print("enough to be worth simplifying (more triples than --threshold):")
        cli(
            "ingest",
            "--dataset", str(scratch / "sample_graphs.jsonl"),
            "--threshold", "3",
            "--out", str(scratch / "kept.jsonl"),
        )

        print("\nStep 2 — build-corpus precomputes document statistics and the")
        print("n-gram language model once, for reuse across runs:")
        cli(
            "build-corpus",
            "--corpus", str(scratch / "corpus.txt"),
            "--out", str(scratch / "assets.json"),
            "--order", "3",
        )

        print("\nStep 3 — run searches every kept graph and writes one trajectory")
        print("file per graph plus report.csv / report.json:")
        cli(
            "run",
            "--dataset", str(scratch / "kept.jsonl"),
            "--corpus", str(scratch / "assets.json"),
            "--lexicon", str(scratch / "lexicon.tsv"),
            "--out", str(scratch / "out"),
            "--condition", "sa",
            "--iterations", "8",
            "--seed", "3",
            "--system", "demo-sa",
        )
        report = json.loads((scratch / "out" / "report.json").read_text())
        print("\n  aggregate row from report.json:")
        for key, value in report["aggregate"].items():
            print(f"    {key:6} {value}")

        print("\nStep 4 — evaluate recomputes a report from stored trajectories")
        print("(here using each graph's best-scoring state instead of its last):")
        cli(
            "evaluate",
            "--run-dir", str(scratch / "out"),
            "--corpus", str(scratch / "assets.json"),
            "--use", "best",
            "--system", "demo-sa-best",
            "--out", str(scratch / "best"),
        )

        print("\nStep 5 — verify replays a trajectory and re-checks every stored")
        print("score and constraint, so results can be audited after the fact:")
        trajectory = sorted((scratch / "out").glob("*.trajectory.jsonl"))[0]
        cli(
            "verify",
            "--trajectory", str(trajectory),
            "--corpus", str(scratch / "assets.json"),
        )


if __name__ == "__main__":
    main()
