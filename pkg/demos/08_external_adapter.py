"""Swapping in an external model server over the line-delimited JSON adapter
protocol. Uses the companion `kgslim-bridge` package with its deterministic
`dummy:` models, so it runs offline; point the config at real model names to
use neural checkpoints instead.

Run: python3 demos/08_external_adapter.py   (needs `pip install -e bridge`)
"""
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

from kgslim.adapter import open_adapter

DATA = Path(__file__).parent / "data"


def main() -> None:
    if subprocess.run(
        [sys.executable, "-c", "import kgslim_bridge"], capture_output=True
    ).returncode:
        raise SystemExit("kgslim-bridge is not installed; run: pip install -e bridge")

    with tempfile.TemporaryDirectory() as scratch_str:
        scratch = Path(scratch_str)
        (scratch / "bridge.json").write_text(json.dumps({
            "models": {
                "generate": "dummy:writer",
                "score_lm": "dummy:lm",
                "score_similarity": "dummy:overlap",
                "extract_entities": "dummy:spotter",
                "score_acceptability": "dummy:judge",
            }
        }))
        spec = f"cmd:{sys.executable} -m kgslim_bridge --config {scratch / 'bridge.json'}"

        print("The adapter client launches the server, reads its handshake, and")
        print("exchanges one JSON object per line:")
        client = open_adapter(spec)
        try:
            print(f"  capabilities: {sorted(client.capabilities)}")
            text = client.request(
                "generate",
                {"graph": [["The Aldern Bridge", "crosses", "the Weir River"]]},
            )["text"]
            print(f"  generate -> {text!r}")
            log_probs = client.request("score_lm", {"text": text})["log_probs"]
            print(f"  score_lm -> {[round(p, 2) for p in log_probs]}")
            score = client.request(
                "score_similarity", {"text_a": text, "text_b": "The Aldern Bridge"}
            )["score"]
            print(f"  score_similarity -> {score:.3f}")
        finally:
            client.close()

        print("\nThe same endpoint plugs into the pipeline: the bridge realizes")
        print("candidate texts and scores fluency/salience in place of the")
        print("bundled n-gram machinery:")
        for name in ("sample_graphs.jsonl", "corpus.txt", "lexicon.tsv"):
            shutil.copy(DATA / name, scratch / name)
        proc = subprocess.run(
            [
                sys.executable, "-m", "kgslim.cli", "run",
                "--dataset", str(scratch / "sample_graphs.jsonl"),
                "--corpus", str(scratch / "corpus.txt"),
                "--lexicon", str(scratch / "lexicon.tsv"),
                "--out", str(scratch / "out"),
                "--condition", "sa",
                "--iterations", "6",
                "--seed", "3",
                "--generator", spec,
                "--adapter", spec,
                "--fluency-backend", "adapter",
                "--salience-backend", "adapter",
                "--entity-backend", "adapter",
            ],
            capture_output=True,
            text=True,
        )
        for line in (proc.stdout + proc.stderr).strip().splitlines():
            print(f"  {line}")
        if proc.returncode != 0:
            raise SystemExit(proc.returncode)
        report = json.loads((scratch / "out" / "report.json").read_text())
        print("\n  aggregate row with adapter-backed scoring:")
        for key, value in report["aggregate"].items():
            print(f"    {key:6} {value}")


if __name__ == "__main__":
    main()
