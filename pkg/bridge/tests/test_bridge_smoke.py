"""End-to-end smoke run with pretrained models.

Needs the neural extras and downloadable checkpoints, so the whole module
skips when the model hub is unreachable and no local cache exists. With models
available: twenty varied four-to-six-triple graphs go through annealed
simplification with the bridge generating text, scoring fluency, and scoring
similarity; the run must finish with no protocol errors, compress the text on
average, and keep average similarity high.
"""
import json
import socket
import subprocess
import sys

import pytest

REAL_MODELS = {
    "generate": "t5-small",
    "score_lm": "distilgpt2",
    "score_similarity": "sentence-transformers/all-MiniLM-L6-v2",
}

ENTITIES = [
    "Aarhus Airport", "the control tower", "Denmark", "a concrete runway",
    "Ajoblanco", "bread", "garlic", "Spain",
    "Alan Shepard", "NASA", "Derry, New Hampshire", "the Navy",
    "Abilene Regional Airport", "Texas", "the United States", "a paved surface",
    "the School of Business", "the city centre", "a modern curriculum", "Europe",
]
RELATIONS = ["location", "operatingOrganisation", "runwayName", "country",
             "mainIngredients", "birthPlace", "occupation", "cityServed", "partOf"]


def hub_reachable() -> bool:
    try:
        socket.create_connection(("huggingface.co", 443), timeout=3).close()
        return True
    except OSError:
        return False


pytestmark = pytest.mark.skipif(
    not hub_reachable(), reason="model hub unreachable; pretrained checkpoints unavailable"
)


def styled_graphs(count: int = 20) -> list[dict]:
    import random

    rng = random.Random(5)
    graphs = []
    for index in range(count):
        size = rng.randint(4, 6)
        triples = set()
        while len(triples) < size:
            head, tail = rng.sample(ENTITIES, 2)
            triples.add((head, rng.choice(RELATIONS), tail))
        graphs.append({"id": f"smoke-{index}", "triples": [list(t) for t in sorted(triples)]})
    return graphs


def test_twenty_graph_annealed_run_with_pretrained_models(tmp_path) -> None:
    (tmp_path / "bridge.json").write_text(
        json.dumps({"models": REAL_MODELS, "beam_size": 5, "repetition_penalty": 1.0})
    )
    (tmp_path / "dataset.jsonl").write_text(
        "\n".join(json.dumps(g) for g in styled_graphs()) + "\n"
    )
    corpus = [
        "the airport serves the city and the region",
        "the runway is made of concrete and asphalt",
        "the dish is made with bread garlic and almonds from Spain",
        "the astronaut was born in New Hampshire and joined the Navy",
        "the school of business teaches a modern curriculum in Europe",
        "the control tower watches over the paved surface",
        "the organisation operates flights across the United States",
        "Texas and Denmark both have regional airports",
    ]
    (tmp_path / "corpus.txt").write_text("\n".join(corpus) + "\n")

    spec = f"cmd:{sys.executable} -m kgslim_bridge --config {tmp_path / 'bridge.json'}"
    result = subprocess.run(
        [
            sys.executable, "-m", "kgslim.cli", "run",
            "--dataset", str(tmp_path / "dataset.jsonl"),
            "--corpus", str(tmp_path / "corpus.txt"),
            "--out", str(tmp_path / "out"),
            "--condition", "sa",
            "--iterations", "10",
            "--seed", "0",
            "--generator", spec,
            "--adapter", spec,
            "--fluency-backend", "adapter",
            "--salience-backend", "adapter",
        ],
        capture_output=True,
        text=True,
        timeout=3600,
    )
    assert result.returncode == 0, result.stderr

    protocol_errors = 0
    for path in (tmp_path / "out").glob("*.trajectory.jsonl"):
        for line in path.read_text().splitlines():
            record = json.loads(line)
            if record.get("record") == "attempt" and "failed" in record.get("detail", ""):
                protocol_errors += 1
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert protocol_errors == 0
    assert report["aggregate"]["CR"] < 0.9
    assert report["aggregate"]["S"] > 0.85
