"""The three edit operations — delete an entity, replace a complex word, merge
two related triples — and how corpus statistics pick their targets.

Run: python3 demos/03_edit_operations.py
"""
from pathlib import Path

import numpy as np

from kgslim import (
    OperationWeights,
    build_corpus_stats,
    load_graphs,
    load_lexicon,
    propose_delete,
    propose_merge,
    propose_replace,
    sample_operation,
)
from kgslim.reduction import graph_tfidf

DATA = Path(__file__).parent / "data"


def show(label: str, proposal) -> None:
    print(f"\n{label}")
    if proposal is None:
        print("  no applicable candidate")
        return
    print(f"  detail: {proposal.detail}")
    print(f"  result: {len(proposal.new_graph)} triples")
    for triple in proposal.new_graph:
        print(f"    ({triple.head}, {triple.relation}, {triple.tail})")
    if proposal.newly_deleted_entities:
        print(f"  now absent: {sorted(proposal.newly_deleted_entities)}")


def main() -> None:
    graphs = {g.graph_id: g for g in load_graphs(str(DATA / "sample_graphs.jsonl"))}
    documents = [
        line for line in (DATA / "corpus.txt").read_text().splitlines() if line.strip()
    ]
    stats = build_corpus_stats(documents)
    lexicon = load_lexicon(str(DATA / "lexicon.tsv"))
    graph = graphs["observatory"]

    print("DELETE targets the lowest-degree entity; ties go to the one whose")
    print("surface carries the least graph-weighted TF-IDF (most expendable):")
    for entity in graph.entities():
        degree = graph.entity_degree(entity)
        weight = graph_tfidf(stats, graph, entity)
        print(f"  {entity!r:28} degree {degree}  graph-tfidf {weight:.4f}")
    show("propose_delete picks:", propose_delete(graph, stats))

    print("\nREPLACE scans lexicon-keyed words from most to least complex (IDF)")
    print("and swaps in the first strictly simpler alternative:")
    show("propose_replace picks:", propose_replace(graph, stats, lexicon))
    print("\nWords already attempted in an iteration can be excluded, so a")
    print("rejected swap is not retried immediately:")
    show(
        "propose_replace (with 'quarried' burned):",
        propose_replace(graph, stats, lexicon, attempted=frozenset({"quarried"})),
    )

    print("\nMERGE joins two triples that share structure (chains, shared heads")
    print("or tails); the pair with the highest summed slot IDF merges first,")
    print("and the combined relation keeps both parts around '|sep|':")
    show("propose_merge picks:", propose_merge(graph, stats))

    print("\nDuring search, one of the three kinds is drawn per iteration in")
    print("proportion to configurable weights (here delete:replace:merge = 2:1:1):")
    rng = np.random.default_rng(7)
    weights = OperationWeights(delete=2.0, replace=1.0, merge=1.0)
    draws = [sample_operation(weights, rng) for _ in range(2000)]
    for kind in ("delete", "replace", "merge"):
        print(f"  {kind:8} drawn {draws.count(kind):4d} / 2000")


if __name__ == "__main__":
    main()
