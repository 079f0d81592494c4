"""Walk through the graph data model: triples, entities, degrees, validation.

Run: python3 demos/01_graph_model.py
"""
from pathlib import Path

from kgslim import KnowledgeGraph, Triple, load_graphs, normalize, validate

DATA = Path(__file__).parent / "data"


def main() -> None:
    graphs = load_graphs(str(DATA / "sample_graphs.jsonl"))
    print(f"Loaded {len(graphs)} graphs from sample_graphs.jsonl\n")

    graph = graphs[0]
    print(f"Graph {graph.graph_id!r} has {len(graph)} triples:")
    for triple in graph:
        print(f"  ({triple.head!r}, {triple.relation!r}, {triple.tail!r})")

    print("\nEntities are the head and tail surfaces, deduplicated by a")
    print("case/whitespace-insensitive normal form, in first-appearance order:")
    for entity in graph.entities():
        print(f"  {entity!r:40} degree {graph.entity_degree(entity)}")
    print("Relations never count as entities, so 'locatedIn' is absent above.")

    print("\nRemoving an entity drops every triple it touches:")
    smaller = graph.remove_entity("Harlow Valley")
    print(f"  remove_entity('Harlow Valley'): {len(graph)} -> {len(smaller)} triples")
    for triple in smaller:
        print(f"  kept ({triple.head}, {triple.relation}, {triple.tail})")

    print("\nGraphs are immutable; the original is untouched:")
    print(f"  original still has {len(graph)} triples")

    print("\nIdentity is normalized, so these two triples are duplicates:")
    a = Triple("The  Calder   Observatory", "locatedIn", "HARLOW valley")
    b = Triple("The Calder Observatory", "locatedin", "Harlow Valley")
    print(f"  {a.key() == b.key()=}")
    print(f"  normalize('The  Calder   Observatory') = {normalize('The  Calder   Observatory')!r}")

    print("\nvalidate() reports every contract violation instead of raising:")
    bad = KnowledgeGraph((a, b, Triple("", "r", "t")), "bad")
    for violation in validate(bad):
        print(f"  - {violation}")
    print(f"  (a clean graph reports {validate(graph)!r})")


if __name__ == "__main__":
    main()
