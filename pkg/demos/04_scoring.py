"""The six-factor product score: fluency, salience, simplicity, entity
faithfulness, brevity check, deleted-entity check. Any factor at zero vetoes
the whole candidate.

Run: python3 demos/04_scoring.py
"""
from pathlib import Path

from kgslim import (
    ScoreBreakdown,
    Scorer,
    ScoringConfig,
    SurfaceMatchExtractor,
    build_corpus_stats,
    build_language_model,
    check_brevity,
    check_deleted,
    load_graphs,
    realize_template,
    score_entity,
)

DATA = Path(__file__).parent / "data"


def main() -> None:
    graphs = {g.graph_id: g for g in load_graphs(str(DATA / "sample_graphs.jsonl"))}
    documents = [
        line for line in (DATA / "corpus.txt").read_text().splitlines() if line.strip()
    ]
    graph = graphs["observatory"]

    scorer = Scorer(
        stats=build_corpus_stats(documents),
        lm=build_language_model(documents, order=3),
        extractor=SurfaceMatchExtractor(known_entities=graph.entities()),
        config=ScoringConfig(),
    )

    initial_text = realize_template(graph)
    print(f"Initial text ({len(graph)} triples):\n  {initial_text}\n")

    candidate_graph = graph.remove_entity("the Meridian Institute")
    candidate_text = realize_template(candidate_graph)
    print(f"Candidate after deleting 'the Meridian Institute' ({len(candidate_graph)} triples):")
    print(f"  {candidate_text}\n")

    breakdown = scorer.breakdown(
        initial_text=initial_text,
        candidate_text=candidate_text,
        previous_graph=graph,
        proposed_graph=candidate_graph,
        deleted_entities=frozenset({"the meridian institute"}),
    )
    legend = {
        "s_fl": "fluency (n-gram vs unigram)",
        "s_mp": "salience kept vs initial text",
        "s_si": "simplicity (reading ease)",
        "s_en": "entity faithfulness",
        "s_gb": "brevity floor (no over-cutting)",
        "s_de": "deleted stay gone",
        "total": "product of the six",
    }
    print("Factor breakdown (all in [0, 1], total = product):")
    for name, value in breakdown.to_dict().items():
        print(f"  {name:6} {value:.3e}   {legend[name]}")

    print("\nThe two check factors are hard gates. Brevity floors how much a")
    print("single edit may cut (proposed/previous must stay >= r_op = 0.6):")
    print(f"  check_brevity(5 -> 3 triples) = {check_brevity(5, 3)}  (cutting 40% is allowed)")
    print(f"  check_brevity(5 -> 2 triples) = {check_brevity(5, 2)}  (cutting 60% at once is vetoed)")
    print("  check_deleted is 0.0 the moment a deleted entity is mentioned again:")
    print(f"    mentioning it: {check_deleted(initial_text, ['the meridian institute'])}")
    print(f"    clean text   : {check_deleted(candidate_text, ['the meridian institute'])}")

    print("\nEntity faithfulness is the fraction of extracted entities that are")
    print("actually in the graph (inventions cost score):")
    print(f"  only graph entities mentioned: {score_entity(['Harlow Valley'], graph.entity_set())}")
    print(f"  one invented out of two      : {score_entity(['Harlow Valley', 'Atlantis'], graph.entity_set())}")

    print("\nBecause the total is a product, one zero factor kills the candidate:")
    vetoed = ScoreBreakdown.from_factors(
        s_fl=0.9, s_mp=0.8, s_si=0.7, s_en=1.0, s_gb=1.0, s_de=0.0
    )
    print(f"  factors (0.9, 0.8, 0.7, 1.0, 1.0, 0.0) -> total {vetoed.total}")


if __name__ == "__main__":
    main()
