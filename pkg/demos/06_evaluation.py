"""Reporting metrics for a finished run: compression, syllable reduction,
salience retention, entity drift, graph retention, and the composite score.

Run: python3 demos/06_evaluation.py
"""
from pathlib import Path

from kgslim import (
    Scorer,
    ScoringConfig,
    SearchConfig,
    SurfaceMatchExtractor,
    TemplateGenerator,
    build_corpus_stats,
    build_language_model,
    entity_metrics,
    geometric_mean,
    graph_metrics,
    load_graphs,
    load_lexicon,
    operation_stats,
    run_simplification,
    text_metrics,
)

DATA = Path(__file__).parent / "data"


def main() -> None:
    graphs = load_graphs(str(DATA / "sample_graphs.jsonl"))
    documents = [
        line for line in (DATA / "corpus.txt").read_text().splitlines() if line.strip()
    ]
    stats = build_corpus_stats(documents)
    lm = build_language_model(documents, order=3)
    lexicon = load_lexicon(str(DATA / "lexicon.tsv"))
    extractor = SurfaceMatchExtractor(
        known_entities=tuple(e for g in graphs for e in g.entities())
    )
    scorer = Scorer(stats=stats, lm=lm, extractor=extractor, config=ScoringConfig())

    graph = graphs[0]
    result = run_simplification(
        graph, TemplateGenerator(), scorer, lexicon,
        SearchConfig(condition="sa", iterations=8, seed=3),
    )
    initial, final = result.initial, result.last_accepted
    print(f"initial: {initial.text}")
    print(f"final  : {final.text}\n")

    tm = text_metrics(initial.text, final.text, stats)
    print("Text metrics (ratios are final / initial; lower = more compression):")
    for key, value in tm.to_dict().items():
        shown = f"{value:.4f}" if isinstance(value, float) else value
        print(f"  {key:4} {shown}")
    print("  (F and GM stay empty until an acceptability model supplies F.)")

    print("\nWith a fluency judgment the composite score becomes available —")
    print("the fourth root of (1-CR) * (1-SR) * F * S, balancing how much was")
    print("cut against how good and faithful the survivor is:")
    cr, sr, s = tm.compression_ratio, tm.syllable_ratio, tm.salience
    for fluency in (0.5, 0.9):
        print(f"  F={fluency}: GM = {geometric_mean(cr, sr, fluency, s):.4f}")

    gm_metrics = graph_metrics(initial.graph, final.graph)
    print("\nGraph retention (merged relations count each original part):")
    for key, value in gm_metrics.to_dict().items():
        shown = f"{value:.4f}" if isinstance(value, float) else value
        print(f"  {key:8} {shown}")

    em = entity_metrics(initial.text, final.text, extractor)
    print("\nEntity drift between the two texts:")
    print(f"  kept {em.overlap}, added {em.added}, dropped {em.deleted}")

    ops = operation_stats([result])
    print("\nShare of accepted edits by kind for this run:")
    for kind, share in (ops or {}).items():
        print(f"  {kind:8} {share:.2f}")


if __name__ == "__main__":
    main()
