"""Corpus statistics that drive every edit decision: IDF, the smoothed n-gram
language model, unigram probabilities, and readability.

Run: python3 demos/02_corpus_statistics.py
"""
from pathlib import Path

from kgslim import (
    build_corpus_stats,
    build_language_model,
    count_syllables,
    flesch_reading_ease,
    idf,
    load_lexicon,
    phrase_idf,
    tokenize,
    unigram_probability,
)
from kgslim.corpus import sentence_log_probability

DATA = Path(__file__).parent / "data"


def main() -> None:
    documents = [
        line for line in (DATA / "corpus.txt").read_text().splitlines() if line.strip()
    ]
    stats = build_corpus_stats(documents)
    print(f"Corpus: {stats.document_count} documents, vocabulary {len(stats.document_frequency)}\n")

    print("IDF = ln(documents / documents containing the token); rarer = larger:")
    for token in ("the", "valley", "cut", "quarried", "telescope"):
        print(f"  idf({token!r:12}) = {idf(stats, token):.4f}")
    print("A phrase averages its tokens' IDF:")
    print(f"  phrase_idf('quarried limestone') = {phrase_idf(stats, 'quarried limestone'):.4f}")
    print(f"  phrase_idf('cut stone')          = {phrase_idf(stats, 'cut stone'):.4f}")

    print("\nThe word-replacement lexicon maps complex words to simpler ones;")
    print("a swap is only proposed when the replacement has strictly lower IDF:")
    lexicon = load_lexicon(str(DATA / "lexicon.tsv"))
    for word in ("quarried", "refracting", "saffron"):
        options = lexicon.lookup(word)
        arrow = ", ".join(
            f"{option!r} (idf {phrase_idf(stats, option):.3f})" for option in options
        )
        print(f"  {word!r} (idf {phrase_idf(stats, word):.3f}) -> {arrow}")

    print("\nUnigram probabilities use add-one smoothing, so unseen words")
    print("get a small non-zero share instead of annihilating a product:")
    for text in ("the valley", "the zeppelin"):
        print(f"  unigram_probability({text!r}) = {unigram_probability(stats, text):.3e}")

    lm = build_language_model(documents, order=3)
    print("\nThe n-gram model scores whole sentences (log space, higher = more fluent):")
    for text in (
        "the masons cut stone for the main hall",
        "hall main the for stone cut masons the",
    ):
        log_p = sentence_log_probability(lm, text)
        print(f"  log P({text!r}) = {log_p:.2f}")
    print("Same words, shuffled order: the model prefers the fluent one.")

    print("\nReadability (Flesch reading ease) rewards short sentences and words:")
    for text in (
        "The bridge crosses the river.",
        "The architectural superstructure traverses the waterway.",
    ):
        syllables = sum(count_syllables(token) for token in tokenize(text))
        print(f"  FRE = {flesch_reading_ease(text):7.2f}  ({syllables} syllables) {text!r}")


if __name__ == "__main__":
    main()
