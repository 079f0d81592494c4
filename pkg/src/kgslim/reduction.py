"""Graph reduction operations: delete an entity, replace a complex word, merge
a triple pair. Each proposal builder is a pure function of its inputs and breaks
every tie lexicographically, so a fixed graph always yields the same proposal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .corpus import CorpusStatistics, SimplificationLexicon, idf, phrase_idf, phrase_pair_idf_sum, tokenize_phrase
from .graph import MERGE_SEPARATOR, KnowledgeGraph, Proposal, Triple, normalize, validate

OPERATION_KINDS = ("delete", "replace", "merge")

_MERGE_PATTERNS = ("transitive", "shared-head-tail", "shared-head", "shared-tail")


class ReductionError(ValueError):
    """Raised on invalid reduction inputs (weights, unknown kinds)."""


@dataclass(frozen=True, slots=True)
class OperationWeights:
    """Sampling weights for the three operation kinds; zero disables a kind."""

    delete: float = 1.0
    replace: float = 1.0
    merge: float = 1.0

    def __post_init__(self) -> None:
        values = (self.delete, self.replace, self.merge)
        if any(w < 0 for w in values):
            raise ReductionError(f"weights must be non-negative, got {values}")
        if sum(values) <= 0:
            raise ReductionError("at least one weight must be positive")

    def normalized(self) -> tuple[float, float, float]:
        total = self.delete + self.replace + self.merge
        return (self.delete / total, self.replace / total, self.merge / total)


def sample_operation(weights: OperationWeights, rng: np.random.Generator) -> str:
    """Draw one operation kind in proportion to its weight."""
    draw = rng.random()
    cumulative = 0.0
    shares = weights.normalized()
    for kind, share in zip(OPERATION_KINDS, shares):
        cumulative += share
        if draw < cumulative and share > 0:
            return kind
    # Floating-point tail: return the last positively weighted kind.
    for kind, share in zip(reversed(OPERATION_KINDS), reversed(shares)):
        if share > 0:
            return kind
    raise ReductionError("no positively weighted operation")


def _graph_token_frequencies(graph: KnowledgeGraph) -> tuple[dict[str, int], int]:
    """Token counts over the graph's own phrase multiset (all slots, with repeats)."""
    counts: dict[str, int] = {}
    total = 0
    for triple in graph.triples:
        for phrase in triple.phrases():
            for token in tokenize_phrase(phrase):
                counts[token] = counts.get(token, 0) + 1
                total += 1
    return counts, total


def graph_tfidf(stats: CorpusStatistics, graph: KnowledgeGraph, phrase: str) -> float:
    """Phrase TF-IDF: mean over tokens of in-graph frequency times corpus IDF."""
    counts, total = _graph_token_frequencies(graph)
    tokens = tokenize_phrase(phrase)
    if not tokens or total == 0:
        return 0.0
    score = 0.0
    for token in tokens:
        score += (counts.get(token, 0) / total) * idf(stats, token)
    return score / len(tokens)


def propose_delete(graph: KnowledgeGraph, stats: CorpusStatistics) -> Proposal | None:
    """Remove the lowest-degree entity, breaking ties by lowest TF-IDF then name."""
    if len(graph) <= 1:
        return None  # deletion would empty the graph
    surfaces: dict[str, str] = {}
    for triple in graph.triples:
        for surface in (triple.head, triple.tail):
            surfaces.setdefault(normalize(surface), surface)
    degrees = {key: graph.entity_degree(surface) for key, surface in surfaces.items()}
    minimum = min(degrees.values())
    candidates = sorted(key for key, degree in degrees.items() if degree == minimum)
    target = min(candidates, key=lambda key: (graph_tfidf(stats, graph, surfaces[key]), key))
    new_graph = graph.remove_entity(surfaces[target])
    if len(new_graph) == 0:
        return None  # deletion would empty the graph
    removed = graph.entity_set() - new_graph.entity_set()
    return Proposal(
        kind="delete",
        new_graph=new_graph,
        detail=f"delete entity {surfaces[target]!r} (degree {minimum})",
        newly_deleted_entities=frozenset(removed),
    )


def _boundary_pattern(word: str) -> re.Pattern[str]:
    # Token boundaries match the tokenizer: alphanumerics split on anything else.
    return re.compile(
        rf"(?<![^\W_]){re.escape(word)}(?![^\W_])", re.IGNORECASE | re.UNICODE
    )


def _substitute_word(phrase: str, word: str, replacement: str) -> str:
    def fix_case(match: re.Match[str]) -> str:
        matched = match.group(0)
        if matched[:1].isupper():
            return replacement[:1].upper() + replacement[1:]
        return replacement

    return _boundary_pattern(word).sub(fix_case, phrase)


def propose_replace(
    graph: KnowledgeGraph,
    stats: CorpusStatistics,
    lexicon: SimplificationLexicon,
    attempted: frozenset[str] = frozenset(),
) -> Proposal | None:
    """Swap the most complex replaceable word for a strictly simpler lexicon entry.

    Words are visited in descending IDF order; the first word with a candidate
    of strictly lower IDF is substituted in every slot where it occurs.
    """
    words: set[str] = set()
    for triple in graph.triples:
        for phrase in triple.phrases():
            words.update(tokenize_phrase(phrase))
    ranked = sorted(words - attempted, key=lambda w: (-idf(stats, w), w))
    for word in ranked:
        word_idf = idf(stats, word)
        candidates = [c for c in lexicon.lookup(word) if phrase_idf(stats, c) < word_idf]
        if not candidates:
            continue
        replacement = min(candidates, key=lambda c: (phrase_idf(stats, c), c))
        replaced_slots = 0
        new_triples: list[Triple] = []
        for triple in graph.triples:
            phrases = []
            for phrase in triple.phrases():
                updated = _substitute_word(phrase, word, replacement)
                if updated != phrase:
                    replaced_slots += 1
                phrases.append(updated)
            new_triples.append(Triple(*phrases))
        new_graph = graph.replace_triples(new_triples)
        if replaced_slots == 0 or validate(new_graph):
            # Substitution collapsed triples into duplicates or touched nothing.
            continue
        removed = graph.entity_set() - new_graph.entity_set()
        return Proposal(
            kind="replace",
            new_graph=new_graph,
            detail=f"replace {word!r} -> {replacement!r} in {replaced_slots} slot(s)",
            newly_deleted_entities=frozenset(removed),
            attempted_word=word,
        )
    return None


@dataclass(frozen=True, slots=True)
class MergeCandidate:
    """An ordered triple pair that one merge pattern can collapse."""

    first: Triple
    second: Triple
    pattern: str
    merged: Triple


def _classify_pair(first: Triple, second: Triple) -> MergeCandidate | None:
    h1, t1 = normalize(first.head), normalize(first.tail)
    h2, t2 = normalize(second.head), normalize(second.tail)
    relation = f"{first.relation}{MERGE_SEPARATOR}{second.relation}"
    if t1 == h2:
        return MergeCandidate(first, second, "transitive", Triple(first.head, relation, second.tail))
    if h1 == h2 and t1 == t2:
        return MergeCandidate(first, second, "shared-head-tail", Triple(first.head, relation, first.tail))
    if h1 == h2 and t1 != t2:
        return MergeCandidate(first, second, "shared-head", Triple(first.tail, relation, second.tail))
    if t1 == t2 and h1 != h2:
        return MergeCandidate(first, second, "shared-tail", Triple(first.head, relation, second.head))
    return None


def enumerate_merge_candidates(graph: KnowledgeGraph) -> list[MergeCandidate]:
    """Every ordered pair of distinct triples that some merge pattern accepts.

    Pairs whose relations both already carry the merge separator are skipped;
    everything else, including one-sided merged relations, stays eligible.
    """
    candidates: list[MergeCandidate] = []
    for i, first in enumerate(graph.triples):
        for j, second in enumerate(graph.triples):
            if i == j:
                continue
            if MERGE_SEPARATOR in first.relation and MERGE_SEPARATOR in second.relation:
                continue
            candidate = _classify_pair(first, second)
            if candidate is not None:
                candidates.append(candidate)
    return candidates


def _apply_merge(graph: KnowledgeGraph, candidate: MergeCandidate) -> KnowledgeGraph:
    """Replace the first triple with the merged one and drop the second."""
    new_triples: list[Triple] = []
    second_dropped = False
    for triple in graph.triples:
        if triple.key() == candidate.second.key() and not second_dropped:
            second_dropped = True
            continue
        if triple.key() == candidate.first.key():
            new_triples.append(candidate.merged)
        else:
            new_triples.append(triple)
    return graph.replace_triples(new_triples)


def propose_merge(graph: KnowledgeGraph, stats: CorpusStatistics) -> Proposal | None:
    """Merge the candidate pair with the highest summed slot IDF."""
    candidates = enumerate_merge_candidates(graph)
    ranked = sorted(
        candidates,
        key=lambda c: (
            -phrase_pair_idf_sum(stats, c.first, c.second),
            c.first.key(),
            c.second.key(),
            _MERGE_PATTERNS.index(c.pattern),
        ),
    )
    for candidate in ranked:
        new_graph = _apply_merge(graph, candidate)
        if validate(new_graph):
            continue  # merged triple would duplicate a survivor
        removed = graph.entity_set() - new_graph.entity_set()
        return Proposal(
            kind="merge",
            new_graph=new_graph,
            detail=(
                f"merge {candidate.pattern}: {candidate.first.to_list()} + "
                f"{candidate.second.to_list()} -> {candidate.merged.to_list()}"
            ),
            newly_deleted_entities=frozenset(removed),
        )
    return None


def propose(
    kind: str,
    graph: KnowledgeGraph,
    stats: CorpusStatistics,
    lexicon: SimplificationLexicon,
    attempted: frozenset[str] = frozenset(),
) -> Proposal | None:
    """Dispatch to the proposal builder for `kind`."""
    if kind == "delete":
        return propose_delete(graph, stats)
    if kind == "replace":
        return propose_replace(graph, stats, lexicon, attempted)
    if kind == "merge":
        return propose_merge(graph, stats)
    raise ReductionError(f"unknown operation kind: {kind!r}")
