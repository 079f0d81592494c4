"""Six-factor proposal scoring.

A candidate text/graph pair earns the product of four soft scores (fluency,
salience, simplicity, entity faithfulness) and two hard constraints (brevity
floor, deleted-entity absence). Any factor at zero annihilates the total, so
hard-constraint violations can never be traded away.
"""
from __future__ import annotations

import math
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .adapter import AdapterClient, DEFAULT_REQUEST_TIMEOUT, AdapterProtocolError
from .corpus import (
    FRE_MAX,
    CorpusStatistics,
    EmptyTextError,
    NGramLanguageModel,
    flesch_reading_ease,
    idf,
    sentence_log_probability,
    sentence_probability,
    tokenize,
    tokenize_phrase,
    unigram_log_probability,
    unigram_probability,
)
from .graph import KnowledgeGraph, normalize

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_IDF_FLOOR = 1e-9  # keeps weighted matching defined when every IDF is zero

FLUENCY_MODES = ("raw", "per-token")
SALIENCE_BACKENDS = ("lexical", "adapter")
ENTITY_BACKENDS = ("surface-match", "adapter")
FLUENCY_BACKENDS = ("bundled", "adapter")


class ScoringError(ValueError):
    """Raised on invalid scoring configuration or inputs."""


def _clamp01(value: float) -> float:
    return 0.0 if value < 0.0 else 1.0 if value > 1.0 else value


@dataclass(frozen=True, slots=True)
class ScoreBreakdown:
    """The six factors and their product."""

    s_fl: float
    s_mp: float
    s_si: float
    s_en: float
    s_gb: float
    s_de: float
    total: float

    @classmethod
    def from_factors(
        cls, s_fl: float, s_mp: float, s_si: float, s_en: float, s_gb: float, s_de: float
    ) -> "ScoreBreakdown":
        # One fixed multiplication order keeps totals bit-reproducible.
        total = s_fl * s_mp * s_si * s_en * s_gb * s_de
        return cls(s_fl, s_mp, s_si, s_en, s_gb, s_de, total)

    def verify(self) -> bool:
        """Re-multiply the factors and compare with the stored total."""
        return self.total == self.s_fl * self.s_mp * self.s_si * self.s_en * self.s_gb * self.s_de

    def to_dict(self) -> dict:
        return {
            "s_fl": self.s_fl,
            "s_mp": self.s_mp,
            "s_si": self.s_si,
            "s_en": self.s_en,
            "s_gb": self.s_gb,
            "s_de": self.s_de,
            "total": self.total,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ScoreBreakdown":
        return cls(**{k: float(raw[k]) for k in ("s_fl", "s_mp", "s_si", "s_en", "s_gb", "s_de", "total")})


@dataclass(frozen=True, slots=True)
class ScoringConfig:
    lambda_fre: float = -30.0
    r_op: float = 0.6
    fluency_mode: str = "raw"
    fluency_backend: str = "bundled"
    salience_backend: str = "lexical"
    entity_backend: str = "surface-match"

    def __post_init__(self) -> None:
        if self.lambda_fre >= FRE_MAX:
            raise ScoringError(f"lambda_fre must be below {FRE_MAX}, got {self.lambda_fre}")
        if not (0.0 < self.r_op <= 1.0):
            raise ScoringError(f"r_op must be in (0, 1], got {self.r_op}")
        for name, value, allowed in (
            ("fluency_mode", self.fluency_mode, FLUENCY_MODES),
            ("fluency_backend", self.fluency_backend, FLUENCY_BACKENDS),
            ("salience_backend", self.salience_backend, SALIENCE_BACKENDS),
            ("entity_backend", self.entity_backend, ENTITY_BACKENDS),
        ):
            if value not in allowed:
                raise ScoringError(f"{name} must be one of {allowed}, got {value!r}")


def fluency_from_probabilities(p_lm: float, p_u: float, token_count: int) -> float:
    """Length-normalized raw-probability margin, clamped to [0, 1]."""
    if token_count <= 0:
        raise EmptyTextError("token count must be positive")
    return _clamp01((p_lm - p_u) / token_count)


def fluency_from_log_probabilities(log_lm: float, log_u: float, token_count: int) -> float:
    """Per-token geometric-mean margin, clamped to [0, 1]."""
    if token_count <= 0:
        raise EmptyTextError("token count must be positive")
    return _clamp01(math.exp(log_lm / token_count) - math.exp(log_u / token_count))


def score_fluency(
    text: str,
    lm: NGramLanguageModel,
    stats: CorpusStatistics,
    mode: str = "raw",
) -> float:
    """Fluency of `text` under the bundled n-gram model."""
    token_count = len(tokenize(text))
    if token_count == 0:
        raise EmptyTextError("text has no tokens")
    if mode == "raw":
        return fluency_from_probabilities(
            sentence_probability(lm, text), unigram_probability(stats, text), token_count
        )
    if mode == "per-token":
        return fluency_from_log_probabilities(
            sentence_log_probability(lm, text), unigram_log_probability(stats, text), token_count
        )
    raise ScoringError(f"unknown fluency mode: {mode!r}")


def lexical_salience_f1(reference: str, candidate: str, stats: CorpusStatistics) -> float:
    """IDF-weighted token-matching F1 of `candidate` against `reference`."""
    reference_tokens = tokenize(reference)
    candidate_tokens = tokenize(candidate)
    if not reference_tokens or not candidate_tokens:
        raise EmptyTextError("both texts need at least one token")
    reference_counts = Counter(reference_tokens)
    candidate_counts = Counter(candidate_tokens)

    def weight(token: str) -> float:
        return max(idf(stats, token), _IDF_FLOOR)

    matched = sum(
        min(reference_counts[t], candidate_counts[t]) * weight(t)
        for t in reference_counts.keys() & candidate_counts.keys()
    )
    precision_total = sum(count * weight(t) for t, count in candidate_counts.items())
    recall_total = sum(count * weight(t) for t, count in reference_counts.items())
    precision = matched / precision_total
    recall = matched / recall_total
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def simplicity_from_fre(fre: float, lambda_fre: float = -30.0) -> float:
    """Normalize a readability value onto [0, 1] between lambda_fre and the maximum."""
    if lambda_fre >= FRE_MAX:
        raise ScoringError(f"lambda_fre must be below {FRE_MAX}, got {lambda_fre}")
    return _clamp01((fre - lambda_fre) / (FRE_MAX - lambda_fre))


def score_simplicity(text: str, lambda_fre: float = -30.0) -> float:
    return simplicity_from_fre(flesch_reading_ease(text), lambda_fre)


def score_entity(extracted: Iterable[str], graph_entities: Iterable[str]) -> float:
    """1 minus the hallucinated-entity share, floored at 0."""
    graph_set = {normalize(e) for e in graph_entities}
    if not graph_set:
        raise ScoringError("graph entity set is empty")
    extracted_set = {normalize(e) for e in extracted}
    hallucinated = len(extracted_set - graph_set)
    return _clamp01(1.0 - hallucinated / len(graph_set))


def check_brevity(previous_count: int, proposed_count: int, r_op: float = 0.6) -> float:
    """Hard floor on per-step shrinkage; the ratio is compared inclusively."""
    if previous_count <= 0:
        raise ScoringError("previous graph must have at least one triple")
    return 1.0 if proposed_count / previous_count >= r_op else 0.0


def _cased_tokens(text: str) -> tuple[list[str], list[tuple[int, int]], str]:
    nfc = unicodedata.normalize("NFC", text)
    tokens: list[str] = []
    spans: list[tuple[int, int]] = []
    for match in _TOKEN_RE.finditer(nfc):
        tokens.append(match.group(0))
        spans.append((match.start(), match.end()))
    return tokens, spans, nfc


def _find_token_subsequence(haystack: list[str], needle: list[str]) -> list[tuple[int, int]]:
    if not needle or len(needle) > len(haystack):
        return []
    hits = []
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i : i + len(needle)] == needle:
            hits.append((i, i + len(needle)))
    return hits


def phrase_mentioned(text: str, phrase: str) -> bool:
    """Case-insensitive token-boundary containment of `phrase` in `text`."""
    tokens, _, _ = _cased_tokens(text)
    lowered = [t.lower() for t in tokens]
    return bool(_find_token_subsequence(lowered, tokenize_phrase(phrase)))


def check_deleted(text: str, deleted_entities: Iterable[str]) -> float:
    """Hard constraint: deleted entities may not be mentioned."""
    for entity in deleted_entities:
        if phrase_mentioned(text, entity):
            return 0.0
    return 1.0


@dataclass(frozen=True)
class SurfaceMatchExtractor:
    """Entity extraction by exact surface matching against a known-entity set,
    plus any capitalized span of two or more tokens that no known match covers
    (a likely invented proper noun)."""

    known_entities: tuple[str, ...]
    _token_forms: dict[str, tuple[str, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        forms: dict[str, tuple[str, ...]] = {}
        for entity in self.known_entities:
            key = normalize(entity)
            if key and key not in forms:
                forms[key] = tuple(tokenize_phrase(entity))
        object.__setattr__(self, "_token_forms", forms)

    def extract(self, text: str) -> set[str]:
        tokens, spans, nfc = _cased_tokens(text)
        lowered = [t.lower() for t in tokens]
        found: set[str] = set()
        covered: set[int] = set()
        for key, needle in self._token_forms.items():
            hits = _find_token_subsequence(lowered, list(needle))
            if hits:
                found.add(key)
                for hit_start, hit_end in hits:
                    covered.update(range(hit_start, hit_end))
        for start, end in self._capitalized_runs(tokens, spans, nfc):
            # Within a run, only stretches of tokens no known match accounts
            # for can be inventions; a lone leftover token never is.
            sub_start: int | None = None
            for i in range(start, end + 1):
                in_sub = i < end and i not in covered
                if in_sub and sub_start is None:
                    sub_start = i
                elif not in_sub and sub_start is not None:
                    if i - sub_start >= 2:
                        found.add(normalize(" ".join(tokens[sub_start:i])))
                    sub_start = None
        return found

    @staticmethod
    def _capitalized_runs(
        tokens: list[str], spans: list[tuple[int, int]], nfc: str
    ) -> list[tuple[int, int]]:
        runs: list[tuple[int, int]] = []
        run_start: int | None = None
        for i, token in enumerate(tokens):
            capitalized = token[:1].isupper()
            breaks_run = False
            if run_start is not None and i > 0:
                gap = nfc[spans[i - 1][1] : spans[i][0]]
                breaks_run = bool(re.search(r"[.!?]", gap))
            if capitalized and run_start is not None and not breaks_run:
                continue
            if run_start is not None:
                runs.append((run_start, i))
                run_start = None
            if capitalized:
                run_start = i
        if run_start is not None:
            runs.append((run_start, len(tokens)))
        return runs


@dataclass
class Scorer:
    """Bundle of corpus assets, backends, and configuration behind score_total."""

    stats: CorpusStatistics
    lm: NGramLanguageModel
    extractor: SurfaceMatchExtractor
    config: ScoringConfig = field(default_factory=ScoringConfig)
    adapter: AdapterClient | None = None
    adapter_timeout: float = DEFAULT_REQUEST_TIMEOUT

    def __post_init__(self) -> None:
        needs_adapter = (
            self.config.fluency_backend == "adapter"
            or self.config.salience_backend == "adapter"
            or self.config.entity_backend == "adapter"
        )
        if needs_adapter and self.adapter is None:
            raise ScoringError("an adapter-backed scoring backend needs an adapter client")

    def fluency(self, text: str) -> float:
        if self.config.fluency_backend == "bundled":
            return score_fluency(text, self.lm, self.stats, self.config.fluency_mode)
        token_count = len(tokenize(text))
        if token_count == 0:
            raise EmptyTextError("text has no tokens")
        response = self.adapter.request("score_lm", {"text": text}, timeout=self.adapter_timeout)
        log_probs = response.get("log_probs")
        if not isinstance(log_probs, list) or not all(
            isinstance(x, (int, float)) for x in log_probs
        ):
            raise AdapterProtocolError(f"score_lm returned no log_probs list: {response!r}")
        log_lm = float(sum(log_probs))
        if self.config.fluency_mode == "raw":
            return fluency_from_probabilities(
                math.exp(log_lm), unigram_probability(self.stats, text), token_count
            )
        return fluency_from_log_probabilities(
            log_lm, unigram_log_probability(self.stats, text), token_count
        )

    def salience(self, reference: str, candidate: str) -> float:
        if self.config.salience_backend == "lexical":
            return lexical_salience_f1(reference, candidate, self.stats)
        response = self.adapter.request(
            "score_similarity",
            {"text_a": reference, "text_b": candidate},
            timeout=self.adapter_timeout,
        )
        score = response.get("score")
        if not isinstance(score, (int, float)):
            raise AdapterProtocolError(f"score_similarity returned no score: {response!r}")
        return _clamp01(float(score))

    def entities(self, text: str) -> set[str]:
        if self.config.entity_backend == "surface-match":
            return self.extractor.extract(text)
        response = self.adapter.request(
            "extract_entities", {"text": text}, timeout=self.adapter_timeout
        )
        entities = response.get("entities")
        if not isinstance(entities, list) or not all(isinstance(e, str) for e in entities):
            raise AdapterProtocolError(f"extract_entities returned no entity list: {response!r}")
        return {normalize(e) for e in entities if normalize(e)}

    def breakdown(
        self,
        initial_text: str,
        candidate_text: str,
        previous_graph: KnowledgeGraph,
        proposed_graph: KnowledgeGraph,
        deleted_entities: Iterable[str],
    ) -> ScoreBreakdown:
        """Score a proposal against the run's initial text and the last accepted graph."""
        return ScoreBreakdown.from_factors(
            s_fl=self.fluency(candidate_text),
            s_mp=self.salience(initial_text, candidate_text),
            s_si=score_simplicity(candidate_text, self.config.lambda_fre),
            s_en=score_entity(self.entities(candidate_text), proposed_graph.entity_set()),
            s_gb=check_brevity(len(previous_graph), len(proposed_graph), self.config.r_op),
            s_de=check_deleted(candidate_text, deleted_entities),
        )

    def initial(self, initial_text: str, graph: KnowledgeGraph) -> ScoreBreakdown:
        """Score the starting state: salience and both hard constraints hold by fiat."""
        return ScoreBreakdown.from_factors(
            s_fl=self.fluency(initial_text),
            s_mp=1.0,
            s_si=score_simplicity(initial_text, self.config.lambda_fre),
            s_en=score_entity(self.entities(initial_text), graph.entity_set()),
            s_gb=1.0,
            s_de=1.0,
        )


def score_total(
    scorer: Scorer,
    initial_text: str,
    candidate_text: str,
    previous_graph: KnowledgeGraph,
    proposed_graph: KnowledgeGraph,
    deleted_entities: Iterable[str],
) -> ScoreBreakdown:
    """Functional entry point over Scorer.breakdown."""
    return scorer.breakdown(
        initial_text, candidate_text, previous_graph, proposed_graph, deleted_entities
    )
