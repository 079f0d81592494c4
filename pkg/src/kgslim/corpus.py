"""Corpus-derived assets: IDF statistics, an n-gram language model, syllable and
readability helpers, and the simplification lexicon.

One tokenizer is shared by every consumer so that IDF weights, language-model
probabilities, and readability counts agree on what a token is.
"""
from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import MERGE_SEPARATOR, Triple

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

# Highest value the readability formula can produce (one one-syllable word).
FRE_MAX = 121.22

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_VOWELS = frozenset("aeiouy")


class CorpusError(ValueError):
    """Base class for corpus-layer failures."""


class EmptyCorpusError(CorpusError):
    """Raised when a corpus has no documents or no tokens."""


class EmptyTextError(CorpusError):
    """Raised when a text yields no tokens."""


class NoLettersError(CorpusError):
    """Raised when a word contains no letters to count syllables over."""


class LexiconError(CorpusError):
    """Raised on lexicon parse failures; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on non-alphanumerics; digits are kept."""
    return _TOKEN_RE.findall(unicodedata.normalize("NFC", text).lower())


def tokenize_phrase(phrase: str) -> list[str]:
    """Tokenize a graph phrase; merge separators never become tokens."""
    return tokenize(phrase.replace(MERGE_SEPARATOR, " "))


@dataclass(frozen=True, slots=True)
class CorpusStatistics:
    """Document frequencies and unigram probabilities from a background corpus."""

    document_count: int
    document_frequency: dict[str, int]
    token_counts: dict[str, int]
    total_tokens: int

    @property
    def vocabulary_size(self) -> int:
        return len(self.token_counts)

    @property
    def oov_probability(self) -> float:
        """Probability mass reserved for any unseen token (one add-one slot)."""
        return 1.0 / (self.total_tokens + self.vocabulary_size + 1)

    def token_probability(self, token: str) -> float:
        """Add-one-smoothed unigram probability; unseen tokens share the OOV slot."""
        count = self.token_counts.get(token.lower(), 0)
        if count == 0:
            return self.oov_probability
        return (count + 1) / (self.total_tokens + self.vocabulary_size + 1)

    def to_dict(self) -> dict:
        return {
            "document_count": self.document_count,
            "document_frequency": dict(sorted(self.document_frequency.items())),
            "token_counts": dict(sorted(self.token_counts.items())),
            "total_tokens": self.total_tokens,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "CorpusStatistics":
        return cls(
            document_count=int(raw["document_count"]),
            document_frequency={str(k): int(v) for k, v in raw["document_frequency"].items()},
            token_counts={str(k): int(v) for k, v in raw["token_counts"].items()},
            total_tokens=int(raw["total_tokens"]),
        )


def build_corpus_stats(documents: Iterable[str]) -> CorpusStatistics:
    """Count document frequencies and token totals over one document per item."""
    document_count = 0
    document_frequency: dict[str, int] = {}
    token_counts: dict[str, int] = {}
    total = 0
    for document in documents:
        tokens = tokenize(document)
        document_count += 1
        for token in tokens:
            token_counts[token] = token_counts.get(token, 0) + 1
        total += len(tokens)
        for token in set(tokens):
            document_frequency[token] = document_frequency.get(token, 0) + 1
    if document_count == 0 or total == 0:
        raise EmptyCorpusError("corpus has no tokens")
    return CorpusStatistics(document_count, document_frequency, token_counts, total)


def idf(stats: CorpusStatistics, token: str) -> float:
    """ln(N / df); unseen tokens take df = 1, the rarest observable band."""
    df = stats.document_frequency.get(token.lower(), 0)
    return math.log(stats.document_count / max(1, df))


def phrase_idf(stats: CorpusStatistics, phrase: str) -> float:
    """Mean token IDF of a phrase; a tokenless phrase scores 0."""
    tokens = tokenize_phrase(phrase)
    if not tokens:
        return 0.0
    return sum(idf(stats, token) for token in tokens) / len(tokens)


def phrase_pair_idf_sum(stats: CorpusStatistics, first: Triple, second: Triple) -> float:
    """Informativeness of a triple pair: summed phrase IDF over all six slots."""
    slots = first.phrases() + second.phrases()
    return sum(phrase_idf(stats, phrase) for phrase in slots)


def unigram_probability(stats: CorpusStatistics, text: str) -> float:
    """Product of independent unigram probabilities over the text's tokens."""
    tokens = tokenize(text)
    if not tokens:
        raise EmptyTextError("text has no tokens")
    probability = 1.0
    for token in tokens:
        probability *= stats.token_probability(token)
    return probability


def unigram_log_probability(stats: CorpusStatistics, text: str) -> float:
    tokens = tokenize(text)
    if not tokens:
        raise EmptyTextError("text has no tokens")
    return sum(math.log(stats.token_probability(token)) for token in tokens)


@dataclass(frozen=True, slots=True)
class NGramLanguageModel:
    """Interpolated add-k n-gram model over the shared tokenizer.

    Every conditional backs off recursively to the next-lower order, so each
    distribution sums to one over the vocabulary and every token keeps strictly
    positive probability.
    """

    order: int
    k: float
    vocabulary: frozenset[str]
    ngram_counts: dict[tuple[str, ...], int]
    context_counts: dict[tuple[str, ...], int]

    def conditional(self, token: str, context: Sequence[str]) -> float:
        """p(token | context) with backoff interpolation down to unigrams."""
        word = token if token in self.vocabulary else UNK
        v = len(self.vocabulary)
        context = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        # Unigram base case: add-k over the whole vocabulary.
        probability = (self.ngram_counts.get((word,), 0) + self.k) / (
            self.context_counts.get((), 0) + self.k * v
        )
        # Raise the order one step at a time, interpolating the lower order in.
        for n in range(2, self.order + 1):
            ctx = context[-(n - 1):]
            if len(ctx) < n - 1:
                break
            numerator = self.ngram_counts.get(ctx + (word,), 0) + self.k * v * probability
            probability = numerator / (self.context_counts.get(ctx, 0) + self.k * v)
        return probability

    def _scored_positions(self, tokens: Sequence[str]) -> tuple[list[str], int]:
        if not tokens:
            raise EmptyTextError("token sequence is empty")
        mapped = [t if t in self.vocabulary else UNK for t in tokens]
        if self.order == 1:
            return mapped, 0
        return [BOS] * (self.order - 1) + mapped + [EOS], self.order - 1

    def sequence_probability(self, tokens: Sequence[str]) -> float:
        """Product of conditional probabilities; boundary markers for order >= 2."""
        padded, start = self._scored_positions(tokens)
        probability = 1.0
        for i in range(start, len(padded)):
            probability *= self.conditional(padded[i], padded[max(0, i - self.order + 1):i])
        return probability

    def sequence_log_probability(self, tokens: Sequence[str]) -> float:
        """Sum of conditional log-probabilities; safe for texts that underflow."""
        padded, start = self._scored_positions(tokens)
        total = 0.0
        for i in range(start, len(padded)):
            total += math.log(self.conditional(padded[i], padded[max(0, i - self.order + 1):i]))
        return total

    def to_dict(self) -> dict:
        joiner = ""
        return {
            "order": self.order,
            "k": self.k,
            "vocabulary": sorted(self.vocabulary),
            "ngram_counts": {joiner.join(k): v for k, v in sorted(self.ngram_counts.items())},
            "context_counts": {joiner.join(k): v for k, v in sorted(self.context_counts.items())},
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "NGramLanguageModel":
        joiner = ""

        def split(key: str) -> tuple[str, ...]:
            return tuple(key.split(joiner)) if key else ()

        return cls(
            order=int(raw["order"]),
            k=float(raw["k"]),
            vocabulary=frozenset(raw["vocabulary"]),
            ngram_counts={split(k): int(v) for k, v in raw["ngram_counts"].items()},
            context_counts={split(k): int(v) for k, v in raw["context_counts"].items()},
        )


def build_language_model(
    documents: Iterable[str], order: int = 3, k: float = 0.01
) -> NGramLanguageModel:
    """Count n-grams of every order up to `order`, one document per item."""
    if order < 1:
        raise CorpusError(f"order must be >= 1, got {order}")
    if k <= 0:
        raise CorpusError(f"smoothing constant must be positive, got {k}")
    ngram_counts: dict[tuple[str, ...], int] = {}
    context_counts: dict[tuple[str, ...], int] = {}
    vocabulary: set[str] = {BOS, EOS, UNK}
    saw_tokens = False
    document_count = 0
    for document in documents:
        document_count += 1
        tokens = tokenize(document)
        if not tokens:
            continue
        saw_tokens = True
        vocabulary.update(tokens)
        padded = [BOS] * (order - 1) + tokens + ([EOS] if order > 1 else [])
        first_scored = order - 1 if order > 1 else 0
        for i in range(first_scored, len(padded)):
            for n in range(1, order + 1):
                if i - n + 1 < 0:
                    continue
                gram = tuple(padded[i - n + 1 : i + 1])
                ngram_counts[gram] = ngram_counts.get(gram, 0) + 1
                context = gram[:-1]
                context_counts[context] = context_counts.get(context, 0) + 1
    if document_count == 0 or not saw_tokens:
        raise EmptyCorpusError("corpus has no tokens")
    return NGramLanguageModel(order, k, frozenset(vocabulary), ngram_counts, context_counts)


def sentence_probability(lm: NGramLanguageModel, text: str) -> float:
    """Model probability of the whole text as one token sequence."""
    tokens = tokenize(text)
    if not tokens:
        raise EmptyTextError("text has no tokens")
    return lm.sequence_probability(tokens)


def sentence_log_probability(lm: NGramLanguageModel, text: str) -> float:
    tokens = tokenize(text)
    if not tokens:
        raise EmptyTextError("text has no tokens")
    return lm.sequence_log_probability(tokens)


def count_syllables(word: str) -> int:
    """Maximal vowel groups, minus a silent trailing 'e' (kept after 'l'), min 1."""
    letters = [c for c in unicodedata.normalize("NFC", word).lower() if c.isalpha()]
    if not letters:
        raise NoLettersError(f"no letters in word: {word!r}")
    groups = 0
    previous_was_vowel = False
    for letter in letters:
        is_vowel = letter in _VOWELS
        if is_vowel and not previous_was_vowel:
            groups += 1
        previous_was_vowel = is_vowel
    if (
        len(letters) >= 2
        and letters[-1] == "e"
        and letters[-2] not in _VOWELS
        and letters[-2] != "l"
    ):
        groups -= 1
    return max(1, groups)


def _token_syllables(token: str) -> int:
    """Syllables for readability counting; letterless tokens count one."""
    return count_syllables(token) if any(c.isalpha() for c in token) else 1


def count_sentences(text: str) -> int:
    """Non-empty segments between terminal punctuation runs, at least one."""
    segments = re.split(r"[.!?]+", text)
    return max(1, sum(1 for segment in segments if segment.strip()))


def flesch_reading_ease(text: str) -> float:
    """206.835 - 1.015 * words/sentences - 84.6 * syllables/words."""
    words = tokenize(text)
    if not words:
        raise EmptyTextError("text has no tokens")
    sentences = count_sentences(text)
    syllables = sum(_token_syllables(word) for word in words)
    return 206.835 - 1.015 * (len(words) / sentences) - 84.6 * (syllables / len(words))


def text_syllable_count(text: str) -> int:
    """Total syllables across the text's tokens (letterless tokens count one)."""
    words = tokenize(text)
    if not words:
        raise EmptyTextError("text has no tokens")
    return sum(_token_syllables(word) for word in words)


@dataclass(frozen=True, slots=True)
class SimplificationLexicon:
    """Map from a complex phrase to its candidate simpler phrases."""

    entries: dict[str, tuple[str, ...]]

    def lookup(self, phrase: str) -> tuple[str, ...]:
        from .graph import normalize

        return self.entries.get(normalize(phrase), ())

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(path: str) -> SimplificationLexicon:
    """Parse tab-separated complex/simple pairs; '#' lines are comments."""
    from .graph import normalize

    entries: dict[str, list[str]] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 2:
                raise LexiconError(line_number, f"expected two tab-separated fields, got {len(parts)}")
            complex_form = normalize(parts[0])
            simple_form = normalize(parts[1])
            if not complex_form or not simple_form:
                raise LexiconError(line_number, "empty phrase")
            if complex_form == simple_form:
                raise LexiconError(line_number, f"phrase maps to itself: {parts[0]!r}")
            bucket = entries.setdefault(complex_form, [])
            if simple_form not in bucket:
                bucket.append(simple_form)
    return SimplificationLexicon({k: tuple(v) for k, v in entries.items()})
