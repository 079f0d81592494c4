"""kgslim: simplify small knowledge graphs through scored edit operations.

The package turns a knowledge graph into a shorter, simpler one by repeatedly
sampling delete/replace/merge edits, realizing each candidate as text, scoring
it with a six-factor product, and accepting or rejecting under a configurable
condition (constraint-only, strict improvement, or simulated annealing).
"""
from .corpus import (
    CorpusStatistics,
    NGramLanguageModel,
    SimplificationLexicon,
    build_corpus_stats,
    build_language_model,
    count_syllables,
    flesch_reading_ease,
    idf,
    load_lexicon,
    phrase_idf,
    phrase_pair_idf_sum,
    sentence_probability,
    tokenize,
    unigram_probability,
)
from .evaluate import (
    EntityMetrics,
    GraphMetrics,
    TextMetrics,
    entity_metrics,
    geometric_mean,
    graph_metrics,
    operation_stats,
    text_metrics,
)
from .graph import (
    MERGE_SEPARATOR,
    CandidateState,
    KnowledgeGraph,
    OperationRecord,
    Proposal,
    Triple,
    load_graphs,
    normalize,
    validate,
)
from .realize import AdapterGenerator, TemplateGenerator, realize_template
from .reduction import (
    OperationWeights,
    enumerate_merge_candidates,
    propose_delete,
    propose_merge,
    propose_replace,
    sample_operation,
)
from .scoring import (
    ScoreBreakdown,
    Scorer,
    ScoringConfig,
    SurfaceMatchExtractor,
    check_brevity,
    check_deleted,
    lexical_salience_f1,
    score_entity,
    score_fluency,
    score_simplicity,
)
from .search import (
    BatchItem,
    SearchConfig,
    SearchResult,
    accept_prev,
    accept_sa,
    accept_zero,
    cool,
    run_batch,
    run_simplification,
    temperature_at,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
