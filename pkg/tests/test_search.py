from __future__ import annotations

import math

import numpy as np
import pytest

from kgslim.adapter import GeneratorError
from kgslim.corpus import SimplificationLexicon, build_corpus_stats, build_language_model
from kgslim.realize import TemplateGenerator
from kgslim.reduction import OperationWeights
from kgslim.scoring import ScoreBreakdown, Scorer, SurfaceMatchExtractor
from kgslim.search import (
    BatchItem,
    SearchConfig,
    SearchError,
    accept_prev,
    accept_sa,
    accept_zero,
    cool,
    derive_seed,
    run_batch,
    run_simplification,
    temperature_at,
)

from conftest import TOY_DOCUMENTS, make_graph

DELETE_ONLY = OperationWeights(delete=1.0, replace=0.0, merge=0.0)
REPLACE_ONLY = OperationWeights(delete=0.0, replace=1.0, merge=0.0)

EMPTY_LEXICON = SimplificationLexicon({})


def breakdown(total: float) -> ScoreBreakdown:
    return ScoreBreakdown.from_factors(total, 1.0, 1.0, 1.0, 1.0, 1.0)


class StubScorer:
    """Duck-typed scorer returning a scripted sequence of totals."""

    def __init__(self, stats, totals, initial_total: float = 0.5):
        self.stats = stats
        self._totals = iter(totals)
        self._initial_total = initial_total

    def initial(self, text, graph) -> ScoreBreakdown:
        return breakdown(self._initial_total)

    def breakdown(self, *args) -> ScoreBreakdown:
        return breakdown(next(self._totals))


class FailingScorer(StubScorer):
    def breakdown(self, *args) -> ScoreBreakdown:
        raise GeneratorError("scorer adapter fell over")


class FlakyGenerator(TemplateGenerator):
    """Realizes the initial graph, then fails on every proposal."""

    def __init__(self) -> None:
        self._calls = 0

    def generate(self, graph) -> str:
        self._calls += 1
        if self._calls > 1:
            raise GeneratorError("neural generator crashed")
        return super().generate(graph)


def chain_graph():
    return make_graph(
        ("a", "r", "b"), ("b", "r", "c"), ("c", "r", "d"), ("d", "r", "e"), graph_id="chain"
    )


# ---------------------------------------------------------------- config

def test_search_config_validation() -> None:
    with pytest.raises(SearchError):
        SearchConfig(condition="always")
    with pytest.raises(SearchError):
        SearchConfig(iterations=-1)
    with pytest.raises(SearchError):
        SearchConfig(max_retries_per_iteration=0)
    with pytest.raises(SearchError):
        SearchConfig(condition="sa", t0=0.0)
    with pytest.raises(SearchError):
        SearchConfig(cooling_alpha=0.0)
    with pytest.raises(SearchError):
        SearchConfig(cooling_alpha=1.5)
    with pytest.raises(SearchError):
        SearchConfig(seed=-1)
    with pytest.raises(SearchError):
        SearchConfig(sa_sign="sideways")
    # t0 is only constrained under simulated annealing
    SearchConfig(condition="zero", t0=0.0)


def test_search_config_round_trips_through_dict() -> None:
    config = SearchConfig(
        condition="prev",
        iterations=7,
        max_retries_per_iteration=3,
        weights=OperationWeights(2.0, 0.0, 1.0),
        t0=0.25,
        cooling_alpha=0.8,
        seed=42,
        sa_sign="inverted",
    )
    assert SearchConfig.from_dict(config.to_dict()) == config


# ---------------------------------------------------------------- temperature

def test_temperature_schedule_is_closed_form() -> None:
    assert temperature_at(0.1, 0.9, 0) == 0.1  # the first iteration runs at t0
    assert temperature_at(0.1, 0.9, 50) == 0.1 * 0.9**50
    assert cool(0.1, 0.9) == pytest.approx(0.09)
    chained = 0.1
    for _ in range(50):
        chained = cool(chained, 0.9)
    assert chained == pytest.approx(temperature_at(0.1, 0.9, 50), rel=1e-10)


# ---------------------------------------------------------------- acceptance rules

def test_accept_zero_keeps_any_violation_free_proposal() -> None:
    assert accept_zero(breakdown(0.01))
    assert not accept_zero(breakdown(0.0))


def test_accept_prev_requires_strict_improvement() -> None:
    assert accept_prev(breakdown(0.6), breakdown(0.5))
    assert not accept_prev(breakdown(0.5), breakdown(0.5))
    assert not accept_prev(breakdown(0.4), breakdown(0.5))


def test_accept_sa_rejects_zero_totals_at_any_temperature() -> None:
    rng = np.random.default_rng(0)
    assert not accept_sa(breakdown(0.0), breakdown(0.5), temperature=1e9, rng=rng)


def test_accept_sa_takes_improvements_without_consuming_randomness() -> None:
    rng = np.random.default_rng(123)
    assert accept_sa(breakdown(0.6), breakdown(0.5), 0.1, rng)
    assert accept_sa(breakdown(0.5), breakdown(0.5), 0.1, rng)  # equal counts as >= 0
    assert rng.random() == np.random.default_rng(123).random()


def test_accept_sa_worse_proposals_follow_the_boltzmann_rate() -> None:
    rng = np.random.default_rng(7)
    worse, previous, temperature = breakdown(0.45), breakdown(0.5), 0.1
    taken = sum(accept_sa(worse, previous, temperature, rng) for _ in range(3000))
    assert abs(taken / 3000 - math.exp(-0.5)) < 0.05


def test_accept_sa_inverted_sign_flips_the_comparison() -> None:
    rng = np.random.default_rng(7)
    # Under the literal reading a worse proposal has a positive exponent.
    assert accept_sa(breakdown(0.4), breakdown(0.5), 0.1, rng, sign="inverted")
    taken = sum(
        accept_sa(breakdown(0.55), breakdown(0.5), 0.1, rng, sign="inverted")
        for _ in range(3000)
    )
    assert abs(taken / 3000 - math.exp(-0.5)) < 0.05


# ---------------------------------------------------------------- single-run loop

def test_prev_condition_bookkeeping(toy_stats) -> None:
    scorer = StubScorer(toy_stats, totals=[0.6, 0.4, 0.7])
    config = SearchConfig(
        condition="prev", iterations=3, max_retries_per_iteration=1, weights=DELETE_ONLY
    )
    result = run_simplification(chain_graph(), TemplateGenerator(), scorer, EMPTY_LEXICON, config)
    assert [r.accepted for r in result.trajectory] == [True, False, True]
    assert result.acceptance_counts == {"delete": 2, "replace": 0, "merge": 0}
    assert result.initial.score.total == 0.5
    assert result.last_accepted.score.total == 0.7
    assert result.best_accepted is result.last_accepted
    assert len(result.last_accepted.graph) == 2
    assert len(result.last_accepted.history) == 2
    # only accepted records snapshot the graph
    assert result.trajectory[0].triples is not None
    assert result.trajectory[1].triples is None
    # deleted entities accumulate and never reappear in the surviving graph
    deleted = result.last_accepted.deleted_entities
    assert deleted and deleted.isdisjoint(result.last_accepted.graph.entity_set())


def test_zero_condition_accepts_worse_but_valid_proposals(toy_stats) -> None:
    scorer = StubScorer(toy_stats, totals=[0.2, 0.0, 0.3])
    config = SearchConfig(
        condition="zero", iterations=3, max_retries_per_iteration=1, weights=DELETE_ONLY
    )
    result = run_simplification(chain_graph(), TemplateGenerator(), scorer, EMPTY_LEXICON, config)
    assert [r.accepted for r in result.trajectory] == [True, False, True]
    # best keeps the highest total even though the last accepted is different
    assert result.best_accepted.score.total == 0.3
    assert result.last_accepted.score.total == 0.3


def test_best_tracks_the_earliest_maximum(toy_stats) -> None:
    scorer = StubScorer(toy_stats, totals=[0.7, 0.3, 0.7])
    config = SearchConfig(
        condition="zero", iterations=3, max_retries_per_iteration=1, weights=DELETE_ONLY
    )
    result = run_simplification(chain_graph(), TemplateGenerator(), scorer, EMPTY_LEXICON, config)
    assert [r.accepted for r in result.trajectory] == [True, True, True]
    assert result.best_accepted.score.total == 0.7
    assert len(result.best_accepted.graph) == 3  # the first 0.7, not the second


def test_sa_condition_never_accepts_zero_totals(toy_stats) -> None:
    scorer = StubScorer(toy_stats, totals=[0.0] * 12)
    config = SearchConfig(
        condition="sa", iterations=3, max_retries_per_iteration=4, weights=DELETE_ONLY
    )
    result = run_simplification(chain_graph(), TemplateGenerator(), scorer, EMPTY_LEXICON, config)
    assert not any(r.accepted for r in result.trajectory)
    assert result.last_accepted is result.initial
    assert result.best_accepted is result.initial


def test_no_candidate_attempts_fill_the_retry_budget(toy_stats) -> None:
    scorer = StubScorer(toy_stats, totals=[])
    config = SearchConfig(
        condition="zero", iterations=5, max_retries_per_iteration=10, weights=REPLACE_ONLY
    )
    result = run_simplification(chain_graph(), TemplateGenerator(), scorer, EMPTY_LEXICON, config)
    assert len(result.trajectory) == 50
    assert all(r.detail == "no candidate available" for r in result.trajectory)
    assert not any(r.accepted for r in result.trajectory)
    assert result.last_accepted is result.initial


def test_rejected_replacements_burn_their_word(toy_stats) -> None:
    # Both words are unseen (equal idf); candidates are corpus words (lower idf).
    stats = build_corpus_stats(["plain tiny words here", "more plain tiny words"])
    lexicon = SimplificationLexicon({"qux": ("plain",), "zot": ("tiny",)})
    graph = make_graph(("qux", "r", "zot"), ("zot", "r2", "other"))
    scorer = StubScorer(stats, totals=[0.0, 0.0])
    config = SearchConfig(
        condition="zero", iterations=1, max_retries_per_iteration=3, weights=REPLACE_ONLY
    )
    result = run_simplification(graph, TemplateGenerator(), scorer, lexicon, config)
    details = [r.detail for r in result.trajectory]
    assert "'qux'" in details[0]
    assert "'zot'" in details[1]
    assert details[2] == "no candidate available"
    assert result.last_accepted.attempted_replacements == frozenset({"qux", "zot"})


def test_generation_failures_reject_the_attempt(toy_stats) -> None:
    scorer = StubScorer(toy_stats, totals=[])
    config = SearchConfig(
        condition="zero", iterations=1, max_retries_per_iteration=2, weights=DELETE_ONLY
    )
    result = run_simplification(chain_graph(), FlakyGenerator(), scorer, EMPTY_LEXICON, config)
    assert len(result.trajectory) == 2
    assert all("generation failed" in r.detail for r in result.trajectory)
    assert result.last_accepted is result.initial


def test_scoring_failures_reject_the_attempt(toy_stats) -> None:
    scorer = FailingScorer(toy_stats, totals=[])
    config = SearchConfig(
        condition="zero", iterations=1, max_retries_per_iteration=2, weights=DELETE_ONLY
    )
    result = run_simplification(chain_graph(), TemplateGenerator(), scorer, EMPTY_LEXICON, config)
    assert len(result.trajectory) == 2
    assert all("scoring failed" in r.detail for r in result.trajectory)


def test_zero_iterations_returns_the_initial_state(toy_stats) -> None:
    scorer = StubScorer(toy_stats, totals=[])
    config = SearchConfig(condition="zero", iterations=0)
    result = run_simplification(chain_graph(), TemplateGenerator(), scorer, EMPTY_LEXICON, config)
    assert result.trajectory == ()
    assert result.last_accepted is result.initial
    assert result.best_accepted is result.initial


def test_initial_realization_failure_is_fatal(toy_stats) -> None:
    class DeadGenerator(TemplateGenerator):
        def generate(self, graph) -> str:
            raise GeneratorError("dead on arrival")

    scorer = StubScorer(toy_stats, totals=[])
    config = SearchConfig(condition="zero", iterations=1)
    with pytest.raises(GeneratorError):
        run_simplification(chain_graph(), DeadGenerator(), scorer, EMPTY_LEXICON, config)


# ---------------------------------------------------------------- batch

def real_scorer() -> Scorer:
    stats = build_corpus_stats(TOY_DOCUMENTS)
    lm = build_language_model(TOY_DOCUMENTS)
    return Scorer(stats=stats, lm=lm, extractor=SurfaceMatchExtractor(()))


def batch_graphs():
    return [
        make_graph(("the cat", "sat on", "the mat"), ("a dog", "barked at", "the cat"),
                   ("the dog", "played", "outside"), graph_id="g-cat"),
        make_graph(("birds", "sing in", "the morning"), ("a quiet morning", "by", "the lake"),
                   ("the lake", "near", "the morning"), graph_id="g-lake"),
        make_graph(("the dog", "and", "the cat"), ("the cat", "played", "outside"),
                   ("birds", "sing in", "the morning"), graph_id="g-mix"),
    ]


def test_derive_seed_is_stable_and_id_sensitive() -> None:
    assert derive_seed(0, "g-cat") == derive_seed(0, "g-cat")
    assert derive_seed(0, "g-cat") != derive_seed(0, "g-lake")
    assert derive_seed(7, "g-cat") != derive_seed(0, "g-cat")
    assert 0 <= derive_seed(2**64 - 1, "anything") < 2**64


def test_run_batch_is_reproducible_across_parallelism() -> None:
    scorer = real_scorer()
    config = SearchConfig(condition="sa", iterations=8, max_retries_per_iteration=4, seed=3)
    lexicon = SimplificationLexicon({})
    serial = run_batch(batch_graphs(), TemplateGenerator(), scorer, lexicon, config, parallelism=1)
    threaded = run_batch(batch_graphs(), TemplateGenerator(), scorer, lexicon, config, parallelism=3)
    assert [item.to_dict() for item in serial] == [item.to_dict() for item in threaded]
    assert [item.graph_id for item in serial] == ["g-cat", "g-lake", "g-mix"]
    assert all(item.error is None for item in serial)


def test_run_batch_isolates_per_graph_failures() -> None:
    from kgslim.graph import KnowledgeGraph

    scorer = real_scorer()
    config = SearchConfig(condition="zero", iterations=2, seed=1)
    graphs = [
        batch_graphs()[0],
        KnowledgeGraph((), graph_id="g-empty"),  # initial realization fails
        batch_graphs()[1],
    ]
    items = run_batch(graphs, TemplateGenerator(), scorer, SimplificationLexicon({}), config)
    assert isinstance(items[1], BatchItem)
    assert items[1].result is None
    assert "EmptyGraphError" in items[1].error
    assert items[0].result is not None and items[2].result is not None
