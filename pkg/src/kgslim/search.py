"""Iterative simplification search.

Each iteration samples one operation kind, builds its deterministic proposal,
realizes the edited graph, scores it, and applies the configured acceptance
condition. Rejected or unbuildable attempts are resampled up to a retry budget
and every attempt is recorded, so a trajectory is a complete audit log.
"""
from __future__ import annotations

import concurrent.futures
import dataclasses
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .adapter import AdapterError
from .corpus import CorpusStatistics, SimplificationLexicon
from .graph import CandidateState, KnowledgeGraph, OperationRecord
from .reduction import OPERATION_KINDS, OperationWeights, propose, sample_operation
from .scoring import ScoreBreakdown, Scorer

CONDITIONS = ("zero", "prev", "sa")
SA_SIGNS = ("standard", "inverted")


class SearchError(ValueError):
    """Raised on invalid search configuration."""


@dataclass(frozen=True, slots=True)
class SearchConfig:
    condition: str = "sa"
    iterations: int = 50
    max_retries_per_iteration: int = 10
    weights: OperationWeights = field(default_factory=OperationWeights)
    t0: float = 0.1
    cooling_alpha: float = 0.9
    seed: int = 0
    sa_sign: str = "standard"

    def __post_init__(self) -> None:
        if self.condition not in CONDITIONS:
            raise SearchError(f"condition must be one of {CONDITIONS}, got {self.condition!r}")
        if self.iterations < 0:
            raise SearchError(f"iterations must be >= 0, got {self.iterations}")
        if self.max_retries_per_iteration < 1:
            raise SearchError(
                f"max_retries_per_iteration must be >= 1, got {self.max_retries_per_iteration}"
            )
        if self.condition == "sa" and self.t0 <= 0:
            raise SearchError(f"t0 must be positive under sa, got {self.t0}")
        if not (0.0 < self.cooling_alpha <= 1.0):
            raise SearchError(f"cooling_alpha must be in (0, 1], got {self.cooling_alpha}")
        if not (0 <= self.seed < 2**64):
            raise SearchError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.sa_sign not in SA_SIGNS:
            raise SearchError(f"sa_sign must be one of {SA_SIGNS}, got {self.sa_sign!r}")

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "iterations": self.iterations,
            "max_retries_per_iteration": self.max_retries_per_iteration,
            "weights": {
                "delete": self.weights.delete,
                "replace": self.weights.replace,
                "merge": self.weights.merge,
            },
            "t0": self.t0,
            "cooling_alpha": self.cooling_alpha,
            "seed": self.seed,
            "sa_sign": self.sa_sign,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "SearchConfig":
        weights = raw.get("weights", {})
        return cls(
            condition=raw.get("condition", "sa"),
            iterations=int(raw.get("iterations", 50)),
            max_retries_per_iteration=int(raw.get("max_retries_per_iteration", 10)),
            weights=OperationWeights(
                float(weights.get("delete", 1.0)),
                float(weights.get("replace", 1.0)),
                float(weights.get("merge", 1.0)),
            ),
            t0=float(raw.get("t0", 0.1)),
            cooling_alpha=float(raw.get("cooling_alpha", 0.9)),
            seed=int(raw.get("seed", 0)),
            sa_sign=raw.get("sa_sign", "standard"),
        )


def cool(temperature: float, alpha: float) -> float:
    """One cooling step."""
    return temperature * alpha


def temperature_at(t0: float, alpha: float, iterations_completed: int) -> float:
    """Closed-form temperature after a number of completed iterations."""
    return t0 * alpha**iterations_completed


def accept_zero(score: ScoreBreakdown) -> bool:
    """Keep any proposal that violates nothing."""
    return score.total > 0.0


def accept_prev(score: ScoreBreakdown, previous: ScoreBreakdown) -> bool:
    """Keep only strict improvements."""
    return score.total > previous.total


def accept_sa(
    score: ScoreBreakdown,
    previous: ScoreBreakdown,
    temperature: float,
    rng: np.random.Generator,
    sign: str = "standard",
) -> bool:
    """Annealed acceptance; a zero total is rejected before any draw."""
    if score.total == 0.0:
        return False
    delta = score.total - previous.total
    exponent = delta if sign == "standard" else -delta
    if exponent >= 0.0:
        return True
    return rng.random() < math.exp(exponent / temperature)


@dataclass(frozen=True, slots=True)
class SearchResult:
    graph_id: str
    initial: CandidateState
    last_accepted: CandidateState
    best_accepted: CandidateState
    trajectory: tuple[OperationRecord, ...]
    acceptance_counts: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "initial": self.initial.to_dict(),
            "last_accepted": self.last_accepted.to_dict(),
            "best_accepted": self.best_accepted.to_dict(),
            "trajectory": [record.to_dict() for record in self.trajectory],
            "acceptance_counts": dict(self.acceptance_counts),
        }


def run_simplification(
    graph: KnowledgeGraph,
    generator,
    scorer: Scorer,
    lexicon: SimplificationLexicon,
    config: SearchConfig,
) -> SearchResult:
    """Search one graph. Failures to realize the initial text are fatal;
    failures on a proposal only reject that attempt."""
    rng = np.random.default_rng(config.seed)
    stats: CorpusStatistics = scorer.stats
    initial_text = generator.generate(graph)
    initial = CandidateState(
        graph=graph,
        text=initial_text,
        score=scorer.initial(initial_text, graph),
    )
    state = initial
    best: CandidateState | None = None
    trajectory: list[OperationRecord] = []
    acceptance_counts = {kind: 0 for kind in OPERATION_KINDS}

    for iteration in range(1, config.iterations + 1):
        temperature = temperature_at(config.t0, config.cooling_alpha, iteration - 1)
        for _attempt in range(config.max_retries_per_iteration):
            kind = sample_operation(config.weights, rng)
            proposal = propose(kind, state.graph, stats, lexicon, state.attempted_replacements)
            if proposal is None:
                trajectory.append(
                    OperationRecord(iteration, kind, "no candidate available", accepted=False)
                )
                continue
            try:
                candidate_text = generator.generate(proposal.new_graph)
            except AdapterError as exc:
                trajectory.append(
                    OperationRecord(
                        iteration, kind, f"generation failed: {exc}", accepted=False
                    )
                )
                continue
            deleted = state.deleted_entities | proposal.newly_deleted_entities
            try:
                score = scorer.breakdown(
                    initial_text, candidate_text, state.graph, proposal.new_graph, deleted
                )
            except AdapterError as exc:
                trajectory.append(
                    OperationRecord(iteration, kind, f"scoring failed: {exc}", accepted=False)
                )
                continue

            if config.condition == "zero":
                accepted = accept_zero(score)
            elif config.condition == "prev":
                accepted = accept_prev(score, state.score)
            else:
                accepted = accept_sa(score, state.score, temperature, rng, config.sa_sign)

            record = OperationRecord(
                iteration=iteration,
                kind=kind,
                detail=proposal.detail,
                accepted=accepted,
                score=score,
                text=candidate_text,
                triples=proposal.new_graph.triples if accepted else None,
                newly_deleted=proposal.newly_deleted_entities,
            )
            trajectory.append(record)
            if accepted:
                attempted = state.attempted_replacements
                if proposal.attempted_word is not None:
                    attempted = attempted | {proposal.attempted_word}
                state = CandidateState(
                    graph=proposal.new_graph,
                    text=candidate_text,
                    score=score,
                    deleted_entities=deleted,
                    attempted_replacements=attempted,
                    history=state.history + (record,),
                )
                acceptance_counts[kind] += 1
                if best is None or score.total > best.score.total:
                    best = state
                break
            if proposal.attempted_word is not None:
                # A rejected replacement still burns its target word, otherwise
                # the deterministic proposal would retry it forever.
                state = dataclasses.replace(
                    state,
                    attempted_replacements=state.attempted_replacements
                    | {proposal.attempted_word},
                )

    return SearchResult(
        graph_id=graph.graph_id,
        initial=initial,
        last_accepted=state,
        best_accepted=best if best is not None else initial,
        trajectory=tuple(trajectory),
        acceptance_counts=acceptance_counts,
    )


def derive_seed(base_seed: int, graph_id: str) -> int:
    """Stable per-graph seed: base XOR a content hash of the graph id."""
    digest = hashlib.blake2b(graph_id.encode("utf-8"), digest_size=8).digest()
    return (base_seed ^ int.from_bytes(digest, "big")) & (2**64 - 1)


@dataclass(frozen=True, slots=True)
class BatchItem:
    """Outcome slot for one graph in a batch: a result or an error, never both."""

    graph_id: str
    result: SearchResult | None
    error: str | None

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "result": self.result.to_dict() if self.result is not None else None,
            "error": self.error,
        }


def run_batch(
    graphs: list[KnowledgeGraph],
    generator,
    scorer: Scorer,
    lexicon: SimplificationLexicon,
    config: SearchConfig,
    parallelism: int | None = None,
) -> list[BatchItem]:
    """Run every graph with its own derived seed; failures stay in their slot.

    Results are identical for any parallelism because each run draws from its
    own generator and shares only immutable components.
    """
    workers = parallelism if parallelism and parallelism > 0 else 1

    def run_one(graph: KnowledgeGraph) -> BatchItem:
        run_config = dataclasses.replace(config, seed=derive_seed(config.seed, graph.graph_id))
        try:
            result = run_simplification(graph, generator, scorer, lexicon, run_config)
            return BatchItem(graph.graph_id, result, None)
        except Exception as exc:  # isolate per-graph failures
            return BatchItem(graph.graph_id, None, f"{type(exc).__name__}: {exc}")

    if workers == 1:
        return [run_one(graph) for graph in graphs]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, graphs))
