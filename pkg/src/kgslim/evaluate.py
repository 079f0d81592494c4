"""Run-level evaluation: text statistics, graph statistics, entity bookkeeping,
operation acceptance shares, and report rendering.

The composite quality score folds compression, syllable reduction, fluency, and
salience into one number by complementing the two ratio metrics (lower is
better) and taking the geometric mean of the four resulting [0, 1] values.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import CorpusStatistics, text_syllable_count
from .graph import KnowledgeGraph, normalize
from .scoring import SurfaceMatchExtractor, lexical_salience_f1
from .search import SearchResult

CSV_COLUMNS = ["system", "Len", "CR", "SC", "SR", "CTH", "CTD", "EO", "Add", "Delete", "F", "S", "GM"]


class EvaluationError(ValueError):
    """Raised on invalid metric inputs."""


def geometric_mean(cr: float, sr: float, f: float, s: float) -> float:
    """Fourth root of (1-CR) * (1-SR) * F * S; every input must sit in [0, 1]."""
    for name, value in (("cr", cr), ("sr", sr), ("f", f), ("s", s)):
        if not (0.0 <= value <= 1.0):
            raise EvaluationError(f"{name} must be in [0, 1], got {value}")
    return ((1.0 - cr) * (1.0 - sr) * f * s) ** 0.25


@dataclass(frozen=True, slots=True)
class TextMetrics:
    length: int
    compression_ratio: float
    syllable_count: int
    syllable_ratio: float
    salience: float
    fluency: float | None = None

    @property
    def gm(self) -> float | None:
        if self.fluency is None:
            return None
        try:
            return geometric_mean(
                self.compression_ratio, self.syllable_ratio, self.fluency, self.salience
            )
        except EvaluationError:
            return None  # ratios above 1 (the text grew) have no composite score

    def to_dict(self) -> dict:
        return {
            "Len": self.length,
            "CR": self.compression_ratio,
            "SC": self.syllable_count,
            "SR": self.syllable_ratio,
            "F": self.fluency,
            "S": self.salience,
            "GM": self.gm,
        }


def text_metrics(
    initial_text: str,
    final_text: str,
    stats: CorpusStatistics,
    fluency: float | None = None,
) -> TextMetrics:
    """Length, compression, syllables, and salience of the final text.

    Lengths count whitespace-delimited words; syllables follow the shared
    token-level counter. `fluency` is an externally supplied acceptability
    score when one is configured.
    """
    initial_words = initial_text.split()
    final_words = final_text.split()
    if not initial_words or not final_words:
        raise EvaluationError("texts must contain at least one word")
    initial_syllables = text_syllable_count(initial_text)
    final_syllables = text_syllable_count(final_text)
    return TextMetrics(
        length=len(final_words),
        compression_ratio=len(final_words) / len(initial_words),
        syllable_count=final_syllables,
        syllable_ratio=final_syllables / initial_syllables,
        salience=lexical_salience_f1(initial_text, final_text, stats),
        fluency=fluency,
    )


@dataclass(frozen=True, slots=True)
class GraphMetrics:
    triples: int
    triple_ratio: float
    entity_ratio: float
    relation_ratio: float

    def to_dict(self) -> dict:
        return {
            "triples": self.triples,
            "TR": self.triple_ratio,
            "ER": self.entity_ratio,
            "RR": self.relation_ratio,
        }


def _unique_sub_relations(graph: KnowledgeGraph) -> set[str]:
    parts: set[str] = set()
    for triple in graph.triples:
        for sub in triple.sub_relations():
            parts.add(normalize(sub))
    return parts


def graph_metrics(initial_graph: KnowledgeGraph, final_graph: KnowledgeGraph) -> GraphMetrics:
    """Triple, entity, and relation retention; merged relations count their parts."""
    if len(initial_graph) == 0:
        raise EvaluationError("initial graph is empty")
    initial_entities = initial_graph.entity_set()
    final_entities = final_graph.entity_set()
    initial_relations = _unique_sub_relations(initial_graph)
    final_relations = _unique_sub_relations(final_graph)
    return GraphMetrics(
        triples=len(final_graph),
        triple_ratio=len(final_graph) / len(initial_graph),
        entity_ratio=len(final_entities) / len(initial_entities),
        relation_ratio=len(final_relations) / len(initial_relations),
    )


@dataclass(frozen=True, slots=True)
class EntityMetrics:
    overlap: int
    added: int
    deleted: int

    def to_dict(self) -> dict:
        return {"EO": self.overlap, "Add": self.added, "Delete": self.deleted}


def entity_metrics(
    initial_text: str, final_text: str, extractor: SurfaceMatchExtractor
) -> EntityMetrics:
    """Entity-set drift between the initial and final texts."""
    initial_entities = extractor.extract(initial_text)
    final_entities = extractor.extract(final_text)
    return EntityMetrics(
        overlap=len(initial_entities & final_entities),
        added=len(final_entities - initial_entities),
        deleted=len(initial_entities - final_entities),
    )


def operation_stats(results: Iterable[SearchResult]) -> dict[str, float] | None:
    """Acceptance share per operation kind, averaged per run then macro-averaged.

    Runs that accepted nothing contribute no ratios; returns None if no run
    accepted anything.
    """
    per_run: list[dict[str, float]] = []
    for result in results:
        total = sum(result.acceptance_counts.values())
        if total == 0:
            continue
        per_run.append({k: v / total for k, v in result.acceptance_counts.items()})
    if not per_run:
        return None
    kinds = sorted({kind for ratios in per_run for kind in ratios})
    return {kind: sum(r.get(kind, 0.0) for r in per_run) / len(per_run) for kind in kinds}


def _mean(values: Sequence[float]) -> float | None:
    cleaned = [v for v in values if v is not None]
    if not cleaned:
        return None
    return sum(cleaned) / len(cleaned)


@dataclass(frozen=True, slots=True)
class SampleReport:
    graph_id: str
    text: TextMetrics
    graph: GraphMetrics
    entity: EntityMetrics
    parse_height: float | None = None  # filled only by a parse-stats adapter
    parse_diameter: float | None = None

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "text": self.text.to_dict(),
            "graph": self.graph.to_dict(),
            "entity": self.entity.to_dict(),
            "CTH": self.parse_height,
            "CTD": self.parse_diameter,
        }


def build_report(
    system: str,
    samples: Sequence[SampleReport],
    operations: dict[str, float] | None = None,
) -> dict:
    """Nested per-sample payload plus one aggregate row."""
    if not samples:
        raise EvaluationError("no samples to report")
    aggregate = {
        "Len": _mean([s.text.length for s in samples]),
        "CR": _mean([s.text.compression_ratio for s in samples]),
        "SC": _mean([s.text.syllable_count for s in samples]),
        "SR": _mean([s.text.syllable_ratio for s in samples]),
        "CTH": _mean([s.parse_height for s in samples]),
        "CTD": _mean([s.parse_diameter for s in samples]),
        "EO": _mean([s.entity.overlap for s in samples]),
        "Add": _mean([s.entity.added for s in samples]),
        "Delete": _mean([s.entity.deleted for s in samples]),
        "F": _mean([s.text.fluency for s in samples]),
        "S": _mean([s.text.salience for s in samples]),
        "GM": _mean([s.text.gm for s in samples]),
        "triples": _mean([s.graph.triples for s in samples]),
        "TR": _mean([s.graph.triple_ratio for s in samples]),
        "ER": _mean([s.graph.entity_ratio for s in samples]),
        "RR": _mean([s.graph.relation_ratio for s in samples]),
    }
    return {
        "schema": 1,
        "system": system,
        "samples": [s.to_dict() for s in samples],
        "aggregate": aggregate,
        "operations": operations,
    }


def render_report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_report_csv(reports: Sequence[dict]) -> str:
    """One CSV row per system; unavailable cells stay blank."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        aggregate = report["aggregate"]
        row: list[str] = [report["system"]]
        for column in CSV_COLUMNS[1:]:
            value = aggregate.get(column)
            row.append("" if value is None else f"{value:.4f}")
        writer.writerow(row)
    return buffer.getvalue()
