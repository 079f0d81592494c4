"""Knowledge-graph data model: triples, graphs, edit proposals, and search states."""
from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator

if TYPE_CHECKING:
    from .scoring import ScoreBreakdown

# Literal marker joining the relations of a merged triple.
MERGE_SEPARATOR = "|sep|"


class GraphError(ValueError):
    """Base class for graph-model failures."""


class EntityNotFoundError(GraphError):
    """Raised when an operation names an entity absent from the graph."""


class EmptyGraphError(GraphError):
    """Raised when an operation requires at least one triple."""


class GraphFileError(GraphError):
    """Raised when a graph file cannot be parsed; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def normalize(text: str) -> str:
    """Canonical comparison form: NFC, lowercase, whitespace collapsed."""
    return " ".join(unicodedata.normalize("NFC", text).lower().split())


@dataclass(frozen=True, slots=True)
class Triple:
    """One directed edge. Surfaces keep their original casing."""

    head: str
    relation: str
    tail: str

    def key(self) -> tuple[str, str, str]:
        """Identity used for equality checks and tie-breaking."""
        return (normalize(self.head), normalize(self.relation), normalize(self.tail))

    def sub_relations(self) -> tuple[str, ...]:
        """Relation split at the merge separator; unmerged relations yield one part."""
        return tuple(part.strip() for part in self.relation.split(MERGE_SEPARATOR))

    def phrases(self) -> tuple[str, str, str]:
        return (self.head, self.relation, self.tail)

    def to_list(self) -> list[str]:
        return [self.head, self.relation, self.tail]

    @classmethod
    def from_list(cls, raw: Iterable[str]) -> "Triple":
        parts = list(raw)
        if len(parts) != 3 or not all(isinstance(p, str) for p in parts):
            raise GraphError(f"a triple must be three strings, got {parts!r}")
        return cls(parts[0], parts[1], parts[2])


@dataclass(frozen=True, slots=True)
class KnowledgeGraph:
    """Ordered collection of triples with derived entity and relation views."""

    triples: tuple[Triple, ...]
    graph_id: str = ""

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def entities(self) -> tuple[str, ...]:
        """Unique entity surfaces in first-appearance order (head before tail)."""
        seen: dict[str, str] = {}
        for triple in self.triples:
            for surface in (triple.head, triple.tail):
                seen.setdefault(normalize(surface), surface)
        return tuple(seen.values())

    def entity_set(self) -> frozenset[str]:
        """Normalized entity identities."""
        return frozenset(normalize(s) for t in self.triples for s in (t.head, t.tail))

    def relations(self) -> tuple[str, ...]:
        """Unique relation surfaces in first-appearance order, merged forms intact."""
        seen: dict[str, str] = {}
        for triple in self.triples:
            seen.setdefault(normalize(triple.relation), triple.relation)
        return tuple(seen.values())

    def has_entity(self, entity: str) -> bool:
        return normalize(entity) in self.entity_set()

    def entity_degree(self, entity: str) -> int:
        """Number of triples in which the entity appears as head or tail."""
        target = normalize(entity)
        if target not in self.entity_set():
            raise EntityNotFoundError(f"entity not in graph: {entity!r}")
        return sum(
            1
            for t in self.triples
            if normalize(t.head) == target or normalize(t.tail) == target
        )

    def remove_entity(self, entity: str) -> "KnowledgeGraph":
        """New graph without the entity and without every triple incident to it."""
        target = normalize(entity)
        if target not in self.entity_set():
            raise EntityNotFoundError(f"entity not in graph: {entity!r}")
        kept = tuple(
            t
            for t in self.triples
            if normalize(t.head) != target and normalize(t.tail) != target
        )
        return KnowledgeGraph(kept, self.graph_id)

    def replace_triples(self, triples: Iterable[Triple]) -> "KnowledgeGraph":
        return KnowledgeGraph(tuple(triples), self.graph_id)

    def to_dict(self) -> dict:
        return {"id": self.graph_id, "triples": [t.to_list() for t in self.triples]}

    @classmethod
    def from_dict(cls, raw: dict) -> "KnowledgeGraph":
        if not isinstance(raw, dict):
            raise GraphError(f"a graph record must be an object, got {type(raw).__name__}")
        graph_id = raw.get("id")
        if not isinstance(graph_id, str):
            raise GraphError("graph record field 'id' must be a string")
        triples_raw = raw.get("triples")
        if not isinstance(triples_raw, list):
            raise GraphError("graph record field 'triples' must be an array")
        return cls(tuple(Triple.from_list(item) for item in triples_raw), graph_id)


def validate(graph: KnowledgeGraph) -> list[str]:
    """List every contract violation; an empty graph is valid."""
    violations: list[str] = []
    seen: dict[tuple[str, str, str], int] = {}
    for index, triple in enumerate(graph.triples):
        for slot, value in zip(("head", "relation", "tail"), triple.phrases()):
            if not normalize(value):
                violations.append(f"triple {index}: empty {slot}")
        if MERGE_SEPARATOR in triple.relation:
            parts = triple.sub_relations()
            if len(parts) < 2 or any(not normalize(p) for p in parts):
                violations.append(
                    f"triple {index}: merged relation has an empty part: {triple.relation!r}"
                )
        key = triple.key()
        if key in seen:
            violations.append(f"triple {index}: duplicate of triple {seen[key]}")
        else:
            seen[key] = index
    return violations


@dataclass(frozen=True, slots=True)
class Proposal:
    """One candidate edit: the operation kind, the edited graph, and bookkeeping."""

    kind: str  # "delete" | "replace" | "merge"
    new_graph: KnowledgeGraph
    detail: str
    newly_deleted_entities: frozenset[str] = frozenset()
    attempted_word: str | None = None  # replace only


@dataclass(frozen=True, slots=True)
class OperationRecord:
    """One attempt inside the search loop, accepted or not."""

    iteration: int
    kind: str
    detail: str
    accepted: bool
    score: "ScoreBreakdown | None" = None
    text: str | None = None
    triples: tuple[Triple, ...] | None = None  # accepted snapshots only
    newly_deleted: frozenset[str] = frozenset()

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "kind": self.kind,
            "detail": self.detail,
            "accepted": self.accepted,
            "score": self.score.to_dict() if self.score is not None else None,
            "text": self.text,
            "triples": [t.to_list() for t in self.triples] if self.triples is not None else None,
            "newly_deleted": sorted(self.newly_deleted),
        }


@dataclass(frozen=True, slots=True)
class CandidateState:
    """A point on the search trajectory: graph, realized text, score, ledgers."""

    graph: KnowledgeGraph
    text: str
    score: "ScoreBreakdown"
    deleted_entities: frozenset[str] = frozenset()
    attempted_replacements: frozenset[str] = frozenset()
    history: tuple[OperationRecord, ...] = ()

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "text": self.text,
            "score": self.score.to_dict(),
            "deleted_entities": sorted(self.deleted_entities),
            "attempted_replacements": sorted(self.attempted_replacements),
        }


def load_graphs(path: str) -> list[KnowledgeGraph]:
    """Read line-delimited graph records; parse failures name the offending line."""
    graphs: list[KnowledgeGraph] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise GraphFileError(line_number, f"invalid JSON ({exc.msg})") from exc
            try:
                graphs.append(KnowledgeGraph.from_dict(raw))
            except GraphError as exc:
                raise GraphFileError(line_number, str(exc)) from exc
    return graphs


def dump_graphs(graphs: Iterable[KnowledgeGraph]) -> str:
    """Serialize graphs back to the line-delimited record format."""
    return "".join(json.dumps(g.to_dict(), ensure_ascii=False) + "\n" for g in graphs)
