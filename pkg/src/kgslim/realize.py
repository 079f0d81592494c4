"""Graph-to-text realization.

The bundled realizer is a deterministic template: one sentence per triple,
reading head, verbalized relation, tail. An external neural generator can
stand in through the adapter protocol; its failures surface as exceptions the
search loop treats as proposal rejections.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .adapter import AdapterClient, AdapterProtocolError, DEFAULT_REQUEST_TIMEOUT
from .graph import EmptyGraphError, KnowledgeGraph

_CAMEL_RE = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


def verbalize_relation(relation: str) -> str:
    """Readable relation text: split camelCase and underscores, lowercase,
    and join merged parts with ' and '."""
    from .graph import MERGE_SEPARATOR

    parts = []
    for part in relation.split(MERGE_SEPARATOR):
        spaced = _CAMEL_RE.sub(" ", part.replace("_", " "))
        cleaned = " ".join(spaced.split()).lower()
        if cleaned:
            parts.append(cleaned)
    return " and ".join(parts)


def _sentence(head: str, relation: str, tail: str) -> str:
    text = " ".join(f"{head} {verbalize_relation(relation)} {tail}".split())
    return text[:1].upper() + text[1:] + "."


def realize_template(graph: KnowledgeGraph) -> str:
    """One sentence per triple, in triple order, joined by single spaces."""
    if len(graph) == 0:
        raise EmptyGraphError("cannot realize an empty graph")
    return " ".join(_sentence(t.head, t.relation, t.tail) for t in graph.triples)


class TemplateGenerator:
    """Bundled deterministic generator."""

    name = "template"

    def generate(self, graph: KnowledgeGraph) -> str:
        return realize_template(graph)

    def close(self) -> None:
        return None


@dataclass
class AdapterGenerator:
    """Generator backed by an external adapter's `generate` capability."""

    client: AdapterClient
    timeout: float = DEFAULT_REQUEST_TIMEOUT
    name: str = "adapter"

    def generate(self, graph: KnowledgeGraph) -> str:
        if len(graph) == 0:
            raise EmptyGraphError("cannot realize an empty graph")
        payload = {"graph": [t.to_list() for t in graph.triples]}
        response = self.client.request("generate", payload, timeout=self.timeout)
        text = response.get("text")
        if not isinstance(text, str) or not text.strip():
            raise AdapterProtocolError(f"generator returned no usable text: {response!r}")
        return text

    def close(self) -> None:
        self.client.close()
