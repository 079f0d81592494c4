"""Shared fixtures: small graphs and corpora used across the suite."""
from __future__ import annotations

import pytest

from kgslim.corpus import build_corpus_stats, build_language_model
from kgslim.graph import KnowledgeGraph, Triple


def make_graph(*triples: tuple[str, str, str], graph_id: str = "g") -> KnowledgeGraph:
    return KnowledgeGraph(tuple(Triple(*t) for t in triples), graph_id)


@pytest.fixture()
def car_graph() -> KnowledgeGraph:
    return make_graph(
        ("Vam classic", "alternative name", "AMC Matador"),
        ("Kenosha, Wisconsin", "assembly", "AMC Matador"),
        ("mid-size car", "class", "AMC Matador"),
        ("AMC straight-6 engine", "engine", "AMC Matador"),
        graph_id="car",
    )


TOY_DOCUMENTS = [
    "the cat sat on the mat",
    "a dog barked at the cat",
    "the dog and the cat played outside",
    "birds sing in the morning",
    "a quiet morning by the lake",
]


@pytest.fixture(scope="session")
def toy_stats():
    return build_corpus_stats(TOY_DOCUMENTS)


@pytest.fixture(scope="session")
def toy_lm():
    return build_language_model(TOY_DOCUMENTS, order=3, k=0.01)
