from __future__ import annotations

import pytest

from kgslim.graph import EmptyGraphError, KnowledgeGraph
from kgslim.realize import TemplateGenerator, realize_template, verbalize_relation

from conftest import make_graph


@pytest.mark.parametrize(
    ("relation", "expected"),
    [
        ("assembly", "assembly"),
        ("birthPlace", "birth place"),
        ("located_in", "located in"),
        ("alternativeName", "alternative name"),
        ("was selected by NASA", "was selected by nasa"),
        ("play|sep|locatedIn", "play and located in"),
        ("a_b|sep|cD|sep|e", "a b and c d and e"),
        ("mass3Kg", "mass3 kg"),
    ],
)
def test_verbalize_relation(relation: str, expected: str) -> None:
    assert verbalize_relation(relation) == expected


def test_realize_template_reads_triples_in_order() -> None:
    graph = make_graph(
        ("Alan Bean", "birthPlace", "Wheeler, Texas"),
        ("mid-size car", "class", "AMC Matador"),
    )
    assert realize_template(graph) == (
        "Alan Bean birth place Wheeler, Texas. Mid-size car class AMC Matador."
    )


def test_realize_template_verbalizes_merged_relations(car_graph) -> None:
    text = realize_template(car_graph)
    assert text.startswith("Vam classic alternative name AMC Matador.")
    assert text.endswith("AMC straight-6 engine engine AMC Matador.")
    assert "|sep|" not in text
    merged = make_graph(("a", "r1|sep|r2", "b"))
    assert realize_template(merged) == "A r1 and r2 b."


def test_realize_template_collapses_extra_whitespace() -> None:
    graph = make_graph(("  two   words ", "r", "tail"))
    assert realize_template(graph) == "Two words r tail."


def test_realize_template_rejects_empty_graph() -> None:
    with pytest.raises(EmptyGraphError):
        realize_template(KnowledgeGraph((), graph_id="empty"))


def test_template_generator_is_a_named_closeable_wrapper(car_graph) -> None:
    generator = TemplateGenerator()
    assert generator.name == "template"
    assert generator.generate(car_graph) == realize_template(car_graph)
    generator.close()  # no-op, must not raise
