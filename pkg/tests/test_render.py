import random
import xml.etree.ElementTree as ET

import pytest

from equus.evaluate import EvalContext, evaluate
from equus.layout import SceneEdge, SceneGraph, SceneNode, layout
from equus.parser import parse
from equus.render import SceneJSONError, Theme, from_json, to_json, to_svg

from generators import fixture_resolve, random_expr


def scene_of(source):
    return layout(evaluate(parse(source)))


def svg_texts(svg: str) -> list[str]:
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    return [el.text for el in root.iter(f"{ns}text")]


def test_empty_scene_graph():
    g = SceneGraph((), (), (0.0, 0.0))
    svg = to_svg(g)
    root = ET.fromstring(svg)
    assert root.attrib["viewBox"] == "0 0 0 0"
    assert len(list(root)) == 0


def test_motivating_case_svg_contains_all_values():
    svg = to_svg(scene_of("=2+3*4"))
    texts = svg_texts(svg)
    for needed in ("2", "3", "4", "12", "14"):
        assert needed in texts, needed


def test_error_graph_uses_error_palette():
    theme = Theme()
    svg = to_svg(scene_of("=1/0"), theme)
    assert theme.fills["error-origin"] in svg
    assert theme.fills["error"] in svg


def test_inactive_branch_rendered_dimmed():
    svg = to_svg(scene_of("=IF(TRUE,1,2+3)"))
    assert 'opacity="0.45"' in svg


def test_refgroup_accents_share_stroke():
    theme = Theme()
    svg = to_svg(scene_of("=X1+X1"), theme)
    assert svg.count(theme.accents[0]) == 2


def test_svg_is_deterministic():
    g = scene_of("=SUM(1,2)*3%")
    assert to_svg(g) == to_svg(g)
    assert to_json(g) == to_json(g)


def test_svg_escapes_markup_in_labels():
    svg = to_svg(scene_of('="<b>&amp;"&"x"'))
    ET.fromstring(svg)  # would raise if not well-formed
    assert "&lt;b&gt;" in svg


def test_svg_well_formed_for_random_scenes():
    rng = random.Random(31)
    ctx = EvalContext(resolve=fixture_resolve)
    for _ in range(200):
        g = layout(evaluate(random_expr(rng, 5, allow_misused_range=True), ctx))
        ET.fromstring(to_svg(g))


def test_json_round_trip_motivating_case():
    g = scene_of("=2+3*4")
    assert from_json(to_json(g)) == g


def test_json_round_trip_random_scenes():
    rng = random.Random(37)
    ctx = EvalContext(resolve=fixture_resolve)
    for _ in range(150):
        g = layout(evaluate(random_expr(rng, 5, allow_misused_range=True), ctx))
        again = from_json(to_json(g))
        assert again == g
        assert len(again.nodes) == len(g.nodes)


def test_json_schema_field_names():
    import json

    doc = json.loads(to_json(scene_of("=1+2")))
    assert set(doc) == {"nodes", "edges", "bounds"}
    node = doc["nodes"][0]
    assert set(node) == {
        "id", "kind", "shape", "label", "value", "x", "y", "w", "h", "style", "refGroup",
    }
    edge = doc["edges"][0]
    assert set(edge) == {"from", "to", "points"}
    assert set(doc["bounds"]) == {"w", "h"}


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("not json", "$"),
        ("[]", "$"),
        ('{"nodes": 5, "edges": [], "bounds": {"w": 1, "h": 1}}', "$.nodes"),
        ('{"nodes": [], "edges": [], "bounds": {}}', "$.bounds"),
        (
            '{"nodes": [{"id": "a"}], "edges": [], "bounds": {"w": 1, "h": 1}}',
            "$.nodes[0]",
        ),
        (
            '{"nodes": [], "edges": [{"from": "a", "to": "b", "points": [[0, 0], [1, 1]]}],'
            ' "bounds": {"w": 1, "h": 1}}',
            "$.edges[0].from",
        ),
    ],
)
def test_from_json_rejects_with_position(text, fragment):
    with pytest.raises(SceneJSONError) as err:
        from_json(text)
    assert fragment in str(err.value)


def test_from_json_rejects_bad_style_and_kind():
    good = to_json(scene_of("=1"))
    with pytest.raises(SceneJSONError) as err:
        from_json(good.replace('"style": "normal"', '"style": "sparkly"', 1))
    assert ".style" in str(err.value)


def test_duplicate_node_ids_rejected():
    node = (
        '{"id": "n", "kind": "literal", "shape": "rounded-rect", "label": "1",'
        ' "value": "", "x": 0, "y": 0, "w": 1, "h": 1, "style": "normal", "refGroup": null}'
    )
    text = f'{{"nodes": [{node}, {node}], "edges": [], "bounds": {{"w": 1, "h": 1}}}}'
    with pytest.raises(SceneJSONError) as err:
        from_json(text)
    assert "duplicate node id" in str(err.value)


def test_svg_element_subset():
    svg = to_svg(scene_of("=SUM(A1:A2)+1%"))
    root = ET.fromstring(svg)
    allowed = {"rect", "circle", "polygon", "path", "text", "g", "svg", "title"}
    for el in root.iter():
        tag = el.tag.split("}")[-1]
        assert tag in allowed, tag
