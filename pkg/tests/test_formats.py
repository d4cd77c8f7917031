import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import trinets
from trinet.formats import (TrinetFormatError, load_trinet, read_trinet, save_trinet, to_dot,
                            to_graphml, write_trinet)


@settings(deadline=None)
@given(trinets, st.one_of(st.none(), st.integers(0, 3)))
def test_trinet_round_trip(G, writer):
    H, w = read_trinet(write_trinet(G, writer))
    assert H == G and w == writer


def test_cube_file(cube, tmp_path):
    text = write_trinet(cube, 0)
    assert text.startswith("trinet v1\nvertices 8\n")
    assert sum(1 for ln in text.splitlines() if ln.startswith("edge ")) == 12
    assert text.splitlines()[-1] == "writer 0"
    path = tmp_path / "cube.trinet"
    save_trinet(path, cube, 3)
    assert load_trinet(path) == (cube, 3)


def test_comments_and_blank_lines(cube):
    text = "# a cube\n\n" + write_trinet(cube).replace("\nedge", "\n  # edge list\nedge", 1)
    assert read_trinet(text) == (cube, None)


def _broken(cube, old, new):
    return write_trinet(cube, 0).replace(old, new, 1)


@pytest.mark.parametrize("mutate, line, message", [
    (lambda t: t.replace("trinet v1", "trinet v2"), 1, "trinet v1"),
    (lambda t: t.replace("vertices 8", "vertices x"), 2, "integer"),
    (lambda t: t.replace("vertices 8", "vertices 0"), 2, "positive"),
    (lambda t: t.replace("vertices 8", "size 8"), 2, "vertices"),
    (lambda t: t.replace(" r\n", " q\n", 1), 3, "color"),
    (lambda t: t.replace("edge 0 1", "edge 0 0", 1), 3, "self-loop"),
    (lambda t: t.replace("edge 0 1", "edge 0 9", 1), 3, "out of range"),
    (lambda t: t.replace("edge 0 1", "node 0 1", 1), 3, "expected 'edge"),
    (lambda t: t.replace("writer 0", "writer 8"), 15, "out of range"),
    (lambda t: t + "edge 0 1 r\n", 16, "follow the writer"),
])
def test_errors_report_line(cube, mutate, line, message):
    text = write_trinet(cube, 0)
    assert text.splitlines()[2].startswith("edge 0 1")
    with pytest.raises(TrinetFormatError) as err:
        read_trinet(mutate(text))
    assert err.value.line == line
    assert message in str(err.value) and f"line {line}" in str(err.value)


def test_duplicate_color_and_missing_edge(cube):
    lines = write_trinet(cube).splitlines()
    doubled = "\n".join(lines + [lines[2]])
    with pytest.raises(TrinetFormatError, match="already has"):
        read_trinet(doubled)
    with pytest.raises(TrinetFormatError, match="has no"):
        read_trinet("\n".join(lines[:-1]))
    with pytest.raises(TrinetFormatError):
        read_trinet("")


def test_dot_export(cube):
    dot = to_dot(cube, 0, trail=[(0, 1)])
    assert dot.startswith("graph trinet {") and dot.rstrip().endswith("}")
    assert sum(1 for ln in dot.splitlines() if " -- " in ln and "black" not in ln) == 12
    for name in ("red", "blue", "green"):
        assert dot.count(f'color="{name}"') == 4
    assert "doublecircle" in dot and "dir=forward" in dot


def test_graphml_export(cube):
    root = ET.fromstring(to_graphml(cube, 2))
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    graph = root.find("g:graph", ns)
    assert len(graph.findall("g:node", ns)) == 8
    edges = graph.findall("g:edge", ns)
    assert len(edges) == 12
    colors = sorted(e.find("g:data", ns).text for e in edges)
    assert colors == ["blue"] * 4 + ["green"] * 4 + ["red"] * 4
    writers = [n.get("id") for n in graph.findall("g:node", ns) if n.find("g:data", ns) is not None]
    assert writers == ["n2"]
