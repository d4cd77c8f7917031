"""Graph files: the trinet v1 text format, DOT and GraphML export."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

from .core import COLOR_CHARS, ColoredTrinet

COLOR_NAMES = ("red", "blue", "green")
HEADER = "trinet v1"


class TrinetFormatError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def write_trinet(G: ColoredTrinet, writer: int | None = None) -> str:
    lines = [HEADER, f"vertices {G.n}"]
    lines += [f"edge {u} {v} {COLOR_CHARS[c]}" for u, v, c in G.edges()]
    if writer is not None:
        lines.append(f"writer {writer}")
    return "\n".join(lines) + "\n"


def read_trinet(text: str) -> tuple[ColoredTrinet, int | None]:
    """Parse trinet v1 text; returns the graph and the writer (or None)."""
    rows = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1)]
    rows = [(i, f) for i, f in rows if f and not f[0].startswith("#")]
    if not rows or rows[0][1] != HEADER.split():
        raise TrinetFormatError(rows[0][0] if rows else 1, f"expected {HEADER!r}")
    if len(rows) < 2 or len(rows[1][1]) != 2 or rows[1][1][0] != "vertices":
        raise TrinetFormatError(rows[1][0] if len(rows) > 1 else 2, "expected 'vertices N'")
    n = _int(rows[1][1][1], rows[1][0])
    if n <= 0:
        raise TrinetFormatError(rows[1][0], "vertex count must be positive")
    nbr = [-1] * (3 * n)
    writer = None
    for k, (line, f) in enumerate(rows[2:], 2):
        if writer is not None:
            raise TrinetFormatError(line, "nothing may follow the writer line")
        if f[0] == "writer" and len(f) == 2:
            writer = _int(f[1], line)
            if not 0 <= writer < n:
                raise TrinetFormatError(line, f"writer {writer} out of range")
            continue
        if f[0] != "edge" or len(f) != 4:
            raise TrinetFormatError(line, "expected 'edge <u> <v> <r|b|g>'")
        u, v = _int(f[1], line), _int(f[2], line)
        if f[3] not in COLOR_CHARS:
            raise TrinetFormatError(line, f"unknown color {f[3]!r}")
        c = COLOR_CHARS.index(f[3])
        if u == v:
            raise TrinetFormatError(line, f"self-loop at {u}")
        for x, y in ((u, v), (v, u)):
            if not 0 <= x < n:
                raise TrinetFormatError(line, f"vertex {x} out of range")
            if nbr[3 * x + c] != -1:
                raise TrinetFormatError(line, f"vertex {x} already has a {COLOR_NAMES[c]} edge")
            nbr[3 * x + c] = y
    last = rows[-1][0]
    for i, y in enumerate(nbr):
        if y == -1:
            raise TrinetFormatError(last, f"vertex {i // 3} has no {COLOR_NAMES[i % 3]} edge")
    return ColoredTrinet(nbr), writer


def _int(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise TrinetFormatError(line, f"expected an integer, got {tok!r}") from None


def load_trinet(path) -> tuple[ColoredTrinet, int | None]:
    return read_trinet(Path(path).read_text())


def save_trinet(path, G: ColoredTrinet, writer: int | None = None) -> None:
    Path(path).write_text(write_trinet(G, writer))


def to_dot(G: ColoredTrinet, writer: int | None = None,
           trail: list[tuple[int, int]] | None = None) -> str:
    """Undirected DOT with colored edges; a trail is drawn as black arrows."""
    out = ["graph trinet {"]
    if writer is not None:
        out.append(f'  {writer} [shape=doublecircle];')
    for u, v, c in G.edges():
        out.append(f'  {u} -- {v} [color="{COLOR_NAMES[c]}"];')
    for a, b in trail or ():
        out.append(f'  {a} -- {b} [color="black", dir=forward, style=bold];')
    out.append("}")
    return "\n".join(out) + "\n"


def to_graphml(G: ColoredTrinet, writer: int | None = None) -> str:
    ns = "http://graphml.graphdrawing.org/xmlns"
    root = ET.Element("graphml", xmlns=ns)
    ET.SubElement(root, "key", {"id": "color", "for": "edge", "attr.name": "color",
                                "attr.type": "string"})
    ET.SubElement(root, "key", {"id": "writer", "for": "node", "attr.name": "writer",
                                "attr.type": "boolean"})
    g = ET.SubElement(root, "graph", id="trinet", edgedefault="undirected")
    for v in range(G.n):
        node = ET.SubElement(g, "node", id=f"n{v}")
        if v == writer:
            ET.SubElement(node, "data", key="writer").text = "true"
    for i, (u, v, c) in enumerate(G.edges()):
        e = ET.SubElement(g, "edge", id=f"e{i}", source=f"n{u}", target=f"n{v}")
        ET.SubElement(e, "data", key="color").text = COLOR_NAMES[c]
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


EXPORTERS = {"trinet": write_trinet, "dot": to_dot, "graphml": to_graphml}
