"""Edge-list ingestion and per-level exports (DOT, GraphML, JSON)."""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from fractions import Fraction
from typing import Optional

from .graph import PHYSICAL, TYPE1, TYPE2, Graph, GraphError
from .hierarchy import LnaHierarchy, resolve

__all__ = ["EdgeListError", "parse_edgelist", "export_level", "graph_from_json", "vertex_label", "FORMATS"]

FORMATS = ("dot", "graphml", "json")

_LABEL_KIND = {PHYSICAL: "node", TYPE1: "cycle", TYPE2: "shared"}


class EdgeListError(ValueError):
    """Malformed edge list; ``line`` is 1-based."""

    def __init__(self, message: str, line: int, source: Optional[str] = None):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {message}")


def _parse_weight(tok: str) -> Fraction:
    # Fraction parses "2.5", "1/3" and "7" exactly
    return Fraction(tok)


def parse_edgelist(text: str, source: Optional[str] = None) -> Graph:
    """Parse ``u v [weight]`` lines into a :class:`Graph`.

    ``#`` starts a comment; blank lines are skipped.  Self-loops, duplicate
    edges (in either orientation), negative ids and non-positive weights
    raise :class:`EdgeListError` naming the offending line.
    """
    edges = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) not in (2, 3):
            raise EdgeListError(f"expected 'u v [weight]', got {raw.strip()!r}", lineno, source)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise EdgeListError(f"vertex ids must be integers, got {raw.strip()!r}", lineno, source) from None
        if u < 0 or v < 0:
            raise EdgeListError("vertex ids must be non-negative", lineno, source)
        if u == v:
            raise EdgeListError(f"self-loop at vertex {u}", lineno, source)
        w = Fraction(1)
        if len(toks) == 3:
            try:
                w = _parse_weight(toks[2])
            except (ValueError, ZeroDivisionError):
                raise EdgeListError(f"bad weight {toks[2]!r}", lineno, source) from None
            if w <= 0:
                raise EdgeListError(f"weight must be positive, got {toks[2]}", lineno, source)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListError(f"duplicate edge {key[0]} {key[1]} (first on line {seen[key]})", lineno, source)
        seen[key] = lineno
        edges.append((u, v, w))
    return Graph((), edges)


def vertex_label(level: int, kind: str, v: int) -> str:
    return f"L{level}:{_LABEL_KIND[kind]}:{v}"


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def _level_json(h: LnaHierarchy, level: int) -> dict:
    g = h.graph(level)
    return {
        "level": level,
        "vertices": [
            {
                "id": v,
                "kind": g.kind(v),
                "label": vertex_label(level, g.kind(v), v),
                "resolved": sorted(resolve(h, level, v)),
            }
            for v in g.vertices
        ],
        "edges": [[u, v, _num(w)] for u, v, w in g.weighted_edges()],
    }


def _dot(h: LnaHierarchy, level: int) -> str:
    g = h.graph(level)
    shape = {PHYSICAL: "circle", TYPE1: "ellipse", TYPE2: "box"}
    lines = [f"graph L{level} {{"]
    for v in g.vertices:
        k = g.kind(v)
        res = " ".join(map(str, sorted(resolve(h, level, v))))
        lines.append(
            f'  {v} [kind="{k}", label="{vertex_label(level, k, v)}", resolved="{res}", shape={shape[k]}];'
        )
    for u, v, w in g.weighted_edges():
        lines.append(f'  {u} -- {v} [weight="{_num(w)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graphml(h: LnaHierarchy, level: int) -> str:
    g = h.graph(level)
    ns = "http://graphml.graphdrawing.org/xmlns"
    root = ET.Element("graphml", {"xmlns": ns})
    for key, dom in (("kind", "node"), ("label", "node"), ("resolved", "node"), ("weight", "edge")):
        ET.SubElement(root, "key", {"id": key, "for": dom, "attr.name": key, "attr.type": "string"})
    graph = ET.SubElement(root, "graph", {"id": f"L{level}", "edgedefault": "undirected"})
    for v in g.vertices:
        node = ET.SubElement(graph, "node", {"id": f"n{v}"})
        k = g.kind(v)
        for key, val in (
            ("kind", k),
            ("label", vertex_label(level, k, v)),
            ("resolved", " ".join(map(str, sorted(resolve(h, level, v))))),
        ):
            ET.SubElement(node, "data", {"key": key}).text = val
    for i, (u, v, w) in enumerate(g.weighted_edges()):
        edge = ET.SubElement(graph, "edge", {"id": f"e{i}", "source": f"n{u}", "target": f"n{v}"})
        ET.SubElement(edge, "data", {"key": "weight"}).text = str(_num(w))
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def export_level(h: LnaHierarchy, level: int, fmt: str = "json") -> bytes:
    """Serialize one level of ``h``.

    Every vertex carries ``kind``, a ``label`` such as ``L2:cycle:7`` and the
    ``resolved`` set of physical vertices it stands for.

    Raises
    ------
    KeyError
        Unknown level.
    ValueError
        Unknown format.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if not 0 <= level <= h.L:
        raise KeyError(f"no level {level}; hierarchy has levels 0..{h.L}")
    if fmt == "dot":
        text = _dot(h, level)
    elif fmt == "graphml":
        text = _graphml(h, level)
    else:
        text = json.dumps(_level_json(h, level), sort_keys=True, indent=2) + "\n"
    return text.encode("utf-8")


def graph_from_json(data) -> Graph:
    """Re-ingest a level-0 JSON export."""
    if isinstance(data, (bytes, str)):
        data = json.loads(data)
    if data.get("level") != 0:
        raise GraphError("only level-0 exports can be re-ingested")
    verts = [v["id"] for v in data["vertices"]]
    edges = [(u, v, Fraction(str(w))) for u, v, w in data["edges"]]
    return Graph(verts, edges)
