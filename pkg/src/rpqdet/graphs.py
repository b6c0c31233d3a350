"""Finite directed edge-labeled graphs and the color/shade operations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .symbols import Color, Symbol, Word, WorkbenchError

Edge = tuple[str, Symbol, str]


class UnknownVertexError(WorkbenchError):
    pass


@dataclass(frozen=True)
class LabeledGraph:
    """Immutable vertex and edge sets; vertices may be isolated."""

    vertices: frozenset[str]
    edges: frozenset[Edge]

    def __post_init__(self):
        for src, _, dst in self.edges:
            if src not in self.vertices or dst not in self.vertices:
                raise UnknownVertexError(f"edge endpoint missing from vertex set: "
                                         f"({src}, {dst})")

    @staticmethod
    def build(vertices: Iterable[str], edges: Iterable[Edge]) -> "LabeledGraph":
        return LabeledGraph(frozenset(vertices), frozenset(edges))

    @cached_property
    def out_adj(self) -> dict[str, tuple[tuple[Symbol, str], ...]]:
        rows: dict[str, list[tuple[Symbol, str]]] = {v: [] for v in self.vertices}
        for src, s, dst in self.edges:
            rows[src].append((s, dst))
        return {v: tuple(sorted(row, key=lambda e: (e[0].name, e[1])))
                for v, row in rows.items()}

    @cached_property
    def in_adj(self) -> dict[str, tuple[tuple[Symbol, str], ...]]:
        rows: dict[str, list[tuple[Symbol, str]]] = {v: [] for v in self.vertices}
        for src, s, dst in self.edges:
            rows[dst].append((s, src))
        return {v: tuple(sorted(row, key=lambda e: (e[0].name, e[1])))
                for v, row in rows.items()}

    def labels(self) -> frozenset[Symbol]:
        return frozenset(s for _, s, _ in self.edges)

    def require_vertex(self, v: str) -> None:
        if v not in self.vertices:
            raise UnknownVertexError(f"no vertex named {v!r}")


@dataclass(frozen=True)
class EndpointedGraph:
    """A graph with two distinguished vertices."""

    graph: LabeledGraph
    a: str
    b: str

    def __post_init__(self):
        self.graph.require_vertex(self.a)
        self.graph.require_vertex(self.b)


def chain_graph(word: Word, x: str, y: str,
                names: Sequence[str] | None = None) -> LabeledGraph:
    """A simple path from x to y spelling the given word.

    Intermediate vertices default to x1..x{n-1}; pass explicit names to
    override (useful when grafting into an existing graph).
    """
    n = len(word)
    if n == 0:
        raise ValueError("chain needs a nonempty word")
    if x == y:
        raise ValueError("chain endpoints must differ")
    if names is None:
        names = [f"x{k}" for k in range(1, n)]
    if len(names) != n - 1:
        raise ValueError(f"need {n - 1} intermediate names, got {len(names)}")
    stops = [x, *names, y]
    if len(set(stops)) != len(stops):
        raise ValueError("chain vertex names collide")
    edges = [(stops[k], word[k], stops[k + 1]) for k in range(n)]
    return LabeledGraph.build(stops, edges)


def recolor(g: LabeledGraph, color: Color) -> LabeledGraph:
    """Repaint every edge label with one color."""
    return LabeledGraph(g.vertices,
                        frozenset((src, s.colored(color), dst)
                                  for src, s, dst in g.edges))


def graph_union(graphs: Iterable[LabeledGraph]) -> LabeledGraph:
    vertices: set[str] = set()
    edges: set[Edge] = set()
    for g in graphs:
        vertices |= g.vertices
        edges |= g.edges
    return LabeledGraph(frozenset(vertices), frozenset(edges))


def strip_shades(g: LabeledGraph) -> LabeledGraph:
    """Erase the shade field of every four-field label."""
    return LabeledGraph(g.vertices,
                        frozenset((src, s.stripped(), dst)
                                  for src, s, dst in g.edges))


def chain_word(g: LabeledGraph, x: str, y: str) -> Word | None:
    """If g is a single path from x to y, its word; otherwise None."""
    word: list[Symbol] = []
    seen = {x}
    v = x
    while v != y:
        row = g.out_adj.get(v, ())
        if len(row) != 1:
            return None
        s, v = row[0]
        if v in seen:
            return None
        seen.add(v)
        word.append(s)
    if len(seen) != len(g.vertices):
        return None
    return tuple(word)


# --------------------------------------------------------------------------
# JSON forms


def graph_to_obj(g: LabeledGraph) -> dict:
    return {
        "vertices": sorted(g.vertices),
        "edges": [{"src": src, "label": s.name, "dst": dst}
                  for src, s, dst in sorted(g.edges,
                                            key=lambda e: (e[0], e[1].name, e[2]))],
    }


def graph_from_obj(obj: dict) -> LabeledGraph:
    vertices = obj["vertices"]
    edges = [(e["src"], Symbol(e["label"]), e["dst"]) for e in obj["edges"]]
    return LabeledGraph.build(vertices, edges)


def graph_to_json(g: LabeledGraph) -> str:
    return json.dumps(graph_to_obj(g), indent=2) + "\n"


def graph_from_json(text: str) -> LabeledGraph:
    return graph_from_obj(json.loads(text))


def endpointed_to_json(eg: EndpointedGraph) -> str:
    obj = graph_to_obj(eg.graph)
    obj["a"] = eg.a
    obj["b"] = eg.b
    return json.dumps(obj, indent=2) + "\n"


def endpointed_from_json(text: str, a: str | None = None,
                         b: str | None = None) -> EndpointedGraph:
    obj = json.loads(text)
    g = graph_from_obj(obj)
    return EndpointedGraph(g, a or obj.get("a", "a"), b or obj.get("b", "b"))
