"""Finite subgraphs of the Cayley graph of an X-generated group.

Only positive edges ``(g, x)`` are stored: the edge from ``g`` to ``g x_G``.
Its formal inverse ``(g x_G, x⁻¹)`` is implied, so a subgraph is
inverse-closed by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BackendMismatch
from .groups import Word, XGroup, format_word


@dataclass(frozen=True)
class Path:
    """The unique path ``p_start(labels)``."""

    start: object
    labels: Word = ()

    def inverse(self, G: XGroup) -> "Path":
        return Path(path_end(G, self), tuple((x, -s) for x, s in reversed(self.labels)))

    def __repr__(self):
        return f"Path({self.start!r}, {format_word(self.labels)})"


class Subgraph:
    __slots__ = ("group", "vertices", "edges", "_hash")

    def __init__(self, group: XGroup, vertices=(), edges=(), check=True):
        self.group = group
        self.vertices = frozenset(vertices)
        self.edges = frozenset(edges)
        if check:
            for g, x in self.edges:
                if g not in self.vertices or group.mul(g, group.gen(x)) not in self.vertices:
                    raise ValueError(f"edge ({group.format(g)}, {x}) has an endpoint outside the vertex set")
        self._hash = None

    def __eq__(self, other):
        return (
            isinstance(other, Subgraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.group == other.group
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vertices, self.edges))
        return self._hash

    def __le__(self, other: "Subgraph") -> bool:
        _same_group(self, other)
        return self.vertices <= other.vertices and self.edges <= other.edges

    def __or__(self, other: "Subgraph") -> "Subgraph":
        return union(self, other)

    def sorted_vertices(self):
        return sorted(self.vertices, key=self.group.sort_key)

    def sorted_edges(self):
        key = self.group.sort_key
        return sorted(self.edges, key=lambda e: (key(e[0]), e[1]))

    def sort_key(self):
        key = self.group.sort_key
        return (
            len(self.vertices),
            len(self.edges),
            [key(v) for v in self.sorted_vertices()],
            [(key(g), x) for g, x in self.sorted_edges()],
        )

    def isolated_vertices(self) -> frozenset:
        G = self.group
        touched = set()
        for g, x in self.edges:
            touched.add(g)
            touched.add(G.mul(g, G.gen(x)))
        return self.vertices - touched

    def __repr__(self):
        fmt = self.group.format
        vs = ", ".join(fmt(v) for v in self.sorted_vertices())
        es = ", ".join(f"({fmt(g)},{x})" for g, x in self.sorted_edges())
        return f"Subgraph({{{vs}}}, {{{es}}})"


def _same_group(a: Subgraph, b: Subgraph):
    if a.group != b.group:
        raise BackendMismatch(f"subgraphs of different Cayley graphs: {a.group} vs {b.group}")


def empty(G: XGroup) -> Subgraph:
    return Subgraph(G)


def vertex_graph(G: XGroup, *vertices) -> Subgraph:
    return Subgraph(G, vertices)


def path_end(G: XGroup, p: Path):
    return G.mul(p.start, G.eval(p.labels))


def path_vertices(G: XGroup, p: Path) -> list:
    """Vertices visited by ``p`` in order, including the start."""
    out = [p.start]
    g = p.start
    for letter in p.labels:
        g = G.mul(g, G.letter_value(letter))
        out.append(g)
    return out


def span_path(G: XGroup, p: Path) -> Subgraph:
    g = p.start
    vertices = {g}
    edges = set()
    for letter in p.labels:
        x, s = letter
        h = G.mul(g, G.letter_value(letter))
        # an x⁻¹ step from g to h traverses the positive edge (h, x) backwards
        edges.add((g, x) if s > 0 else (h, x))
        vertices.add(h)
        g = h
    return Subgraph(G, vertices, edges, check=False)


def union(a: Subgraph, b: Subgraph) -> Subgraph:
    _same_group(a, b)
    return Subgraph(a.group, a.vertices | b.vertices, a.edges | b.edges, check=False)


def translate(g, graph: Subgraph) -> Subgraph:
    G = graph.group
    if not G.contains(g):
        raise BackendMismatch(f"{g!r} is not an element of {G}")
    return Subgraph(
        G,
        (G.mul(g, v) for v in graph.vertices),
        ((G.mul(g, h), x) for h, x in graph.edges),
        check=False,
    )


def is_connected(graph: Subgraph) -> bool:
    G = graph.group
    parent = {v: v for v in graph.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    components = len(parent)
    for g, x in graph.edges:
        a, b = find(g), find(G.mul(g, G.gen(x)))
        if a != b:
            parent[a] = b
            components -= 1
    return components <= 1


def edges_only(graph: Subgraph) -> Subgraph:
    """Drop isolated vertices; the edge set is unchanged."""
    return Subgraph(graph.group, graph.vertices - graph.isolated_vertices(), graph.edges, check=False)


def delta(G: XGroup, g) -> Subgraph:
    """The edgeless graph on ``{1, g}``."""
    return Subgraph(G, {G.identity, g})


def word_graph(G: XGroup, w: Word) -> Subgraph:
    """The subgraph spanned by the path from 1 reading ``w``."""
    return span_path(G, Path(G.identity, w))


def cayley_graph(G) -> Subgraph:
    """The whole Cayley graph of a finite group."""
    return Subgraph(G, G.elements(), ((g, x) for g in G.elements() for x in G.generators), check=False)
