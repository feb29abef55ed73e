"""The expansions F(G), M(G), BR(G), P(G) and the maps between them.

An element is a pair ``(graph, point)``. In F(G) the graph is a finite
subgraph of Cay(G) containing 1 and the point; in P(G) the graph has no
isolated vertices and carries no vertex constraint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import cayley
from .cayley import Subgraph, delta, edges_only, is_connected, translate, union
from .errors import BackendMismatch, DomainError, NotInBR, TooLarge
from .groups import CanonicalMorphism, FiniteGroup, Word, XGroup
from .journeys import journey_of_term, journey_span
from .terms import MTerm, word_term

DEFAULT_CAP = 10**6


class _Element:
    __slots__ = ("graph", "point")

    def __init__(self, graph: Subgraph, point):
        self.graph = graph
        self.point = point

    @property
    def group(self) -> XGroup:
        return self.graph.group

    def __eq__(self, other):
        return type(other) is type(self) and self.point == other.point and self.graph == other.graph

    def __hash__(self):
        return hash((self.graph, self.point))

    def sort_key(self):
        return (self.graph.sort_key(), self.group.sort_key(self.point))

    def to_json(self) -> dict:
        return element_to_json(self)

    def __repr__(self):
        return f"{type(self).__name__}({self.graph!r}, {self.group.format(self.point)})"


class FElement(_Element):
    """``(graph, point)`` with 1 and point among the graph's vertices."""

    __slots__ = ()

    def __init__(self, graph: Subgraph, point, check=True):
        super().__init__(graph, point)
        if check:
            G = graph.group
            if G.identity not in graph.vertices or point not in graph.vertices:
                raise ValueError("an F(G) element needs 1 and its point as vertices")

    def __mul__(self, other):
        return f_mul(self, other)

    def inverse(self):
        return f_inv(self)

    def max(self):
        return f_max(self)

    def __le__(self, other):
        return f_leq(self, other)


class PElement(_Element):
    """``(graph, point)`` with a graph free of isolated vertices."""

    __slots__ = ()

    def __init__(self, graph: Subgraph, point, check=True):
        super().__init__(graph, point)
        if check:
            if graph.isolated_vertices():
                raise ValueError("a P(G) element's graph must not have isolated vertices")
            if not graph.group.contains(point):
                raise BackendMismatch(f"{point!r} is not an element of {graph.group}")

    def __mul__(self, other):
        return p_mul(self, other)

    def inverse(self):
        return p_inv(self)

    def max(self):
        return p_max(self)

    def __le__(self, other):
        return p_leq(self, other)


def _same(s, t):
    if s.group != t.group:
        raise BackendMismatch(f"elements over different groups: {s.group} vs {t.group}")


# -- F(G) -----------------------------------------------------------------------

def f_identity(G: XGroup) -> FElement:
    return FElement(cayley.vertex_graph(G, G.identity), G.identity, check=False)


def f_mul(s: FElement, t: FElement) -> FElement:
    _same(s, t)
    G = s.group
    return FElement(union(s.graph, translate(s.point, t.graph)), G.mul(s.point, t.point), check=False)


def f_inv(s: FElement) -> FElement:
    G = s.group
    gi = G.inv(s.point)
    return FElement(translate(gi, s.graph), gi, check=False)


def f_max(s: FElement) -> FElement:
    return FElement(delta(s.group, s.point), s.point, check=False)


def f_is_idempotent(s: FElement) -> bool:
    return s.point == s.group.identity


def f_leq(s: FElement, t: FElement) -> bool:
    """Natural order: same point and the larger element has the smaller graph."""
    _same(s, t)
    return s.point == t.point and t.graph <= s.graph


def f_generator(G: XGroup, x: str) -> FElement:
    g = G.gen(x)
    return FElement(cayley.word_graph(G, ((x, 1),)), g, check=False)


def max_element(G: XGroup, g) -> FElement:
    return FElement(delta(G, g), g, check=False)


def eval_term_F(G: XGroup, w: MTerm) -> FElement:
    j = journey_of_term(G, G.identity, w)
    return FElement(journey_span(G, j), j.end(G), check=False)


def eval_term_M(G: XGroup, w: Word) -> FElement:
    if isinstance(w, MTerm):
        if w.blocks:
            raise DomainError("M(G) evaluation takes max-free terms only")
        w = w.prefix
    return eval_term_F(G, word_term(w))


def eval_term_P(G: XGroup, w: MTerm) -> PElement:
    return to_perfect(eval_term_F(G, w))


def eval_term_BR(G: XGroup, w: MTerm) -> FElement:
    if w.prefix or any(u for _, u in w.blocks):
        raise DomainError("BR(G) evaluation takes products of m(.) blocks only")
    return eval_term_F(G, w)


def in_M(s: FElement) -> bool:
    return is_connected(s.graph)


def in_BR(s: FElement) -> bool:
    return not s.graph.edges


def in_Q(p: PElement) -> bool:
    G = p.group
    return G.identity in p.graph.vertices and p.point in p.graph.vertices


def br_mul(s: FElement, t: FElement) -> FElement:
    if not (in_BR(s) and in_BR(t)):
        raise NotInBR("br_mul needs edgeless elements")
    return f_mul(s, t)


# -- Green's relations ----------------------------------------------------------

def _translates_onto(a: Subgraph, b: Subgraph) -> bool:
    """Is ``a = k b`` for some group element ``k``?"""
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return False
    G = a.group
    if not a.vertices:
        return True
    # k must send some vertex of b to a fixed vertex of a
    anchor = next(iter(a.vertices))
    for xi in b.vertices:
        k = G.mul(anchor, G.inv(xi))
        if translate(k, b) == a:
            return True
    return False


def green(s, t, relation: str) -> bool:
    """Green's relation ``relation`` in {R, L, D, J} between two F(G) or P(G) elements."""
    _same(s, t)
    G = s.group
    relation = relation.upper()
    if relation == "R":
        return s.graph == t.graph
    if relation == "L":
        return translate(G.inv(s.point), s.graph) == translate(G.inv(t.point), t.graph)
    if relation in ("D", "J"):
        return _translates_onto(s.graph, t.graph)
    raise ValueError(f"unknown Green's relation {relation!r}")


# -- P(G) -----------------------------------------------------------------------

def p_identity(G: XGroup) -> PElement:
    return PElement(cayley.empty(G), G.identity, check=False)


def to_perfect(s: FElement) -> PElement:
    return PElement(edges_only(s.graph), s.point, check=False)


def p_mul(s: PElement, t: PElement) -> PElement:
    _same(s, t)
    G = s.group
    return PElement(union(s.graph, translate(s.point, t.graph)), G.mul(s.point, t.point), check=False)


def p_inv(s: PElement) -> PElement:
    gi = s.group.inv(s.point)
    return PElement(translate(gi, s.graph), gi, check=False)


def p_max(s: PElement) -> PElement:
    return PElement(cayley.empty(s.group), s.point, check=False)


def p_leq(s: PElement, t: PElement) -> bool:
    _same(s, t)
    return s.point == t.point and t.graph <= s.graph


def p_generator(G: XGroup, x: str) -> PElement:
    return to_perfect(f_generator(G, x))


# -- functoriality --------------------------------------------------------------

def map_graph(nu: CanonicalMorphism, graph: Subgraph) -> Subgraph:
    H = nu.target
    return Subgraph(H, (nu(v) for v in graph.vertices), ((nu(g), x) for g, x in graph.edges), check=False)


def functor_map(nu: CanonicalMorphism, s: FElement) -> FElement:
    if s.group != nu.source:
        raise BackendMismatch(f"element lives over {s.group}, morphism starts at {nu.source}")
    return FElement(map_graph(nu, s.graph), nu(s.point), check=False)


# -- enumeration over finite groups ---------------------------------------------

KINDS = ("F", "M", "BR", "P")


def _positive_edges(G: FiniteGroup):
    return [(g, x) for g in G.elements() for x in G.generators]


def _check_finite(G):
    if not isinstance(G, FiniteGroup):
        raise TooLarge(f"{G} is infinite; only finite groups can be enumerated")


def _f_graphs(G: FiniteGroup, cap: int, connected=False, edgeless=False):
    """Graphs containing 1, with a running element count checked against ``cap``."""
    one = G.identity
    others = [g for g in G.elements() if g != one]
    edges = _positive_edges(G)
    total = 0
    for r in range(len(others) + 1):
        for rest in itertools.combinations(others, r):
            vs = frozenset((one,) + rest)
            inner = [(g, x) for g, x in edges if g in vs and G.mul(g, G.gen(x)) in vs]
            subsets = [()] if edgeless else (
                es for k in range(len(inner) + 1) for es in itertools.combinations(inner, k)
            )
            for es in subsets:
                graph = Subgraph(G, vs, es, check=False)
                if connected and not is_connected(graph):
                    continue
                total += len(vs)
                if total > cap:
                    raise TooLarge(f"more than {cap} elements")
                yield graph


def enumerate_F(G: FiniteGroup, cap: int = DEFAULT_CAP) -> list:
    _check_finite(G)
    out = [FElement(graph, g, check=False) for graph in _f_graphs(G, cap) for g in graph.vertices]
    return sorted(out, key=FElement.sort_key)


def enumerate_M(G: FiniteGroup, cap: int = DEFAULT_CAP) -> list:
    _check_finite(G)
    out = [FElement(graph, g, check=False) for graph in _f_graphs(G, cap, connected=True) for g in graph.vertices]
    return sorted(out, key=FElement.sort_key)


def enumerate_BR(G: FiniteGroup, cap: int = DEFAULT_CAP) -> list:
    _check_finite(G)
    out = [FElement(graph, g, check=False) for graph in _f_graphs(G, cap, edgeless=True) for g in graph.vertices]
    return sorted(out, key=FElement.sort_key)


def enumerate_P(G: FiniteGroup, cap: int = DEFAULT_CAP) -> list:
    _check_finite(G)
    edges = _positive_edges(G)
    if G.order * 2 ** len(edges) > cap:
        raise TooLarge(f"P(G) has {G.order * 2 ** len(edges)} elements, more than {cap}")
    out = []
    for k in range(len(edges) + 1):
        for es in itertools.combinations(edges, k):
            vs = set()
            for g, x in es:
                vs.add(g)
                vs.add(G.mul(g, G.gen(x)))
            graph = Subgraph(G, vs, es, check=False)
            out.extend(PElement(graph, g, check=False) for g in G.elements())
    return sorted(out, key=PElement.sort_key)


def enumerate_kind(G: FiniteGroup, kind: str, cap: int = DEFAULT_CAP) -> list:
    return {"F": enumerate_F, "M": enumerate_M, "BR": enumerate_BR, "P": enumerate_P}[kind](G, cap)


def kind_generator(G: XGroup, kind: str, x: str):
    """Image of the letter ``x`` in the X-generated expansion ``kind``.

    BR(G) is X-generated through max-elements: ``x`` goes to the max-element over ``x_G``.
    """
    if kind == "P":
        return p_generator(G, x)
    if kind == "BR":
        return max_element(G, G.gen(x))
    return f_generator(G, x)


def kind_ops(kind: str):
    """(mul, inv, max) for the expansion ``kind``; M(G) gets no max."""
    if kind == "P":
        return p_mul, p_inv, p_max
    if kind == "M":
        return f_mul, f_inv, None
    return f_mul, f_inv, f_max


@dataclass
class ExpansionTable:
    """An enumerated expansion together with its multiplication table."""

    group: FiniteGroup
    kind: str
    elements: list
    table: np.ndarray
    index: dict

    def monoid(self):
        from .fim import FiniteMonoid

        gens = {x: self.index[kind_generator(self.group, self.kind, x)] for x in self.group.generators}
        identity = self.index[p_identity(self.group) if self.kind == "P" else f_identity(self.group)]
        return FiniteMonoid(self.table, identity, gens, validate=False)


def _graph_bits(G: FiniteGroup):
    """Bit positions: vertex g -> g, positive edge (g, x_j) -> n + g*k + j."""
    n, gens = G.order, G.generators
    k = len(gens)
    gidx = {x: j for j, x in enumerate(gens)}

    def code(graph: Subgraph) -> int:
        c = 0
        for v in graph.vertices:
            c |= 1 << v
        for g, x in graph.edges:
            c |= 1 << (n + g * k + gidx[x])
        return c

    # perm[h][b] = position of bit b after left translation by h
    perm = np.empty((n, n + n * k), dtype=np.int64)
    for h in range(n):
        for v in range(n):
            hv = int(G.table[h, v])
            perm[h, v] = hv
            for j in range(k):
                perm[h, n + v * k + j] = n + hv * k + j
    return code, perm


def expansion_table(G: FiniteGroup, kind: str, cap: int = DEFAULT_CAP) -> ExpansionTable:
    """Enumerate ``kind`` over ``G`` and tabulate its product.

    Graphs are packed into bit codes so a whole row of products is a few
    vectorized operations; the object-level product is the reference the
    tests compare against.
    """
    elements = enumerate_kind(G, kind, cap)
    n = G.order
    nbits = n + n * len(G.generators)
    if nbits > 62:
        return _expansion_table_slow(G, kind, elements)
    code, perm = _graph_bits(G)
    codes = np.array([code(s.graph) for s in elements], dtype=np.int64)
    points = np.array([s.point for s in elements], dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(nbits)) & 1).astype(bool)
    # translated[h, i] = code of h * graph_i
    weights = np.int64(1) << np.arange(nbits, dtype=np.int64)
    translated = np.empty((n, len(elements)), dtype=np.int64)
    for h in range(n):
        moved = np.zeros_like(codes)
        for b in range(nbits):
            moved |= np.where(bits[:, b], weights[perm[h, b]], 0)
        translated[h] = moved
    keys = codes * n + points
    order = np.argsort(keys)
    sorted_keys = keys[order]
    table = np.empty((len(elements), len(elements)), dtype=np.int64)
    for i in range(len(elements)):
        g = points[i]
        prod_keys = (codes[i] | translated[g]) * n + G.table[g, points]
        pos = np.searchsorted(sorted_keys, prod_keys)
        pos = np.minimum(pos, len(sorted_keys) - 1)
        if not np.array_equal(sorted_keys[pos], prod_keys):
            raise ValueError(f"{kind}({G}) is not closed under multiplication")
        table[i] = order[pos]
    index = {s: i for i, s in enumerate(elements)}
    return ExpansionTable(G, kind, elements, table, index)


def _expansion_table_slow(G, kind, elements):
    mul = kind_ops(kind)[0]
    index = {s: i for i, s in enumerate(elements)}
    table = np.array([[index[mul(s, t)] for t in elements] for s in elements], dtype=np.int64)
    return ExpansionTable(G, kind, elements, table, index)


# -- serialization --------------------------------------------------------------

def element_to_json(s) -> dict:
    G = s.group
    return {
        "point": G.to_json(s.point),
        "vertices": [G.to_json(v) for v in s.graph.sorted_vertices()],
        "edges": [[G.to_json(g), x] for g, x in s.graph.sorted_edges()],
    }


def element_from_json(G: XGroup, data: dict, perfect: bool = False):
    def elem(v):
        if isinstance(v, int):
            return G.parse_element(f"#{v}")
        return G.parse_element(v)

    graph = Subgraph(G, (elem(v) for v in data["vertices"]), ((elem(g), x) for g, x in data["edges"]))
    cls = PElement if perfect else FElement
    return cls(graph, elem(data["point"]))
