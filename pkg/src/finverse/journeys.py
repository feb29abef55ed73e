"""Journeys: sequences of Cayley-graph paths with jumps between them.

A term ``u0 m(v1) u1 ... m(vn) un`` read from vertex ``g`` walks ``u0``,
jumps over the value of ``v1`` without recording anything, walks ``u1``,
and so on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cayley import Path, Subgraph, empty, path_end, span_path, union
from .errors import NotComposable, UnknownGenerator
from .groups import XGroup
from .terms import MTerm, term_letters


@dataclass(frozen=True)
class Journey:
    paths: tuple

    def __post_init__(self):
        if not self.paths:
            raise ValueError("a journey has at least one path")

    def start(self):
        return self.paths[0].start

    def end(self, G: XGroup):
        return path_end(G, self.paths[-1])


def journey_of_term(G: XGroup, g, w: MTerm) -> Journey:
    for x in term_letters(w):
        if x not in G.generators:
            raise UnknownGenerator(x)
    paths = [Path(g, w.prefix)]
    here = G.mul(g, G.eval(w.prefix))
    for v, u in w.blocks:
        here = G.mul(here, G.eval(v))
        paths.append(Path(here, u))
        here = G.mul(here, G.eval(u))
    return Journey(tuple(paths))


def journey_span(G: XGroup, j: Journey) -> Subgraph:
    out = empty(G)
    for p in j.paths:
        out = union(out, span_path(G, p))
    return out


def journey_compose(G: XGroup, j: Journey, k: Journey) -> Journey:
    """Concatenate, fusing the last path of ``j`` with the first path of ``k``."""
    if j.end(G) != k.start():
        raise NotComposable(
            f"journey ends at {G.format(j.end(G))} but the next starts at {G.format(k.start())}"
        )
    last, first = j.paths[-1], k.paths[0]
    fused = Path(last.start, last.labels + first.labels)
    return Journey(j.paths[:-1] + (fused,) + k.paths[1:])


def jump(g, h) -> Journey:
    return Journey((Path(g), Path(h)))
