"""X-generated groups: the free group on X and finite groups given by tables.

Words over ``X ⊔ X⁻¹`` are tuples of letters ``(name, sign)`` with sign ±1.
Group elements are plain hashable values: a freely reduced word for the
free backend, an ``int`` index for the finite backend.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BackendMismatch, InvalidGroup, NoSuchMorphism, UnknownGenerator

Letter = tuple  # (name: str, sign: int)
Word = tuple  # tuple[Letter, ...]

GENERATOR_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


def check_generator_name(name: str) -> str:
    if not isinstance(name, str) or not GENERATOR_RE.match(name):
        raise ValueError(f"invalid generator name {name!r}")
    return name


def letter_inv(letter: Letter) -> Letter:
    return (letter[0], -letter[1])


def word_inv(w: Word) -> Word:
    return tuple((x, -s) for x, s in reversed(w))


def reduce_word(w: Iterable[Letter]) -> Word:
    """Freely reduce ``w`` with a single stack pass."""
    out: list = []
    for x, s in w:
        if out and out[-1][0] == x and out[-1][1] == -s:
            out.pop()
        else:
            out.append((x, s))
    return tuple(out)


def parse_word(text: str) -> Word:
    """Parse ``"a b' c"`` into a word. ``1`` or the empty string is the empty word."""
    letters = []
    for tok in text.split():
        if tok == "1":
            continue
        name = tok.rstrip("'")
        primes = len(tok) - len(name)
        check_generator_name(name)
        letters.append((name, -1 if primes % 2 else 1))
    return tuple(letters)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(x if s > 0 else x + "'" for x, s in w)


def letters_of(w: Word) -> set:
    return {x for x, _ in w}


class XGroup:
    """Common interface of the two backends."""

    kind: str
    generators: tuple

    def gen(self, x: str):
        raise NotImplementedError

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def contains(self, g) -> bool:
        raise NotImplementedError

    def format(self, g) -> str:
        raise NotImplementedError

    def sort_key(self, g):
        raise NotImplementedError

    def to_json(self, g):
        return self.format(g)

    def _check_letter(self, x):
        if x not in self._genset:
            raise UnknownGenerator(x)

    def letter_value(self, letter: Letter):
        x, s = letter
        self._check_letter(x)
        g = self.gen(x)
        return g if s > 0 else self.inv(g)

    def eval(self, w: Word):
        """The value ``[w]_G`` of an involutive word."""
        g = self.identity
        for letter in w:
            g = self.mul(g, self.letter_value(letter))
        return g

    def prod(self, *elements):
        g = self.identity
        for h in elements:
            g = self.mul(g, h)
        return g


class FreeGroup(XGroup):
    """The free group on ``generators``; elements are reduced words."""

    kind = "free"

    def __init__(self, generators: Sequence[str]):
        generators = tuple(generators)
        for x in generators:
            check_generator_name(x)
        if len(set(generators)) != len(generators):
            raise InvalidGroup(f"duplicate generator names in {generators}")
        self.generators = generators
        self._genset = frozenset(generators)
        self.identity: Word = ()

    def __repr__(self):
        return f"FreeGroup({','.join(self.generators)})"

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and other.generators == self.generators

    def __hash__(self):
        return hash(("free", self.generators))

    def gen(self, x):
        self._check_letter(x)
        return ((x, 1),)

    def contains(self, g):
        return (
            isinstance(g, tuple)
            and all(isinstance(l, tuple) and l[0] in self._genset and l[1] in (1, -1) for l in g)
            and reduce_word(g) == g
        )

    def _check(self, g):
        if not isinstance(g, tuple):
            raise BackendMismatch(f"{g!r} is not an element of {self}")

    def mul(self, g, h):
        self._check(g)
        self._check(h)
        # both reduced: cancellation only happens at the seam
        i = 0
        n = min(len(g), len(h))
        while i < n and g[-1 - i][0] == h[i][0] and g[-1 - i][1] == -h[i][1]:
            i += 1
        return g[: len(g) - i] + h[i:]

    def inv(self, g):
        self._check(g)
        return word_inv(g)

    def eval(self, w):
        for x, _ in w:
            self._check_letter(x)
        return reduce_word(w)

    def format(self, g):
        return format_word(g)

    def sort_key(self, g):
        return (len(g), g)

    def parse_element(self, text: str):
        w = parse_word(text)
        return self.eval(w)


class FiniteGroup(XGroup):
    """A finite X-generated group given by its full multiplication table."""

    kind = "finite"

    def __init__(self, table, identity: int, inverse, assignment: dict, validate: bool = True):
        self.table = np.asarray(table, dtype=np.int64)
        self.order = int(self.table.shape[0])
        self.identity = int(identity)
        self.inverse = np.asarray(inverse, dtype=np.int64)
        self.assignment = {check_generator_name(k): int(v) for k, v in assignment.items()}
        self.generators = tuple(self.assignment)
        self._genset = frozenset(self.generators)
        if validate:
            validate_group_table(self.table, self.identity, self.inverse, self.assignment)
        self._key = (
            self.table.tobytes(),
            self.identity,
            tuple(sorted(self.assignment.items())),
        )

    def __repr__(self):
        gens = ",".join(f"{k}->#{v}" for k, v in self.assignment.items())
        return f"FiniteGroup(order={self.order}, {gens})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and other._key == self._key

    def __hash__(self):
        return hash(self._key)

    def elements(self):
        return range(self.order)

    def gen(self, x):
        self._check_letter(x)
        return self.assignment[x]

    def contains(self, g):
        return isinstance(g, (int, np.integer)) and 0 <= g < self.order

    def _check(self, g):
        if not self.contains(g):
            raise BackendMismatch(f"{g!r} is not an element of {self}")

    def mul(self, g, h):
        self._check(g)
        self._check(h)
        return int(self.table[g, h])

    def inv(self, g):
        self._check(g)
        return int(self.inverse[g])

    def format(self, g):
        return f"#{g}"

    def to_json(self, g):
        return int(g)

    def sort_key(self, g):
        return g

    def parse_element(self, text: str):
        text = text.strip()
        if text.startswith("#"):
            g = int(text[1:])
            self._check(g)
            return g
        return self.eval(parse_word(text))

    def to_dict(self):
        return {
            "order": self.order,
            "identity": self.identity,
            "table": self.table.tolist(),
            "inverse": self.inverse.tolist(),
            "generators": dict(self.assignment),
        }


def validate_group_table(table: np.ndarray, identity: int, inverse: np.ndarray, assignment: dict) -> None:
    """Raise :class:`InvalidGroup` naming the first failing check."""
    n = table.shape[0] if table.ndim == 2 else 0
    if n == 0 or table.shape != (n, n):
        raise InvalidGroup(f"table must be a non-empty square matrix, got shape {table.shape}")
    if table.min() < 0 or table.max() >= n:
        raise InvalidGroup("table entries must be element indices in range")
    if not 0 <= identity < n:
        raise InvalidGroup(f"identity index {identity} out of range")
    r = np.arange(n)
    bad = np.nonzero((table[identity] != r) | (table[:, identity] != r))[0]
    if len(bad):
        raise InvalidGroup(f"identity law fails at element {int(bad[0])}")
    bad_triple = first_nonassociative_triple(table)
    if bad_triple is not None:
        a, b, c = bad_triple
        raise InvalidGroup(f"associativity fails at triple ({a}, {b}, {c})")
    if inverse.shape != (n,) or inverse.min() < 0 or inverse.max() >= n:
        raise InvalidGroup("inverse table must list one element index per element")
    bad = np.nonzero((table[r, inverse] != identity) | (table[inverse, r] != identity))[0]
    if len(bad):
        raise InvalidGroup(f"inverse table is wrong at element {int(bad[0])}")
    for x, g in assignment.items():
        if not 0 <= g < n:
            raise InvalidGroup(f"generator {x} assigned out-of-range index {g}")
    reached = closure(identity, [assignment[x] for x in assignment], lambda p, q: int(table[p, q]))
    if len(reached) != n:
        missing = min(set(range(n)) - reached)
        raise InvalidGroup(f"generators do not generate the group (element {missing} unreachable)")


def first_nonassociative_triple(table: np.ndarray):
    """First (a, b, c) in lexicographic order with (ab)c != a(bc), or None."""
    n = table.shape[0]
    for a in range(n):
        left = table[table[a]]  # [b, c] -> (ab)c
        right = table[a][table]  # [b, c] -> a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = bad[0]
            return a, int(b), int(c)
    return None


def closure(start, gens: list, mul: Callable) -> set:
    """Right multiplicative closure of ``{start}`` under ``gens``."""
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for q in gens:
                r = mul(p, q)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return seen


def load_group(source) -> FiniteGroup:
    """Load a finite group from a JSON path, JSON text or dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            with open(text, encoding="utf-8") as fh:
                data = json.load(fh)
    try:
        order = int(data["order"])
        table = np.asarray(data["table"], dtype=np.int64)
        identity = int(data["identity"])
        inverse = np.asarray(data["inverse"], dtype=np.int64)
        gens = data["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidGroup(f"malformed group file: {exc}") from exc
    if table.shape != (order, order):
        raise InvalidGroup(f"table shape {table.shape} does not match order {order}")
    return FiniteGroup(table, identity, inverse, gens)


def abelian_group(moduli: Sequence[int], generators: dict) -> FiniteGroup:
    """Z_{m1} x ... x Z_{mk}; ``generators`` maps names to coordinate tuples."""
    moduli = tuple(moduli)
    elems = list(itertools.product(*(range(m) for m in moduli)))
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    inverse = np.empty(n, dtype=np.int64)
    for i, p in enumerate(elems):
        inverse[i] = index[tuple((-a) % m for a, m in zip(p, moduli))]
        for j, q in enumerate(elems):
            table[i, j] = index[tuple((a + b) % m for a, b, m in zip(p, q, moduli))]
    assignment = {}
    for x, v in generators.items():
        v = (v,) if isinstance(v, int) else tuple(v)
        assignment[x] = index[tuple(a % m for a, m in zip(v, moduli))]
    return FiniteGroup(table, index[(0,) * len(moduli)], inverse, assignment)


def cyclic_group(n: int, generators=("a",)) -> FiniteGroup:
    """Z_n with every listed generator sent to the residue 1 (or to the given residues)."""
    if isinstance(generators, dict):
        return abelian_group((n,), generators)
    return abelian_group((n,), {x: 1 for x in generators})


def trivial_group(generators=("a",)) -> FiniteGroup:
    return FiniteGroup([[0]], 0, [0], {x: 0 for x in generators})


@dataclass(frozen=True)
class CanonicalMorphism:
    """The unique generator-respecting morphism ``source -> target``."""

    source: XGroup
    target: XGroup
    _map: Callable

    def __call__(self, g):
        return self._map(g)


def build_canonical_morphism(G: XGroup, H: XGroup) -> CanonicalMorphism:
    if set(G.generators) != set(H.generators):
        raise NoSuchMorphism(f"{G} and {H} are generated over different alphabets")
    if isinstance(G, FreeGroup):
        return CanonicalMorphism(G, H, H.eval)
    # breadth-first closure along positive Cayley edges g -> g x_G
    image = {G.identity: H.identity}
    queue = deque([G.identity])
    while queue:
        g = queue.popleft()
        for x in G.generators:
            gx = G.mul(g, G.gen(x))
            hx = H.mul(image[g], H.gen(x))
            if gx in image:
                if image[gx] != hx:
                    raise NoSuchMorphism(
                        f"conflict at {G.format(gx)}: images {H.format(image[gx])} and {H.format(hx)}"
                    )
            else:
                image[gx] = hx
                queue.append(gx)

    def apply(g):
        if not G.contains(g):
            raise BackendMismatch(f"{g!r} is not an element of {G}")
        return image[g]

    return CanonicalMorphism(G, H, apply)
