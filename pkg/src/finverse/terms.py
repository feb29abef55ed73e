"""Terms of the enriched signature (·, ⁻¹, m, 1) and their canonical form.

Surface syntax::

    term   := factor+            (juxtaposition, left associative)
    factor := atom "'"*          ("x'" is the inverse of x)
    atom   := letter | "1" | "m" "(" term ")" | "(" term ")"
    letter := [a-z][a-z0-9_]*

Every term has a unique canonical form ``u0 m(v1) u1 ... m(vn) un`` with
involutive words ``ui``, ``vi``; :class:`MTerm` stores exactly that.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .errors import TermSyntaxError
from .groups import Word, format_word, word_inv


# -- raw syntax trees --------------------------------------------------------

class RawTerm:
    __slots__ = ()


@dataclass(frozen=True)
class One(RawTerm):
    def __repr__(self):
        return "One"


@dataclass(frozen=True)
class Letter(RawTerm):
    letter: tuple  # (name, sign)

    def __repr__(self):
        x, s = self.letter
        return x if s > 0 else f"{x}'"


@dataclass(frozen=True)
class Mul(RawTerm):
    left: RawTerm
    right: RawTerm

    def __repr__(self):
        return f"Mul({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class Inv(RawTerm):
    child: RawTerm

    def __repr__(self):
        return f"Inv({self.child!r})"


@dataclass(frozen=True)
class Max(RawTerm):
    child: RawTerm

    def __repr__(self):
        return f"Max({self.child!r})"


def letter(name: str, sign: int = 1) -> Letter:
    return Letter((name, sign))


def fold(t: RawTerm, one, atom: Callable, mul: Callable, inv: Callable, mx: Callable):
    """Evaluate a raw term in any algebra of the signature."""
    stack = [(t, False)]
    values: list = []
    while stack:
        node, done = stack.pop()
        if isinstance(node, Mul):
            if done:
                b = values.pop()
                a = values.pop()
                values.append(mul(a, b))
            else:
                stack.append((node, True))
                stack.append((node.right, False))
                stack.append((node.left, False))
        elif isinstance(node, (Inv, Max)):
            if done:
                a = values.pop()
                values.append(inv(a) if isinstance(node, Inv) else mx(a))
            else:
                stack.append((node, True))
                stack.append((node.child, False))
        elif isinstance(node, Letter):
            values.append(atom(node.letter))
        elif isinstance(node, One):
            values.append(one)
        else:
            raise TypeError(f"not a term node: {node!r}")
    return values[0]


def variables(t: RawTerm) -> list:
    """Letter names in order of first occurrence."""
    seen: dict = {}

    def visit(node):
        if isinstance(node, Letter):
            seen.setdefault(node.letter[0], None)
        elif isinstance(node, Mul):
            visit(node.left)
            visit(node.right)
        elif isinstance(node, (Inv, Max)):
            visit(node.child)

    visit(t)
    return list(seen)


def size(t: RawTerm) -> int:
    return fold(t, 1, lambda l: 1, lambda a, b: a + b + 1, lambda a: a + 1, lambda a: a + 1)


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[a-z][a-z0-9_]*)|(?P<one>1)|(?P<sym>[()']))")
_ATOM_START = {"identifier", "'1'", "'('", "'m('"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        n = len(text)
        while True:
            while pos < n and text[pos].isspace():
                pos += 1
            if pos >= n:
                break
            m = _TOKEN.match(text, pos)
            if not m:
                # let the parser report it with the right expected set
                self.tokens.append(("bad", text[pos], pos))
                break
            start = m.start(m.lastgroup)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.tokens.append(("end", "", n))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_atom(self):
        kind, val, _ = self.peek()
        return kind in ("ident", "one") or (kind == "sym" and val == "(")

    def term(self, closing: bool):
        if not self.at_atom():
            raise TermSyntaxError(self.text, self.peek()[2], _ATOM_START)
        t = self.factor()
        while self.at_atom():
            t = Mul(t, self.factor())
        kind, val, pos = self.peek()
        if closing and not (kind == "sym" and val == ")"):
            raise TermSyntaxError(self.text, pos, _ATOM_START | {"')'", "\"'\""})
        if not closing and kind != "end":
            raise TermSyntaxError(self.text, pos, _ATOM_START | {"\"'\"", "end of input"})
        return t

    def factor(self):
        t = self.atom()
        while self.peek()[0] == "sym" and self.peek()[1] == "'":
            self.next()
            t = Inv(t)
        return t

    def expect_close(self):
        kind, val, pos = self.next()
        if not (kind == "sym" and val == ")"):
            raise TermSyntaxError(self.text, pos, {"')'"})

    def atom(self):
        kind, val, pos = self.next()
        if kind == "one":
            return One()
        if kind == "ident":
            nk, nv, _ = self.peek()
            if val == "m" and nk == "sym" and nv == "(":
                self.next()
                t = self.term(closing=True)
                self.expect_close()
                return Max(t)
            return Letter((val, 1))
        if kind == "sym" and val == "(":
            t = self.term(closing=True)
            self.expect_close()
            return t
        raise TermSyntaxError(self.text, pos, _ATOM_START)


def parse(text: str) -> RawTerm:
    return _Parser(text).term(closing=False)


# -- canonical form -------------------------------------------------------------

@dataclass(frozen=True)
class MTerm:
    """``prefix m(v1) u1 ... m(vn) un`` with ``blocks = ((v1, u1), ..., (vn, un))``.

    Words inside ``m(.)`` are not freely reduced; ``m(1)`` is a genuine block.
    """

    prefix: Word = ()
    blocks: tuple = field(default=())

    def __mul__(self, other: "MTerm") -> "MTerm":
        return term_mul(self, other)

    def inverse(self) -> "MTerm":
        return term_inv(self)

    def max(self) -> "MTerm":
        return term_max(self)

    def is_plain(self) -> bool:
        return not self.blocks

    def __str__(self):
        return render(self)


IDENTITY = MTerm()


def word_term(w: Word) -> MTerm:
    return MTerm(tuple(w), ())


def term_mul(s: MTerm, t: MTerm) -> MTerm:
    if not s.blocks:
        return MTerm(s.prefix + t.prefix, t.blocks)
    v, u = s.blocks[-1]
    return MTerm(s.prefix, s.blocks[:-1] + ((v, u + t.prefix),) + t.blocks)


def term_inv(t: MTerm) -> MTerm:
    if not t.blocks:
        return MTerm(word_inv(t.prefix), ())
    words = [t.prefix]
    maxes = []
    for v, u in t.blocks:
        maxes.append(v)
        words.append(u)
    # u0 m(v1) ... m(vn) un  ->  un' m(vn') ... m(v1') u0'
    words = [word_inv(u) for u in reversed(words)]
    maxes = [word_inv(v) for v in reversed(maxes)]
    return MTerm(words[0], tuple(zip(maxes, words[1:])))


def strip(t: MTerm) -> Word:
    """Concatenation ``u0 v1 u1 ... vn un`` with all m(.) wrappers removed."""
    out = list(t.prefix)
    for v, u in t.blocks:
        out.extend(v)
        out.extend(u)
    return tuple(out)


def term_max(t: MTerm) -> MTerm:
    return MTerm((), ((strip(t), ()),))


def normalize(t: RawTerm) -> MTerm:
    return fold(
        t,
        IDENTITY,
        lambda l: MTerm((l,), ()),
        term_mul,
        term_inv,
        term_max,
    )


def to_raw(t: MTerm) -> RawTerm:
    """A max-unnested raw tree reading of ``t`` (normalizes back to ``t``)."""
    parts: list = []

    def word(w):
        for x, s in w:
            parts.append(Letter((x, 1)) if s > 0 else Inv(Letter((x, 1))))

    word(t.prefix)
    for v, u in t.blocks:
        inner: list = []
        for x, s in v:
            inner.append(Letter((x, 1)) if s > 0 else Inv(Letter((x, 1))))
        arg = One() if not inner else _chain(inner)
        parts.append(Max(arg))
        word(u)
    return One() if not parts else _chain(parts)


def _chain(parts):
    t = parts[0]
    for p in parts[1:]:
        t = Mul(t, p)
    return t


def render(t: MTerm) -> str:
    pieces = []
    if t.prefix:
        pieces.append(format_word(t.prefix))
    for v, u in t.blocks:
        pieces.append(f"m({format_word(v)})")
        if u:
            pieces.append(format_word(u))
    return " ".join(pieces) if pieces else "1"


def term_letters(t: MTerm) -> set:
    return {x for x, _ in strip(t)}
