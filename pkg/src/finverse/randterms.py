"""Random terms, and random rewrites that are sound in every F-inverse monoid.

``mutate`` picks a subterm and replaces it by something equal to it in all
F-inverse monoids (inverse-monoid laws plus the laws governing ``m``), so a
term and its mutants must evaluate equally in any F-inverse target.
"""

from __future__ import annotations

import random

from .terms import Inv, Letter, Max, Mul, One, RawTerm


def random_raw_term(rng: random.Random, gens=("a", "b"), depth: int = 6, p_max: float = 0.3) -> RawTerm:
    """A random tree of at most ``depth`` levels; each inner node is a Max with probability ``p_max``."""
    if depth <= 1 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return One()
        return Letter((rng.choice(gens), rng.choice((1, -1))))
    r = rng.random()
    if r < p_max:
        return Max(random_raw_term(rng, gens, depth - 1, p_max))
    if r < p_max + 0.15:
        return Inv(random_raw_term(rng, gens, depth - 1, p_max))
    return Mul(random_raw_term(rng, gens, depth - 1, p_max), random_raw_term(rng, gens, depth - 1, p_max))


def _positions(t: RawTerm, here=()):
    yield here
    if isinstance(t, Mul):
        yield from _positions(t.left, here + (0,))
        yield from _positions(t.right, here + (1,))
    elif isinstance(t, (Inv, Max)):
        yield from _positions(t.child, here + (0,))


def _get(t: RawTerm, pos):
    for i in pos:
        t = (t.left if i == 0 else t.right) if isinstance(t, Mul) else t.child
    return t


def _put(t: RawTerm, pos, new: RawTerm) -> RawTerm:
    if not pos:
        return new
    i, rest = pos[0], pos[1:]
    if isinstance(t, Mul):
        if i == 0:
            return Mul(_put(t.left, rest, new), t.right)
        return Mul(t.left, _put(t.right, rest, new))
    return type(t)(_put(t.child, rest, new))


def _rewrites(rng: random.Random, s: RawTerm, gens):
    """Every sound rewrite applicable at the root of ``s``."""
    out = [
        Mul(Mul(s, Inv(s)), s),  # s = s s' s
        Mul(Mul(Max(s), Inv(s)), s),  # s = m(s) s' s
        Inv(Inv(s)),
        Mul(One(), s),
        Mul(s, One()),
    ]
    e = Mul(s, Inv(s))
    out.append(Mul(Mul(e, e), s))  # idempotents are idempotent
    y = random_raw_term(rng, gens, depth=3)
    if isinstance(s, One):
        out.append(Max(One()))
    if isinstance(s, Max):
        x = s.child
        out += [
            Max(Mul(Mul(x, Inv(y)), y)),  # m(x) = m(x y' y)
            Inv(Max(Inv(x))),  # m(x) = m(x')'
            Max(s),  # m(x) = m(m(x))
        ]
        if isinstance(x, One):
            out.append(One())
        if isinstance(x, Mul):
            a, b = x.left, x.right
            out.append(Max(Mul(Max(a), b)))  # m(a b) = m(m(a) b)
            out.append(Max(Mul(a, Max(b))))
        if isinstance(x, Max):
            out.append(x)  # m(m(z)) = m(z)
    if isinstance(s, Mul):
        a, b = s.left, s.right
        out.append(Inv(Mul(Inv(b), Inv(a))))
        if isinstance(a, Max) and isinstance(b, Max):
            x, z = a.child, b.child
            out.append(Mul(Mul(Max(Mul(x, z)), Inv(b)), b))  # m(x) m(z) = m(x z) m(z)' m(z)
            out.append(Mul(Mul(a, Inv(a)), Max(Mul(x, z))))  # m(x) m(z) = m(x) m(x)' m(x z)
        if isinstance(a, Mul) and isinstance(a.left, Max) and a.right == Inv(b) and a.left.child == b:
            out.append(b)  # m(x) x' x = x
        if _is_ee(a) and _is_ee(b):  # idempotents commute
            out.append(Mul(b, a))
    if isinstance(s, Inv):
        c = s.child
        if isinstance(c, Max):
            out.append(Max(Inv(c.child)))
        if isinstance(c, Mul):
            out.append(Mul(Inv(c.right), Inv(c.left)))
        if isinstance(c, Inv):
            out.append(c.child)
    return out


def _is_ee(t: RawTerm) -> bool:
    return isinstance(t, Mul) and isinstance(t.right, Inv) and t.right.child == t.left


def mutate(rng: random.Random, t: RawTerm, gens=("a", "b")) -> RawTerm:
    """Apply one sound rewrite at a uniformly chosen subterm."""
    pos = rng.choice(list(_positions(t)))
    new = rng.choice(_rewrites(rng, _get(t, pos), gens))
    return _put(t, pos, new)


def mutate_many(rng: random.Random, t: RawTerm, steps: int, gens=("a", "b")) -> RawTerm:
    for _ in range(steps):
        t = mutate(rng, t, gens)
    return t
