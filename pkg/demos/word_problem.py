"""Deciding equalities of terms in F(free group) by normal forms and graphs."""

import random

from finverse import FreeGroup, eval_term_F, normalize, parse, render
from finverse.randterms import mutate_many, random_raw_term

G = FreeGroup(["a", "b"])


def same(lhs, rhs):
    s = eval_term_F(G, normalize(parse(lhs)))
    t = eval_term_F(G, normalize(parse(rhs)))
    return s == t


# a few laws that hold in every F-inverse monoid
print(same("m(x) x' x".replace("x", "(a b)"), "a b"))
print(same("m(a m(b) a')", "m(a b a')"))
print(same("m(a)'", "m(a')"))
# and one that does not: commuting a and b
print(same("a b", "b a"))

# normal forms push inverses down to letters and flatten nested m(.); nothing is
# freely reduced, since a a' is an idempotent and not 1
for text in ("a a' b", "m(a a') b b'", "(a m(b))'", "m(1)"):
    print(f"{text:>14}  ->  {render(normalize(parse(text)))}")

# random terms and random sound rewrites of them always evaluate equally
rng = random.Random(1)
agree = 0
for _ in range(500):
    s = random_raw_term(rng)
    t = mutate_many(rng, s, 3)
    agree += eval_term_F(G, normalize(s)) == eval_term_F(G, normalize(t))
print(f"{agree}/500 mutated pairs agree")
