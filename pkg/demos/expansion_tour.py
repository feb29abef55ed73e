"""A walk through F(Z2): elements as pointed subgraphs of the Cayley graph."""

from finverse import cyclic_group, enumerate_F, enumerate_M, enumerate_BR, enumerate_P
from finverse import eval_term_F, f_max, green, normalize, parse
from finverse.cli import pretty

G = cyclic_group(2)  # one generator a with a a = 1

# Every element of F(G) is a finite subgraph containing 1 plus a marked point.
# The Cayley graph of Z2 has two vertices and two a-edges, so there are few of them.
elements = enumerate_F(G)
print(f"|F(Z2)| = {len(elements)}")
print(f"|M(Z2)| = {len(enumerate_M(G))}  (connected graphs)")
print(f"|BR(Z2)| = {len(enumerate_BR(G))}  (no edges)")
print(f"|P(Z2)| = {len(enumerate_P(G))}  (no isolated vertices)")

# terms are evaluated after normalization; m(.) forgets the edges of its argument
for text in ("a", "a a", "a a'", "m(a)", "m(a) a' a"):
    s = eval_term_F(G, normalize(parse(text)))
    print(f"\n{text}")
    print(pretty(s))

# m(x) sits above x in the natural order
x = eval_term_F(G, normalize(parse("a a")))
print("\nx <= m(x):", x <= f_max(x))

# Green's relations are read off the graphs directly
s = eval_term_F(G, normalize(parse("a")))
t = eval_term_F(G, normalize(parse("a'")))
print("a R a':", green(s, t, "R"), " a L a':", green(s, t, "L"), " a D a':", green(s, t, "D"))
