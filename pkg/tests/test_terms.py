import random

import pytest
from hypothesis import given

from conftest import raw_terms, words
from finverse.errors import TermSyntaxError
from finverse.groups import parse_word
from finverse.randterms import random_raw_term
from finverse.terms import (
    IDENTITY,
    Inv,
    Letter,
    Max,
    MTerm,
    Mul,
    One,
    normalize,
    parse,
    render,
    size,
    strip,
    term_inv,
    term_max,
    term_mul,
    to_raw,
)
from oracles import from_raw, rewrite_normal

W = parse_word


def N(text):
    return normalize(parse(text))


def a_(name="a"):
    return Letter((name, 1))


# -- parsing ----------------------------------------------------------------------


def test_parse_examples():
    a, b, c = a_("a"), a_("b"), a_("c")
    assert parse("a b' m(a b) c") == Mul(Mul(Mul(a, Inv(b)), Max(Mul(a, b))), c)
    assert parse("1") == One()
    assert parse("m(m(a) b)'") == Inv(Max(Mul(Max(a), b)))


def test_parse_repeated_primes_and_parentheses():
    assert parse("a''") == Inv(Inv(a_()))
    assert parse("(a b)'") == Inv(Mul(a_("a"), a_("b")))
    assert parse("  a\tb ") == Mul(a_("a"), a_("b"))


def test_bare_m_is_a_letter():
    assert parse("m") == a_("m")
    assert parse("m (a)") == Max(a_("a"))


@pytest.mark.parametrize(
    "text, position, must_expect",
    [
        ("", 0, "identifier"),
        ("a (b", 4, "')'"),
        ("m(", 2, "'1'"),
        (")", 0, "'('"),
        ("A", 0, "identifier"),
        ("a)", 1, "end of input"),
        ("m()", 2, "'m('"),
    ],
)
def test_syntax_errors(text, position, must_expect):
    with pytest.raises(TermSyntaxError) as info:
        parse(text)
    assert info.value.position == position
    assert must_expect in info.value.expected
    assert info.value.caret().splitlines()[-1] == " " * position + "^"


# -- normal form ----------------------------------------------------------------------


def test_normalize_examples():
    assert N("m(m(a) b)") == MTerm((), ((W("a b"), ()),))
    assert N("(a m(b))'") == MTerm((), ((W("b'"), W("a'")),))
    assert N("m(1)") == MTerm((), (((), ()),))
    assert N("m(1)") != IDENTITY
    assert N("1 a 1") == MTerm(W("a"), ())


def test_no_free_reduction_inside_max():
    assert N("m(a a')") != N("m(1)")
    assert N("m(a a')") == MTerm((), ((W("a a'"), ()),))


def test_term_operations():
    assert term_mul(N("a"), N("b")) == N("a b")
    assert term_mul(N("m(a)"), N("m(b)")) == MTerm((), ((W("a"), ()), (W("b"), ())))
    assert term_mul(N("a m(b)"), IDENTITY) == N("a m(b)")
    assert term_inv(N("a m(b) c")) == N("c' m(b') a'")
    assert term_inv(IDENTITY) == IDENTITY
    assert term_inv(N("m(a)")) == N("m(a')")
    assert term_max(N("a m(b) c")) == N("m(a b c)")
    assert term_max(IDENTITY) == N("m(1)")
    assert term_max(N("m(a)")) == N("m(a)")


def test_render_examples():
    assert render(MTerm(W("a"), ((W("b"), W("c")),))) == "a m(b) c"
    assert render(IDENTITY) == "1"
    assert render(MTerm((), (((), ()),))) == "m(1)"


@given(raw_terms())
def test_normalize_matches_rewriting_oracle(t):
    nf = normalize(t)
    assert (nf.prefix, nf.blocks) == rewrite_normal(from_raw(t))


@given(raw_terms())
def test_normalize_is_idempotent_and_round_trips(t):
    nf = normalize(t)
    assert normalize(to_raw(nf)) == nf
    assert normalize(parse(render(nf))) == nf


@given(raw_terms(), raw_terms(), raw_terms())
def test_term_algebra_laws(x, y, z):
    X, Y, Z = normalize(x), normalize(y), normalize(z)
    assert term_mul(term_mul(X, Y), Z) == term_mul(X, term_mul(Y, Z))
    assert term_mul(X, IDENTITY) == X == term_mul(IDENTITY, X)
    assert term_inv(term_mul(X, Y)) == term_mul(term_inv(Y), term_inv(X))
    assert term_inv(term_inv(X)) == X
    assert term_inv(term_max(X)) == term_max(term_inv(X))
    assert term_max(term_mul(term_mul(X, term_max(Y)), Z)) == term_max(term_mul(term_mul(X, Y), Z))


def _single_law_rewrites(t):
    """Terms obtained from ``t`` by one application of an algebra law at the root."""
    out = [Mul(One(), t), Mul(t, One()), Inv(Inv(t))]
    if isinstance(t, Mul):
        out.append(Inv(Mul(Inv(t.right), Inv(t.left))))
        if isinstance(t.left, Mul):
            out.append(Mul(t.left.left, Mul(t.left.right, t.right)))
    if isinstance(t, Max):
        out += [Inv(Max(Inv(t.child))), Max(t), Max(Mul(Max(One()), t.child))]
        if isinstance(t.child, Mul):
            out.append(Max(Mul(Max(t.child.left), t.child.right)))
    return out


def _positions(t, here=()):
    yield here, t
    if isinstance(t, Mul):
        yield from _positions(t.left, here + (0,))
        yield from _positions(t.right, here + (1,))
    elif isinstance(t, (Inv, Max)):
        yield from _positions(t.child, here + (0,))


def _replace(t, pos, new):
    if not pos:
        return new
    if isinstance(t, Mul):
        if pos[0] == 0:
            return Mul(_replace(t.left, pos[1:], new), t.right)
        return Mul(t.left, _replace(t.right, pos[1:], new))
    return type(t)(_replace(t.child, pos[1:], new))


@given(raw_terms(max_leaves=6))
def test_normalize_is_invariant_under_single_law_applications(t):
    nf = normalize(t)
    for pos, sub in _positions(t):
        for new in _single_law_rewrites(sub):
            assert normalize(_replace(t, pos, new)) == nf


@given(words(max_size=6), words(max_size=6))
def test_strip_concatenates_all_words(u, v):
    t = MTerm(u, ((v, u),))
    assert strip(t) == u + v + u


def test_random_terms_round_trip_at_scale():
    rng = random.Random(7)
    for _ in range(2000):
        t = random_raw_term(rng, ("a", "b", "c"))
        nf = normalize(t)
        assert normalize(parse(render(nf))) == nf
        assert normalize(to_raw(nf)) == nf


def test_random_term_shape_limits():
    rng = random.Random(3)
    depths = []

    def depth(t):
        if isinstance(t, Mul):
            return 1 + max(depth(t.left), depth(t.right))
        if isinstance(t, (Inv, Max)):
            return 1 + depth(t.child)
        return 1

    for _ in range(500):
        t = random_raw_term(rng, ("a", "b", "c"))
        depths.append(depth(t))
        assert size(t) >= 1
    assert max(depths) <= 6
