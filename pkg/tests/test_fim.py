import json
import random

import numpy as np
import pytest

from conftest import DATA
from finverse.errors import InvalidMonoid, NoSuchMorphism, NotFInverse, NotInverse
from finverse.expansions import expansion_table, f_generator, max_element, to_perfect
from finverse.fim import (
    F_INVERSE_LAWS,
    PERFECTION_LAW,
    Counterexample,
    FiniteMonoid,
    certify_F_inverse,
    check_identity,
    check_inverse_monoid,
    check_premorphism,
    evaluate,
    group_cert,
    is_E_unitary,
    load_monoid,
    natural_order,
    run_law,
    sample_identity,
    semigroup_closure,
    sigma_classes,
    sigma_quotient,
    universal_morphism,
)
from finverse.groups import abelian_group, cyclic_group
from oracles import bf_group_congruences, bf_inverse, bf_leq, bf_max, bf_sigma, random_inverse_monoid


def semilattice(k):
    """Subsets of a k-set under union; the empty set is the identity."""
    n = 1 << k
    return FiniteMonoid([[a | b for b in range(n)] for a in range(n)], 0)


def brandt_with_identity():
    # 0: identity, 1: a, 2: a', 3: a a', 4: a' a, 5: zero
    names = ["1", "a", "a'", "aa'", "a'a", "0"]
    idx = {s: i for i, s in enumerate(names)}
    prods = {
        ("a", "a'"): "aa'", ("a'", "a"): "a'a", ("a", "a'a"): "a", ("a'a", "a'"): "a'",
        ("aa'", "a"): "a", ("a'", "aa'"): "a'", ("aa'", "aa'"): "aa'", ("a'a", "a'a"): "a'a",
    }
    table = []
    for x in names:
        row = []
        for y in names:
            if x == "1":
                row.append(idx[y])
            elif y == "1":
                row.append(idx[x])
            else:
                row.append(idx[prods.get((x, y), "0")])
        table.append(row)
    return FiniteMonoid(table, 0)


def left_zero_with_identity():
    return FiniteMonoid([[0, 1, 2], [1, 1, 1], [2, 2, 2]], 0)


@pytest.fixture(scope="module")
def FZ2(z2):
    return expansion_table(z2, "F")


@pytest.fixture(scope="module")
def PZ2(z2):
    return expansion_table(z2, "P")


@pytest.fixture(scope="module")
def BRZ2(z2):
    return expansion_table(z2, "BR")


# -- validation and inverse structure ----------------------------------------------------


def test_monoid_validation():
    with pytest.raises(InvalidMonoid, match="associativity"):
        FiniteMonoid([[0, 1, 2], [1, 2, 0], [2, 1, 0]], 0)
    with pytest.raises(InvalidMonoid, match="identity"):
        FiniteMonoid([[0, 1], [0, 1]], 0)
    with pytest.raises(InvalidMonoid):
        FiniteMonoid([[0, 3], [1, 0]], 0)


def test_load_monoid_round_trip(tmp_path, FZ2):
    M = FZ2.monoid()
    path = tmp_path / "m.json"
    path.write_text(json.dumps(M.to_dict()))
    L = load_monoid(str(path))
    assert np.array_equal(L.table, M.table) and L.identity == M.identity and L.generators == M.generators
    with pytest.raises(InvalidMonoid):
        load_monoid({"order": 2, "identity": 0, "table": [[0]]})


def test_inverse_tables():
    G = cyclic_group(5)
    assert np.array_equal(check_inverse_monoid(FiniteMonoid.from_group(G)), G.inverse)
    S = semilattice(1)
    assert check_inverse_monoid(S).tolist() == [0, 1]
    with pytest.raises(NotInverse) as info:
        check_inverse_monoid(left_zero_with_identity())
    assert info.value.witness["noncommuting_idempotents"]


def test_natural_order_examples():
    S = semilattice(2)
    for a in range(4):
        assert natural_order(S, a, a)
        for b in range(4):
            assert natural_order(S, a, b) == (a == (a | b))
    G = FiniteMonoid.from_group(cyclic_group(4))
    for a in range(4):
        for b in range(4):
            assert natural_order(G, a, b) == (a == b)


def test_sigma_examples(FZ2):
    assert len(set(sigma_classes(FiniteMonoid.from_group(cyclic_group(4))))) == 4
    assert len(set(sigma_classes(semilattice(2)))) == 1
    classes = sigma_classes(FZ2.monoid())
    assert sorted(np.bincount(classes).tolist()) == [4, 5]
    Q = sigma_quotient(FZ2.monoid())
    assert Q.order == 2 and Q.gen("a") != Q.identity


def test_E_unitary_examples(FZ2):
    assert is_E_unitary(FiniteMonoid.from_group(cyclic_group(3)))
    assert is_E_unitary(FZ2.monoid())
    B = brandt_with_identity()
    check_inverse_monoid(B)
    assert not is_E_unitary(B)


# -- certification ----------------------------------------------------------------------


def test_group_max_is_identity():
    cert = group_cert(cyclic_group(4))
    assert cert.max_of.tolist() == [0, 1, 2, 3]


def test_F_max_is_delta(FZ2):
    cert = certify_F_inverse(FZ2.monoid())
    for i, s in enumerate(FZ2.elements):
        assert FZ2.elements[cert.max_of[i]] == max_element(s.group, s.point)
    assert all(v is True for v in cert.law_results.values())


def test_semilattice_max_is_identity():
    cert = certify_F_inverse(semilattice(2))
    assert cert.max_of.tolist() == [0, 0, 0, 0]


def test_not_F_inverse(z2):
    M = expansion_table(z2, "M").monoid()
    with pytest.raises(NotFInverse) as info:
        certify_F_inverse(M)
    assert len(info.value.witness["class"]) == 3


def test_check_identity_examples(FZ2, PZ2):
    cert = certify_F_inverse(FZ2.monoid(), laws=())
    assert check_identity(cert, "m(x) x' x", "x") is True
    bad = check_identity(cert, PERFECTION_LAW.lhs, PERFECTION_LAW.rhs)
    assert isinstance(bad, Counterexample)
    x = bad.assignment["x"]
    assert FZ2.elements[x].point != FZ2.group.identity
    assert bad.lhs != bad.rhs == cert.identity
    pcert = certify_F_inverse(PZ2.monoid())
    assert check_identity(pcert, PERFECTION_LAW.lhs, PERFECTION_LAW.rhs) is True


def test_check_identity_without_variables(FZ2):
    cert = certify_F_inverse(FZ2.monoid(), laws=())
    assert check_identity(cert, "m(1)", "1") is True
    assert evaluate(cert, "a a'") != cert.identity
    assert evaluate(cert, "m(a a)") == cert.identity


def test_check_identity_finds_counterexample_in_large_space(klein):
    cert = certify_F_inverse(expansion_table(klein, "F").monoid(), laws=())
    # commutativity fails; the check must still report a concrete pair
    bad = check_identity(cert, "x y", "y x")
    assert isinstance(bad, Counterexample)
    T = cert.table
    assert T[bad.assignment["x"], bad.assignment["y"]] != T[bad.assignment["y"], bad.assignment["x"]]


def test_sample_identity(klein):
    cert = certify_F_inverse(expansion_table(klein, "F").monoid(), laws=())
    assert sample_identity(cert, "m(x m(y) z m(u) v)", "m(x y z u v)", samples=20_000) is True
    bad = sample_identity(cert, "x y", "y x", samples=1000)
    assert isinstance(bad, Counterexample)
    T = cert.table
    assert T[bad.assignment["x"], bad.assignment["y"]] == bad.lhs != bad.rhs


def test_run_law_skips_over_budget(FZ2):
    cert = certify_F_inverse(FZ2.monoid(), laws=())
    law = F_INVERSE_LAWS[-1]
    assert run_law(cert, law, budget=10) is None
    assert run_law(cert, law) is True


def test_premorphism_examples(FZ2, BRZ2):
    assert check_premorphism(group_cert(cyclic_group(3))).is_morphism
    rep = check_premorphism(certify_F_inverse(FZ2.monoid()))
    assert rep.ok and not rep.is_morphism
    rep = check_premorphism(certify_F_inverse(BRZ2.monoid()))
    assert rep.ok and not rep.is_morphism


# -- cross-validation against brute force ---------------------------------------------------


def _random_inverse_monoids(count, max_order, seed, min_order=3):
    """Distinct inverse monoids of partial bijections with min_order <= order <= max_order."""
    rng = random.Random(seed)
    seen = set()
    while len(seen) < count:
        table, ident, _ = random_inverse_monoid(
            rng, rng.choice((2, 3, 4)), rng.choice((1, 2, 3)), rng.choice((0.5, 0.75, 1.0))
        )
        key = str(table)
        if min_order <= len(table) <= max_order and key not in seen:
            seen.add(key)
            yield table, ident


def test_inverse_tables_match_brute_force():
    for table, ident in _random_inverse_monoids(60, 40, 1):
        inv = check_inverse_monoid(FiniteMonoid(table, ident))
        assert [[int(b)] for b in inv] == bf_inverse(table)


def test_natural_order_matches_definition():
    for table, ident in _random_inverse_monoids(40, 40, 2):
        M = FiniteMonoid(table, ident)
        n = len(table)
        assert [[bool(M.order_matrix[a, b]) for b in range(n)] for a in range(n)] == [
            [bf_leq(table, a, b) for b in range(n)] for a in range(n)
        ]


def test_certification_agrees_with_brute_force_max_search():
    fi = nf = 0
    for table, ident in _random_inverse_monoids(150, 40, 3):
        M = FiniteMonoid(table, ident)
        expected = bf_max(table)
        if None in expected:
            nf += 1
            with pytest.raises(NotFInverse):
                certify_F_inverse(M)
        else:
            fi += 1
            cert = certify_F_inverse(M)
            assert cert.max_of.tolist() == expected
            assert is_E_unitary(M)
    assert fi > 20 and nf > 20


def test_sigma_is_the_least_group_congruence():
    checked = 0
    for table, ident in _random_inverse_monoids(25, 6, 4):
        M = FiniteMonoid(table, ident)
        labels = sigma_classes(M).tolist()
        ours = frozenset(frozenset(i for i, c in enumerate(labels) if c == k) for k in set(labels))
        assert ours == frozenset(bf_sigma(table))
        congruences = bf_group_congruences(table, ident)
        assert ours in congruences
        for other in congruences:
            # every group congruence is coarser than sigma
            assert all(any(block <= big for big in other) for block in ours)
        checked += 1
    assert checked == 25


def test_F_inverse_implies_E_unitary_on_expansions(z3):
    for kind in ("F", "BR", "P"):
        M = expansion_table(z3, kind).monoid()
        certify_F_inverse(M, laws=())
        assert is_E_unitary(M)


# -- generation and the universal morphism ------------------------------------------------------


@pytest.mark.parametrize("kind", ["F", "BR", "P"])
def test_generators_and_max_elements_generate(z3, kind):
    tab = expansion_table(z3, kind)
    M = tab.monoid()
    cert = certify_F_inverse(M, laws=())
    seeds = set(M.generators.values()) | set(cert.max_of.tolist())
    assert semigroup_closure(M, seeds) == set(range(M.order))


def test_universal_morphism_to_itself(FZ2):
    u = universal_morphism(FZ2.group, certify_F_inverse(FZ2.monoid()), source=FZ2)
    assert u.phi.tolist() == list(range(len(FZ2.elements)))


def test_universal_morphism_to_P_is_to_perfect(FZ2, PZ2):
    u = universal_morphism(FZ2.group, certify_F_inverse(PZ2.monoid()), source=FZ2)
    for i, s in enumerate(FZ2.elements):
        assert PZ2.elements[u.phi[i]] == to_perfect(s)


def test_universal_morphism_to_the_group(FZ2, z2):
    cert = group_cert(z2)
    u = universal_morphism(z2, cert, source=FZ2)
    for s in FZ2.elements:
        assert u(s) == s.point


def test_universal_morphism_needs_nu(z3, FZ2):
    with pytest.raises(NoSuchMorphism):
        universal_morphism(z3, certify_F_inverse(FZ2.monoid()))


def test_universal_morphism_through_quotient():
    # F(Z4) maps onto F(Z2) only through the quotient map on points
    z4, z2 = cyclic_group(4), cyclic_group(2)
    target = certify_F_inverse(expansion_table(z2, "F").monoid())
    u = universal_morphism(z4, target)
    src = expansion_table(z4, "F")
    gen = src.index[f_generator(z4, "a")]
    assert u.phi[gen] == target.monoid.generators["a"]


def test_data_files_load():
    from finverse.groups import load_group

    assert load_group(f"{DATA}/z2xz2.json") == abelian_group((2, 2), {"a": (1, 0), "b": (0, 1)})


def test_all_laws_listed():
    assert {law.name for law in F_INVERSE_LAWS} >= {"max-above", "max-stable", "max-inverse", "max-flatten"}
