import os
import sys

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from finverse.groups import abelian_group, cyclic_group, trivial_group

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


def letters(gens=("a", "b")):
    return st.tuples(st.sampled_from(gens), st.sampled_from((1, -1)))


def words(gens=("a", "b"), max_size=12):
    return st.lists(letters(gens), max_size=max_size).map(tuple)


@pytest.fixture(scope="session")
def z2():
    return cyclic_group(2)


@pytest.fixture(scope="session")
def z3():
    return cyclic_group(3)


@pytest.fixture(scope="session")
def klein():
    return abelian_group((2, 2), {"a": (1, 0), "b": (0, 1)})


@pytest.fixture(scope="session")
def trivial():
    return trivial_group()


def raw_terms(gens=("a", "b"), max_leaves=12):
    from finverse.terms import Inv, Letter, Max, Mul, One

    leaves = st.one_of(st.just(One()), letters(gens).map(Letter))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.tuples(sub, sub).map(lambda p: Mul(*p)),
            sub.map(Inv),
            sub.map(Max),
        ),
        max_leaves=max_leaves,
    )


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
