"""F-inverse monoid expansions of X-generated groups."""

from .cayley import Path, Subgraph, delta, edges_only, is_connected, path_end, span_path, translate, union
from .errors import *  # noqa: F401,F403
from .expansions import (
    FElement,
    PElement,
    br_mul,
    enumerate_BR,
    enumerate_F,
    enumerate_M,
    enumerate_P,
    eval_term_F,
    eval_term_M,
    eval_term_P,
    expansion_table,
    f_inv,
    f_is_idempotent,
    f_leq,
    f_max,
    f_mul,
    functor_map,
    green,
    in_BR,
    in_M,
    in_Q,
    p_inv,
    p_max,
    p_mul,
    to_perfect,
)
from .fim import (
    FiniteMonoid,
    certify_F_inverse,
    check_identity,
    check_inverse_monoid,
    check_premorphism,
    is_E_unitary,
    load_monoid,
    natural_order,
    sigma_classes,
    universal_morphism,
)
from .groups import (
    FiniteGroup,
    FreeGroup,
    abelian_group,
    build_canonical_morphism,
    cyclic_group,
    load_group,
    reduce_word,
    trivial_group,
)
from .journeys import Journey, journey_compose, journey_of_term, journey_span
from .terms import MTerm, normalize, parse, render, term_inv, term_max, term_mul
