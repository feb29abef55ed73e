"""Finite inverse monoids given by multiplication tables.

Everything here works on numpy index tables so that exhaustive checks
(all pairs, all substitutions of a law) stay vectorized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ConsistencyFailure, InvalidMonoid, NoSuchMorphism, NotFInverse, NotInverse
from .groups import FiniteGroup, XGroup, build_canonical_morphism, first_nonassociative_triple
from .terms import MTerm, RawTerm, fold, parse, to_raw, variables

CHUNK = 1 << 22


class FiniteMonoid:
    """A finite monoid on ``range(order)``; ``generators`` names an optional X-assignment."""

    def __init__(self, table, identity: int, generators: dict | None = None, validate: bool = True):
        self.table = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
        self.order = int(self.table.shape[0]) if self.table.ndim == 2 else 0
        self.identity = int(identity)
        self.generators = dict(generators or {})
        if validate:
            self._validate()

    def _validate(self):
        T, n = self.table, self.order
        if n == 0 or T.shape != (n, n):
            raise InvalidMonoid(f"table must be a non-empty square matrix, got shape {T.shape}")
        if T.min() < 0 or T.max() >= n:
            raise InvalidMonoid("table entries must be element indices in range")
        if not 0 <= self.identity < n:
            raise InvalidMonoid(f"identity index {self.identity} out of range")
        r = np.arange(n)
        bad = np.nonzero((T[self.identity] != r) | (T[:, self.identity] != r))[0]
        if len(bad):
            raise InvalidMonoid(f"identity law fails at element {int(bad[0])}")
        triple = first_nonassociative_triple(T)
        if triple is not None:
            raise InvalidMonoid(f"associativity fails at triple {triple}")
        for x, a in self.generators.items():
            if not 0 <= a < n:
                raise InvalidMonoid(f"generator {x} assigned out-of-range index {a}")

    def __repr__(self):
        return f"FiniteMonoid(order={self.order})"

    def mul(self, a, b):
        return self.table[a, b]

    @cached_property
    def inverse(self) -> np.ndarray:
        return check_inverse_monoid(self)

    @cached_property
    def idempotents(self) -> np.ndarray:
        r = np.arange(self.order)
        return np.nonzero(self.table[r, r] == r)[0]

    @cached_property
    def order_matrix(self) -> np.ndarray:
        """``leq[a, b]`` iff ``a <= b`` in the natural partial order."""
        r = np.arange(self.order)
        left_id = self.table[r, self.inverse]  # a a⁻¹
        return self.table[left_id[:, None], r[None, :]] == r[:, None]

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "identity": self.identity,
            "table": self.table.tolist(),
            "generators": dict(self.generators),
        }

    @classmethod
    def from_group(cls, G: FiniteGroup) -> "FiniteMonoid":
        return cls(G.table, G.identity, dict(G.assignment), validate=False)


def load_monoid(source) -> FiniteMonoid:
    """Load a monoid from a JSON path, JSON text or dict."""
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
        gens = dict(data.get("generators", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMonoid(f"malformed monoid file: {exc}") from exc
    if table.shape != (order, order):
        raise InvalidMonoid(f"table shape {table.shape} does not match order {order}")
    return FiniteMonoid(table, identity, gens)


# -- inverse monoid structure -----------------------------------------------------

def check_inverse_monoid(M: FiniteMonoid) -> np.ndarray:
    """The unique inverse of every element, or :class:`NotInverse` with a witness."""
    T, n = M.table, M.order
    r = np.arange(n)
    aba = T[T, r[:, None]]  # [a, b] -> (ab)a
    bab = T[T.T, r[None, :]]  # [a, b] -> (ba)b
    cand = (aba == r[:, None]) & (bab == r[None, :])
    counts = cand.sum(axis=1)
    bad = np.nonzero(counts != 1)[0]
    if len(bad):
        a = int(bad[0])
        found = [int(b) for b in np.nonzero(cand[a])[0][:2]]
        witness = {"element": a, "inverses": found}
        E = M.idempotents
        comm = T[E[:, None], E[None, :]] != T[E[None, :], E[:, None]]
        pairs = np.argwhere(comm)
        if len(pairs):
            e, f = pairs[0]
            witness["noncommuting_idempotents"] = [int(E[e]), int(E[f])]
        kind = "no inverse" if not found else "two inverses"
        raise NotInverse(f"element {a} has {kind}", witness)
    return np.argmax(cand, axis=1)


def natural_order(M: FiniteMonoid, a: int, b: int) -> bool:
    """``a <= b`` iff ``a = a a⁻¹ b``."""
    T = M.table
    return int(T[T[a, M.inverse[a]], b]) == a


def sigma_classes(M: FiniteMonoid) -> np.ndarray:
    """Class labels of the minimum group congruence (``a ~ b`` iff ``ae = be`` for an idempotent e).

    Labels are numbered in order of first appearance, so the identity's class is 0.
    """
    n = M.order
    E = M.idempotents
    # a is joined to the node (e, ae); two elements sharing such a node are related
    rows = np.repeat(np.arange(n), len(E))
    cols = n + (np.arange(len(E))[None, :] * n + M.table[:, E]).ravel()
    size = n + len(E) * n
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    _, labels = connected_components(graph, directed=False)
    labels = labels[:n]
    _, first, canon = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first))
    return rank[canon]


def sigma_quotient_table(M: FiniteMonoid, classes: np.ndarray | None = None) -> np.ndarray:
    """The product table on classes; raises ConsistencyFailure if it is not well defined."""
    if classes is None:
        classes = sigma_classes(M)
    k = int(classes.max()) + 1
    reps = np.array([np.nonzero(classes == c)[0][0] for c in range(k)])
    Q = classes[M.table[reps[:, None], reps[None, :]]]
    full = classes[M.table]
    if not np.array_equal(full, Q[classes[:, None], classes[None, :]]):
        raise ConsistencyFailure("sigma is not a congruence on this table")
    return Q


def sigma_quotient(M: FiniteMonoid, classes: np.ndarray | None = None) -> FiniteGroup:
    """M/σ as an X-generated group (generator x goes to the class of its image in M)."""
    if classes is None:
        classes = sigma_classes(M)
    Q = sigma_quotient_table(M, classes)
    e = int(classes[M.identity])
    inverse = np.argmax(Q == e, axis=1)
    gens = {x: int(classes[a]) for x, a in M.generators.items()}
    return FiniteGroup(Q, e, inverse, gens)


def is_E_unitary(M: FiniteMonoid) -> bool:
    classes = sigma_classes(M)
    ident_class = np.nonzero(classes == classes[M.identity])[0]
    return np.array_equal(ident_class, M.idempotents)


# -- F-inverse certification --------------------------------------------------------

@dataclass(frozen=True)
class Law:
    name: str
    lhs: str
    rhs: str

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


F_INVERSE_LAWS = (
    Law("max-above", "m(x) x' x", "x"),
    Law("max-stable", "m(x y' y)", "m(x)"),
    Law("max-inverse", "m(x)'", "m(x')"),
    Law("max-product-right", "m(x) m(y)", "m(x y) m(y)' m(y)"),
    Law("max-product-left", "m(x) m(y)", "m(x) m(x)' m(x y)"),
    Law("max-flatten", "m(x m(y) z)", "m(x y z)"),
    Law("max-flatten-2", "m(x m(y) z m(u) v)", "m(x y z u v)"),
)

PERFECTION_LAW = Law("perfect", "m(x) m(x')", "1")

# exhaustive substitution budget per law; larger instances are reported as skipped
LAW_BUDGET = 2 * 10**9


@dataclass
class Counterexample:
    assignment: dict
    lhs: int
    rhs: int

    def to_json(self) -> dict:
        return {"assignment": self.assignment, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class FInverseCert:
    monoid: FiniteMonoid
    inverse: np.ndarray
    max_of: np.ndarray
    sigma_class: np.ndarray
    law_results: dict = field(default_factory=dict)

    @property
    def table(self):
        return self.monoid.table

    @property
    def order(self):
        return self.monoid.order

    @property
    def identity(self):
        return self.monoid.identity


def certify_F_inverse(M: FiniteMonoid, laws=F_INVERSE_LAWS, budget: int = LAW_BUDGET) -> FInverseCert:
    """Derive the max-operation of ``M`` and verify it.

    Raises :class:`NotInverse` or :class:`NotFInverse`. After the maximum of
    every σ-class is found, both defining conditions and every law in
    ``laws`` are checked exhaustively (laws whose substitution space exceeds
    ``budget`` are recorded as ``None``).
    """
    inv = M.inverse
    classes = sigma_classes(M)
    leq = M.order_matrix
    max_of = np.empty(M.order, dtype=np.int64)
    for c in range(int(classes.max()) + 1):
        members = np.nonzero(classes == c)[0]
        above_all = np.nonzero(leq[np.ix_(members, members)].all(axis=0))[0]
        if len(above_all) == 0:
            raise NotFInverse(
                f"sigma-class {c} has no maximum", {"class": [int(a) for a in members]}
            )
        max_of[members] = members[above_all[0]]
    cert = FInverseCert(M, inv, max_of, classes)
    T = M.table
    r = np.arange(M.order)
    if not leq[r, max_of].all():
        raise ConsistencyFailure("derived max is not above its argument")
    E = M.idempotents
    if not (max_of[T[:, E]] == max_of[:, None]).all():
        raise ConsistencyFailure("derived max is not stable under idempotent right factors")
    for law in laws:
        result = run_law(cert, law, budget)
        cert.law_results[law.name] = result
        if result is not True and result is not None:
            raise ConsistencyFailure(f"law {law} fails: {result}")
    return cert


def group_cert(G: FiniteGroup) -> FInverseCert:
    M = FiniteMonoid.from_group(G)
    return certify_F_inverse(M)


def run_law(cert: FInverseCert, law: Law, budget: int = LAW_BUDGET):
    """``check_identity`` for ``law``, or ``None`` when the substitution space exceeds ``budget``."""
    if cert.order ** len(_law_vars(law)) > budget:
        return None
    return check_identity(cert, law.lhs, law.rhs)


def _law_vars(law: Law):
    seen = variables(parse(law.lhs))
    for v in variables(parse(law.rhs)):
        if v not in seen:
            seen.append(v)
    return seen


def _as_raw(t) -> RawTerm:
    if isinstance(t, str):
        return parse(t)
    if isinstance(t, MTerm):
        return to_raw(t)
    return t


def _vector_eval(cert: FInverseCert, t: RawTerm, env: dict):
    T, inv, mx = cert.table, cert.inverse, cert.max_of

    def atom(letter):
        x, s = letter
        v = env[x]
        return v if s > 0 else inv[v]

    return fold(t, np.int64(cert.identity), atom, lambda a, b: T[a, b], lambda a: inv[a], lambda a: mx[a])


def evaluate(cert: FInverseCert, term, env: dict | None = None) -> int:
    """Value of a term; letters are looked up in ``env`` or else in the monoid's generators."""
    env = dict(cert.monoid.generators if env is None else env)
    return int(_vector_eval(cert, _as_raw(term), env))


def check_identity(cert: FInverseCert, lhs, rhs):
    """``True`` if ``lhs = rhs`` under every substitution, else the first :class:`Counterexample`.

    Terms are evaluated as trees, so nested ``m(.)`` really applies the
    monoid's max twice; passing an :class:`MTerm` evaluates its canonical reading.
    """
    lt, rt = _as_raw(lhs), _as_raw(rhs)
    names = variables(lt)
    for v in variables(rt):
        if v not in names:
            names.append(v)
    n = cert.order
    k = len(names)
    if k == 0:
        a, b = int(_vector_eval(cert, lt, {})), int(_vector_eval(cert, rt, {}))
        return True if a == b else Counterexample({}, a, b)
    rest = n ** (k - 1)
    block = max(1, CHUNK // rest)
    for start in range(0, n, block):
        first = np.arange(start, min(n, start + block))
        env = {}
        for i, name in enumerate(names):
            shape = [1] * k
            if i == 0:
                shape[0] = len(first)
                env[name] = first.reshape(shape)
            else:
                shape[i] = n
                env[name] = np.arange(n).reshape(shape)
        a = _vector_eval(cert, lt, env)
        b = _vector_eval(cert, rt, env)
        a, b = np.broadcast_arrays(a, b)
        if a.shape != tuple(len(first) if i == 0 else n for i in range(k)):
            a = np.broadcast_to(a, tuple(len(first) if i == 0 else n for i in range(k)))
            b = np.broadcast_to(b, a.shape)
        diff = np.argwhere(a != b)
        if len(diff):
            idx = tuple(diff[0])
            assignment = {
                name: int(first[idx[0]]) if i == 0 else int(idx[i]) for i, name in enumerate(names)
            }
            return Counterexample(assignment, int(a[idx]), int(b[idx]))
    return True


def sample_identity(cert: FInverseCert, lhs, rhs, samples: int = 100_000, seed: int = 0):
    """Like :func:`check_identity` but over ``samples`` random substitutions only."""
    lt, rt = _as_raw(lhs), _as_raw(rhs)
    names = variables(lt)
    for v in variables(rt):
        if v not in names:
            names.append(v)
    rng = np.random.default_rng(seed)
    env = {name: rng.integers(0, cert.order, samples) for name in names}
    a, b = np.broadcast_arrays(_vector_eval(cert, lt, env), _vector_eval(cert, rt, env))
    diff = np.nonzero(a != b)[0]
    if len(diff):
        i = int(diff[0])
        return Counterexample({name: int(env[name][i]) for name in names}, int(a[i]), int(b[i]))
    return True


@dataclass
class PremorphismReport:
    ok: bool
    is_morphism: bool
    witness: dict | None = None


def check_premorphism(cert: FInverseCert) -> PremorphismReport:
    """Check that ``class -> max of class`` is a (strong) premorphism from M/σ into M."""
    T, inv, leq = cert.table, cert.inverse, cert.monoid.order_matrix
    classes = cert.sigma_class
    k = int(classes.max()) + 1
    psi = np.array([cert.max_of[np.nonzero(classes == c)[0][0]] for c in range(k)])
    Q = sigma_quotient_table(cert.monoid, classes)
    e = int(classes[cert.identity])
    qinv = np.argmax(Q == e, axis=1)
    if psi[e] != cert.identity:
        return PremorphismReport(False, False, {"check": "identity", "image": int(psi[e])})
    bad = np.nonzero(psi[qinv] != inv[psi])[0]
    if len(bad):
        return PremorphismReport(False, False, {"check": "inverse", "class": int(bad[0])})
    pg, ph = psi[:, None], psi[None, :]
    prod = T[pg, ph]
    pgh = psi[Q]
    checks = {
        "order": leq[prod, pgh],
        "strong-right": prod == T[T[pgh, inv[ph]], ph],
        "strong-left": prod == T[T[pg, inv[pg]], pgh],
    }
    for name, ok in checks.items():
        fails = np.argwhere(~ok)
        if len(fails):
            g, h = fails[0]
            return PremorphismReport(False, False, {"check": name, "classes": [int(g), int(h)]})
    return PremorphismReport(True, bool((prod == pgh).all()))


# -- generation and Green's relations --------------------------------------------

def semigroup_closure(M: FiniteMonoid, seeds) -> set:
    seeds = sorted({int(s) for s in seeds})
    seen = set(seeds)
    frontier = list(seeds)
    T = M.table
    while frontier:
        nxt = []
        for a in frontier:
            for b in T[a, seeds]:
                b = int(b)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def green_relations(M: FiniteMonoid) -> dict:
    """Boolean matrices for R, L, D, J computed from principal ideals."""
    T, n = M.table, M.order
    right = [frozenset(T[a].tolist()) for a in range(n)]  # aS
    left = [frozenset(T[:, a].tolist()) for a in range(n)]  # Sa
    two = [frozenset(T[T[:, a]].ravel().tolist()) for a in range(n)]  # SaS
    R = np.array([[right[a] == right[b] for b in range(n)] for a in range(n)])
    L = np.array([[left[a] == left[b] for b in range(n)] for a in range(n)])
    J = np.array([[two[a] == two[b] for b in range(n)] for a in range(n)])
    D = (R.astype(np.int64) @ L.astype(np.int64)) > 0
    return {"R": R, "L": L, "D": D, "J": J}


# -- universal morphism -------------------------------------------------------------

@dataclass
class UniversalMorphism:
    source: object  # ExpansionTable of F(G)
    target: FInverseCert
    nu: object
    phi: np.ndarray

    def __call__(self, s) -> int:
        return int(self.phi[self.source.index[s]])


def universal_morphism(G: XGroup, cert: FInverseCert, source=None) -> UniversalMorphism:
    """The canonical morphism F(G) -> target, built generator-first and then fully verified."""
    from .expansions import expansion_table, f_generator, f_identity, max_element

    M = cert.monoid
    if set(M.generators) != set(G.generators):
        raise NoSuchMorphism("target and group are generated over different alphabets")
    quotient = sigma_quotient(M, cert.sigma_class)
    nu = build_canonical_morphism(G, quotient)
    src = source if source is not None else expansion_table(G, "F")
    idx = src.index
    class_max = {int(c): int(cert.max_of[np.nonzero(cert.sigma_class == c)[0][0]]) for c in set(cert.sigma_class.tolist())}

    phi = np.full(len(src.elements), -1, dtype=np.int64)
    seeds = {}
    for x in G.generators:
        seeds[idx[f_generator(G, x)]] = M.generators[x]
    for g in G.elements():
        seeds[idx[max_element(G, g)]] = class_max[nu(g)]
    phi[idx[f_identity(G)]] = M.identity
    for s, a in seeds.items():
        if phi[s] not in (-1, a):
            raise ConsistencyFailure(f"seed {s} receives two images")
        phi[s] = a
    frontier = [idx[f_identity(G)]] + list(seeds)
    T_src, T_tgt = src.table, M.table
    while frontier:
        nxt = []
        for s in frontier:
            for t, b in seeds.items():
                st = int(T_src[s, t])
                img = int(T_tgt[phi[s], b])
                if phi[st] == -1:
                    phi[st] = img
                    nxt.append(st)
                elif phi[st] != img:
                    raise ConsistencyFailure(f"element {st} receives images {phi[st]} and {img}")
        frontier = nxt
    if (phi < 0).any():
        raise ConsistencyFailure("generators and max-elements do not reach every element")

    mul_ok = np.array_equal(phi[T_src], T_tgt[phi[:, None], phi[None, :]])
    inv_src = np.array([idx[s.inverse()] for s in src.elements])
    max_src = np.array([idx[s.max()] for s in src.elements])
    inv_ok = np.array_equal(phi[inv_src], cert.inverse[phi])
    max_ok = np.array_equal(phi[max_src], cert.max_of[phi])
    square_ok = all(int(cert.sigma_class[phi[i]]) == nu(s.point) for i, s in enumerate(src.elements))
    if not (mul_ok and inv_ok and max_ok and square_ok):
        raise ConsistencyFailure(
            f"constructed map fails: mul={mul_ok} inv={inv_ok} max={max_ok} square={square_ok}"
        )
    return UniversalMorphism(src, cert, nu, phi)
