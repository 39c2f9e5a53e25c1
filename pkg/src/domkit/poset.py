"""Finite posets, monotone maps, and the exhaustive enumeration oracle.

Finite posets stand in for dcpos: a directed subset of a finite poset has a
greatest member, so directed lubs are max-of-subset and every lemma downstream
is decidable. Composite posets (products, subposets, function spaces, lifts)
generate structured element identifiers deterministically, which keeps
serialized artifacts byte-for-byte reproducible.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from domkit import kernel
from domkit.errors import (
    BudgetExceeded,
    DuplicateElement,
    EmptyIndex,
    Mismatch,
    NotAntisymmetric,
    NotDirected,
    NotMonotone,
    NotReflexive,
    NotTotal,
    NotTransitive,
    UnknownElement,
)

# Default cap on candidate-function counts for the enumeration oracles.
DEFAULT_BUDGET = 10**6


class FinPoset:
    """A finite poset: distinct identifiers plus a validated order relation.

    Instances are immutable and hashable; the name is a label and does not
    take part in equality. Use :func:`check_poset` to build one from raw
    data, or the combinators below.
    """

    __slots__ = ("name", "elements", "relmat", "_index")

    def __init__(self, name: str, elements: Sequence[str], relmat: bytes):
        # Trusted constructor: relmat must already be a valid order.
        self.name = name
        self.elements = tuple(elements)
        self.relmat = relmat
        self._index = {x: i for i, x in enumerate(self.elements)}

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self._index

    def __eq__(self, other):
        if not isinstance(other, FinPoset):
            return NotImplemented
        return self.elements == other.elements and self.relmat == other.relmat

    def __hash__(self):
        return hash((self.elements, self.relmat))

    def __repr__(self):
        return f"FinPoset({self.name!r}, {len(self.elements)} elements)"

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElement(self.name, x) from None

    def leq_i(self, i: int, j: int) -> bool:
        return bool(self.relmat[i * len(self.elements) + j])

    def leq(self, x: str, y: str) -> bool:
        return self.leq_i(self.index(x), self.index(y))

    def pairs(self):
        """All ordered pairs (x, y) with x <= y, in element order."""
        n = len(self.elements)
        for i in range(n):
            for j in range(n):
                if self.relmat[i * n + j]:
                    yield (self.elements[i], self.elements[j])

    def up_set(self, x: str):
        i = self.index(x)
        n = len(self.elements)
        return [self.elements[j] for j in range(n) if self.relmat[i * n + j]]

    def down_set(self, x: str):
        j = self.index(x)
        n = len(self.elements)
        return [self.elements[i] for i in range(n) if self.relmat[i * n + j]]

    def bottom(self):
        """The least element, or None."""
        n = len(self.elements)
        for i in range(n):
            if all(self.relmat[i * n + j] for j in range(n)):
                return self.elements[i]
        return None

    def top(self):
        """The greatest element, or None."""
        n = len(self.elements)
        for j in range(n):
            if all(self.relmat[i * n + j] for i in range(n)):
                return self.elements[j]
        return None

    def rename(self, name: str) -> "FinPoset":
        return FinPoset(name, self.elements, self.relmat)


def check_poset(name: str, elements: Sequence[str], le: Iterable[tuple[str, str]]) -> FinPoset:
    """Validate raw elements plus a relation into a FinPoset.

    The relation must already be reflexive and transitively closed; failures
    report the offending witness (pair, or triple for transitivity).
    """
    elements = tuple(elements)
    seen = set()
    for x in elements:
        if x in seen:
            raise DuplicateElement(x)
        seen.add(x)
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    m = bytearray(n * n)
    for x, y in le:
        if x not in index:
            raise UnknownElement(name, x)
        if y not in index:
            raise UnknownElement(name, y)
        m[index[x] * n + index[y]] = 1
    for i in range(n):
        if not m[i * n + i]:
            raise NotReflexive(elements[i])
    for i in range(n):
        for j in range(i + 1, n):
            if m[i * n + j] and m[j * n + i]:
                raise NotAntisymmetric(elements[i], elements[j])
    rel = bytes(m)
    w = kernel.transitivity_witness(n, rel)
    if w is not None:
        raise NotTransitive(elements[w[0]], elements[w[1]], elements[w[2]])
    return FinPoset(name, elements, rel)


def poset_from_order(name, elements, leq: Callable[[str, str], bool]) -> FinPoset:
    """Build a poset from a decidable comparison (trusted to be an order)."""
    elements = tuple(elements)
    n = len(elements)
    m = bytearray(n * n)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            if leq(x, y):
                m[i * n + j] = 1
    return FinPoset(name, elements, bytes(m))


def closed_poset(name, elements, le_pairs) -> FinPoset:
    """Reflexive-transitive closure of generator pairs, then validation."""
    elements = tuple(elements)
    index = {}
    for i, x in enumerate(elements):
        if x in index:
            raise DuplicateElement(x)
        index[x] = i
    n = len(elements)
    m = bytearray(n * n)
    for x, y in le_pairs:
        if x not in index:
            raise UnknownElement(name, x)
        if y not in index:
            raise UnknownElement(name, y)
        m[index[x] * n + index[y]] = 1
    closed = kernel.transitive_closure(n, bytes(m))
    return check_poset(name, elements, [
        (elements[i], elements[j]) for i in range(n) for j in range(n) if closed[i * n + j]
    ])


# --- small stock posets -----------------------------------------------------

def chain(k: int, name=None, prefix="c") -> FinPoset:
    """Linear order c0 < c1 < ... on k elements."""
    elements = [f"{prefix}{i}" for i in range(k)]
    return poset_from_order(name or f"chain{k}", elements,
                            lambda x, y: int(x[len(prefix):]) <= int(y[len(prefix):]))


def antichain(k: int, name=None, prefix="a") -> FinPoset:
    elements = [f"{prefix}{i}" for i in range(k)]
    return poset_from_order(name or f"antichain{k}", elements, lambda x, y: x == y)


def unit(name="unit") -> FinPoset:
    return poset_from_order(name, ["*"], lambda x, y: True)


def empty(name="empty") -> FinPoset:
    return FinPoset(name, (), b"")


# --- directedness and lubs ---------------------------------------------------

def undirected_witness(P: FinPoset, members: Sequence[str]):
    """None if directed, (x, y) for the first unbounded pair, or 'empty'."""
    if not members:
        return "empty"
    idx = [P.index(x) for x in members]
    n = len(P.elements)
    for a, i in enumerate(idx):
        for j in idx[a + 1:]:
            if not any(P.relmat[i * n + k] and P.relmat[j * n + k] for k in idx):
                return (P.elements[i], P.elements[j])
    return None


def is_directed(P: FinPoset, members: Iterable[str]) -> bool:
    """Nonempty and every pair has an upper bound inside the subset."""
    members = list(members)
    for x in members:
        P.index(x)  # raises UnknownElement
    return undirected_witness(P, members) is None


def directed_lub(P: FinPoset, members: Iterable[str]) -> str:
    """Greatest member of a directed subset (exists by finiteness).

    It is the least upper bound in all of P: it belongs to the subset, so
    every upper bound of the subset dominates it.
    """
    members = list(members)
    w = undirected_witness(P, members)
    if w == "empty":
        raise NotDirected(empty=True)
    if w is not None:
        raise NotDirected(*w)
    for x in members:
        if all(P.leq(y, x) for y in members):
            return x
    raise AssertionError("directed finite subset must have a greatest member")


# --- monotone maps -----------------------------------------------------------

class MonotoneMap:
    """A total order-preserving map between finite posets."""

    __slots__ = ("dom", "cod", "fwd")

    def __init__(self, dom: FinPoset, cod: FinPoset, assignment):
        """assignment: mapping or callable from dom identifiers to cod identifiers."""
        get = assignment.__getitem__ if isinstance(assignment, Mapping) else assignment
        fwd = []
        for x in dom.elements:
            try:
                y = get(x)
            except KeyError:
                raise NotTotal(x) from None
            fwd.append(cod.index(y))
        self.dom = dom
        self.cod = cod
        self.fwd = tuple(fwd)
        self._validate()

    def _validate(self):
        if not kernel.is_monotone(self.dom.n, self.cod.n, self.dom.relmat,
                                  self.cod.relmat, self.fwd):
            for i, x in enumerate(self.dom.elements):
                for j, y in enumerate(self.dom.elements):
                    if self.dom.leq_i(i, j) and not self.cod.leq_i(self.fwd[i], self.fwd[j]):
                        raise NotMonotone(x, y, self.cod.elements[self.fwd[i]],
                                          self.cod.elements[self.fwd[j]])

    @classmethod
    def raw(cls, dom: FinPoset, cod: FinPoset, fwd: tuple[int, ...]) -> "MonotoneMap":
        """Trusted constructor from index tuples already known monotone."""
        m = object.__new__(cls)
        m.dom = dom
        m.cod = cod
        m.fwd = fwd
        return m

    @classmethod
    def identity(cls, P: FinPoset) -> "MonotoneMap":
        return cls.raw(P, P, tuple(range(P.n)))

    @classmethod
    def constant(cls, dom: FinPoset, cod: FinPoset, y: str) -> "MonotoneMap":
        return cls.raw(dom, cod, (cod.index(y),) * dom.n)

    def __call__(self, x: str) -> str:
        return self.cod.elements[self.fwd[self.dom.index(x)]]

    def apply_i(self, i: int) -> int:
        return self.fwd[i]

    def then(self, g: "MonotoneMap") -> "MonotoneMap":
        """Diagram-order composite: first self, then g."""
        if self.cod != g.dom:
            raise Mismatch(f"cannot compose {self!r} with {g!r}: objects differ")
        return MonotoneMap.raw(self.dom, g.cod, tuple(g.fwd[v] for v in self.fwd))

    def is_identity(self) -> bool:
        return self.dom == self.cod and self.fwd == tuple(range(self.dom.n))

    def is_injective(self) -> bool:
        return len(set(self.fwd)) == self.dom.n

    def as_pairs(self):
        return [(x, self.cod.elements[self.fwd[i]]) for i, x in enumerate(self.dom.elements)]

    def pointwise_leq(self, other: "MonotoneMap") -> bool:
        if self.dom != other.dom or self.cod != other.cod:
            raise Mismatch("pointwise comparison needs equal domains and codomains")
        return all(self.cod.leq_i(a, b) for a, b in zip(self.fwd, other.fwd))

    def __eq__(self, other):
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.fwd == other.fwd

    def __hash__(self):
        return hash((self.dom, self.cod, self.fwd))

    def __repr__(self):
        return f"MonotoneMap({self.dom.name} -> {self.cod.name})"


def enumerate_monotone_maps(A: FinPoset, B: FinPoset, budget=DEFAULT_BUDGET):
    """Exactly all monotone maps A -> B, lexicographic in element order."""
    space = B.n ** A.n if A.n else 1
    if space > budget:
        raise BudgetExceeded(space, budget)
    return [MonotoneMap.raw(A, B, f)
            for f in kernel.monotone_maps(A.n, B.n, A.relmat, B.relmat)]


# --- composite posets --------------------------------------------------------

def tuple_id(components: Sequence[str]) -> str:
    return "(" + ",".join(components) + ")"


def product_family(index: Sequence[str], factors: Mapping[str, FinPoset],
                   budget=DEFAULT_BUDGET):
    """Product of a nonempty family, pointwise order, plus projections.

    Carrier identifiers are tuples of factor identifiers in index order.
    Returns (poset, {index id -> projection MonotoneMap}).
    """
    index = list(index)
    if not index:
        raise EmptyIndex()
    posets = [factors[i] for i in index]
    size = 1
    for P in posets:
        size *= P.n
    if size > budget:
        raise BudgetExceeded(size, budget)

    combos: list[tuple[int, ...]] = [()]
    for P in posets:
        combos = [c + (i,) for c in combos for i in range(P.n)]
    elements = [tuple_id([posets[k].elements[c[k]] for k in range(len(posets))])
                for c in combos]
    n = len(combos)
    m = bytearray(n * n)
    for a in range(n):
        ca = combos[a]
        for b in range(n):
            cb = combos[b]
            if all(P.leq_i(ca[k], cb[k]) for k, P in enumerate(posets)):
                m[a * n + b] = 1
    name = "prod(" + ",".join(P.name for P in posets) + ")"
    prod = FinPoset(name, elements, bytes(m))
    projections = {}
    for k, i in enumerate(index):
        projections[i] = MonotoneMap.raw(prod, posets[k],
                                         tuple(c[k] for c in combos))
    return prod, projections


def sub_poset(P: FinPoset, keep: Callable[[str], bool]):
    """Induced subposet on the kept elements, plus the inclusion map."""
    kept = [x for x in P.elements if keep(x)]
    idx = [P.index(x) for x in kept]
    n = len(kept)
    m = bytearray(n * n)
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            if P.leq_i(i, j):
                m[a * n + b] = 1
    sub = FinPoset(f"sub({P.name})", kept, bytes(m))
    inclusion = MonotoneMap.raw(sub, P, tuple(idx))
    return sub, inclusion


def map_id(f: MonotoneMap) -> str:
    return "{" + ",".join(f"{x}:{y}" for x, y in f.as_pairs()) + "}"


def function_space_maps(A: FinPoset, B: FinPoset, budget=DEFAULT_BUDGET):
    """(poset of all monotone maps A -> B under the pointwise order, maps)."""
    maps = enumerate_monotone_maps(A, B, budget)
    elements = [map_id(f) for f in maps]
    n = len(maps)
    m = bytearray(n * n)
    for a, f in enumerate(maps):
        for b, g in enumerate(maps):
            if all(B.leq_i(u, v) for u, v in zip(f.fwd, g.fwd)):
                m[a * n + b] = 1
    poset = FinPoset(f"fn({A.name},{B.name})", elements, bytes(m))
    return poset, maps


def function_space(A: FinPoset, B: FinPoset, budget=DEFAULT_BUDGET) -> FinPoset:
    return function_space_maps(A, B, budget)[0]


def inl_id(x: str) -> str:
    return f"inl({x})"


def inr_id(x: str) -> str:
    return f"inr({x})"


def coproduct(A: FinPoset, B: FinPoset) -> FinPoset:
    """Disjoint union with no order across the two sides."""
    elements = [inl_id(x) for x in A.elements] + [inr_id(y) for y in B.elements]
    na, n = A.n, A.n + B.n
    m = bytearray(n * n)
    for i in range(A.n):
        for j in range(A.n):
            if A.leq_i(i, j):
                m[i * n + j] = 1
    for i in range(B.n):
        for j in range(B.n):
            if B.leq_i(i, j):
                m[(na + i) * n + (na + j)] = 1
    return FinPoset(f"{A.name}+{B.name}", elements, bytes(m))


def all_posets(n: int, prefix="p"):
    """All posets on n labeled elements whose strict order respects the
    label order. Every finite poset is isomorphic to one of these, so the
    family is exhaustive up to isomorphism (and order-theoretic laws are
    isomorphism-invariant)."""
    import itertools

    elements = [f"{prefix}{i}" for i in range(n)]
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for bits in itertools.product((0, 1), repeat=len(slots)):
        rel = {s for s, b in zip(slots, bits) if b}
        if any((i, k) not in rel
                for (i, j) in rel for (j2, k) in rel if j2 == j):
            continue
        m = bytearray(n * n)
        for i in range(n):
            m[i * n + i] = 1
        for i, j in rel:
            m[i * n + j] = 1
        out.append(FinPoset(f"{prefix}{n}_{len(out)}", elements, bytes(m)))
    return out


def hasse_edges(P: FinPoset):
    """Cover pairs (x, y): x < y with nothing strictly between."""
    n = P.n
    out = []
    for i in range(n):
        for j in range(n):
            if i == j or not P.leq_i(i, j):
                continue
            if any(k != i and k != j and P.leq_i(i, k) and P.leq_i(k, j)
                   for k in range(n)):
                continue
            out.append((P.elements[i], P.elements[j]))
    return out
