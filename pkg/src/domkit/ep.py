"""Embedding-projection pairs between finite posets.

An ep-pair is an adjunction emb -| proj with proj o emb = id (section law)
and emb o proj <= id pointwise (deflation law). Either half determines the
other; ``projection_from_embedding`` recovers the projection by the pointwise
formula, and ``enumerate_ep_pairs`` is the exhaustive oracle it is checked
against.
"""

from __future__ import annotations

from domkit import kernel
from domkit.errors import (
    BudgetExceeded,
    Mismatch,
    NoAdjoint,
    NotDeflation,
    NotSection,
)
from domkit.poset import DEFAULT_BUDGET, FinPoset, MonotoneMap


class EpPair:
    """A validated embedding-projection pair; build with make_ep."""

    __slots__ = ("emb", "proj")

    def __init__(self, emb: MonotoneMap, proj: MonotoneMap):
        self.emb = emb
        self.proj = proj

    @property
    def dom(self) -> FinPoset:
        return self.emb.dom

    @property
    def cod(self) -> FinPoset:
        return self.emb.cod

    def __eq__(self, other):
        if not isinstance(other, EpPair):
            return NotImplemented
        return self.emb == other.emb and self.proj == other.proj

    def __hash__(self):
        return hash((self.emb, self.proj))

    def __repr__(self):
        return f"EpPair({self.dom.name} <-> {self.cod.name})"


def make_ep(emb: MonotoneMap, proj: MonotoneMap) -> EpPair:
    """Validate the section and deflation laws and package the pair."""
    if emb.dom != proj.cod or emb.cod != proj.dom:
        raise Mismatch("emb and proj do not connect the same two posets")
    for i, x in enumerate(emb.dom.elements):
        back = proj.fwd[emb.fwd[i]]
        if back != i:
            raise NotSection(x, emb.dom.elements[back])
    for j, y in enumerate(emb.cod.elements):
        out = emb.fwd[proj.fwd[j]]
        if not emb.cod.leq_i(out, j):
            raise NotDeflation(y, emb.cod.elements[out])
    # implied by the section law, asserted anyway
    assert emb.is_injective()
    return EpPair(emb, proj)


def identity_ep(P: FinPoset) -> EpPair:
    ident = MonotoneMap.identity(P)
    return EpPair(ident, ident)


def compose_ep(f: EpPair, g: EpPair) -> EpPair:
    """f: A <-> B then g: B <-> C gives A <-> C; laws revalidated."""
    if f.cod != g.dom:
        raise Mismatch("cod of first ep-pair differs from dom of second")
    return make_ep(f.emb.then(g.emb), g.proj.then(f.proj))


def projection_from_embedding(emb: MonotoneMap) -> EpPair:
    """Recover the unique projection adjoint to an embedding.

    Pointwise formula: proj(y) = greatest x with emb(x) <= y. If the formula
    fails to produce a valid ep-pair the map was not an embedding. This is
    the fast path; the enumeration oracle cross-checks it in the test suite.
    """
    A, B = emb.dom, emb.cod
    fwd = []
    for j, y in enumerate(B.elements):
        below = [i for i in range(A.n) if B.leq_i(emb.fwd[i], j)]
        best = None
        for i in below:
            if all(A.leq_i(k, i) for k in below):
                best = i
                break
        if best is None:
            raise NoAdjoint(f"candidates below {y!r} have no greatest member", witness=y)
        fwd.append(best)
    if not kernel.is_monotone(B.n, A.n, B.relmat, A.relmat, tuple(fwd)):
        raise NoAdjoint("the pointwise candidate projection is not monotone")
    proj = MonotoneMap.raw(B, A, tuple(fwd))
    try:
        return make_ep(emb, proj)
    except (NotSection, NotDeflation) as e:
        raise NoAdjoint(f"candidate projection fails the ep laws: {e}") from e


def enumerate_ep_pairs(A: FinPoset, B: FinPoset, budget=DEFAULT_BUDGET):
    """All ep-pairs A <-> B by exhausting monotone maps in both directions."""
    fwd_space = B.n ** A.n if A.n else 1
    bwd_space = A.n ** B.n if B.n else 1
    if max(fwd_space, bwd_space) > budget:
        raise BudgetExceeded(max(fwd_space, bwd_space), budget)
    pairs = kernel.ep_pairs(A.n, B.n, A.relmat, B.relmat)
    return [EpPair(MonotoneMap.raw(A, B, e), MonotoneMap.raw(B, A, p))
            for e, p in pairs]
