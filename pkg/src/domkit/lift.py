"""The lift monad over boolean truth values: add-a-bottom, strict maps.

Over a two-valued subobject classifier the partial map classifier of A is A
plus a fresh bottom. Partial maps A -> B are represented throughout as strict
maps L A -> L B, so composition stays ordinary composition. The sieve-valued
generalization lives in ``domkit.presheaf``.
"""

from __future__ import annotations

from typing import Mapping

from domkit.errors import Mismatch, NotDirected, NotStrict
from domkit.poset import (
    DEFAULT_BUDGET,
    FinPoset,
    MonotoneMap,
    directed_lub,
    poset_from_order,
    undirected_witness,
)
from domkit.ep import EpPair, make_ep

BOT = "bot"


def eta_id(x: str) -> str:
    return f"eta({x})"


def support(u: str) -> bool:
    """True iff a lifted element is defined (not the fresh bottom)."""
    return u != BOT


class LiftPoset:
    """A finite poset together with its lift: carrier = {bot} + base.

    Carrier identifiers are ``bot`` and ``eta(x)`` for x in the base; the
    order puts bot below everything and is otherwise inherited.
    """

    __slots__ = ("base", "carrier")

    def __init__(self, base: FinPoset):
        self.base = base
        elements = [BOT] + [eta_id(x) for x in base.elements]

        def leq(u, v):
            if u == BOT:
                return True
            if v == BOT:
                return False
            return base.leq(u[4:-1], v[4:-1])

        self.carrier = poset_from_order(f"lift({base.name})", elements, leq)

    def up(self, x: str) -> str:
        """eta on identifiers: base element to carrier element."""
        self.base.index(x)
        return eta_id(x)

    def down(self, u: str) -> str:
        """Strip eta from a defined carrier element."""
        if u == BOT:
            raise ValueError("bottom has no underlying base element")
        x = u[4:-1]
        self.base.index(x)
        return x

    def __eq__(self, other):
        if not isinstance(other, LiftPoset):
            return NotImplemented
        return self.base == other.base

    def __hash__(self):
        return hash(("lift", self.base))

    def __repr__(self):
        return f"LiftPoset({self.base.name})"


def lift_poset(A: FinPoset) -> LiftPoset:
    return LiftPoset(A)


class StrictMap:
    """A monotone map between lift carriers that preserves bottom."""

    __slots__ = ("dom", "cod", "map")

    def __init__(self, dom: LiftPoset, cod: LiftPoset, underlying: MonotoneMap):
        if underlying.dom != dom.carrier or underlying.cod != cod.carrier:
            raise Mismatch("underlying map does not match the lifted posets")
        if underlying(BOT) != BOT:
            raise NotStrict(underlying(BOT))
        self.dom = dom
        self.cod = cod
        self.map = underlying

    @classmethod
    def from_assignment(cls, dom: LiftPoset, cod: LiftPoset, assignment) -> "StrictMap":
        return cls(dom, cod, MonotoneMap(dom.carrier, cod.carrier, assignment))

    def __call__(self, u: str) -> str:
        return self.map(u)

    def then(self, g: "StrictMap") -> "StrictMap":
        return StrictMap(self.dom, g.cod, self.map.then(g.map))

    @classmethod
    def identity(cls, L: LiftPoset) -> "StrictMap":
        return cls(L, L, MonotoneMap.identity(L.carrier))

    def __eq__(self, other):
        if not isinstance(other, StrictMap):
            return NotImplemented
        return self.map == other.map

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"StrictMap({self.dom.base.name} -> {self.cod.base.name})"


class StrictEpPair:
    """Section/deflation pair of strict maps between lifted posets."""

    __slots__ = ("emb", "proj")

    def __init__(self, emb: StrictMap, proj: StrictMap):
        self.emb = emb
        self.proj = proj

    @property
    def dom(self) -> LiftPoset:
        return self.emb.dom

    @property
    def cod(self) -> LiftPoset:
        return self.emb.cod

    def underlying(self) -> EpPair:
        """The same pair seen as a total ep-pair between the carriers."""
        return EpPair(self.emb.map, self.proj.map)

    def __eq__(self, other):
        if not isinstance(other, StrictEpPair):
            return NotImplemented
        return self.emb == other.emb and self.proj == other.proj

    def __hash__(self):
        return hash((self.emb, self.proj))

    def __repr__(self):
        return f"StrictEpPair({self.dom.base.name} <-> {self.cod.base.name})"


def make_strict_ep(emb: StrictMap, proj: StrictMap) -> StrictEpPair:
    make_ep(emb.map, proj.map)  # section + deflation on the carriers
    return StrictEpPair(emb, proj)


def identity_strict_ep(L: LiftPoset) -> StrictEpPair:
    i = StrictMap.identity(L)
    return StrictEpPair(i, i)


def compose_strict_ep(f: StrictEpPair, g: StrictEpPair) -> StrictEpPair:
    if f.cod != g.dom:
        raise Mismatch("cod of first strict ep-pair differs from dom of second")
    return make_strict_ep(f.emb.then(g.emb), g.proj.then(f.proj))


# --- monad structure ----------------------------------------------------------

def eta(A: FinPoset) -> MonotoneMap:
    """Unit A -> L A. Total, not strict (its domain is not lifted)."""
    L = lift_poset(A)
    return MonotoneMap.raw(A, L.carrier, tuple(L.carrier.index(eta_id(x)) for x in A.elements))


def mu(A: FinPoset) -> StrictMap:
    """Multiplication L(L A) -> L A: collapse one layer of definedness."""
    LA = lift_poset(A)
    LLA = lift_poset(LA.carrier)

    def assign(w):
        return BOT if w == BOT else LLA.down(w)

    return StrictMap.from_assignment(LLA, LA, assign)


def lift_map(f: MonotoneMap) -> StrictMap:
    """Functor action on a total map: bot to bot, eta(x) to eta(f x)."""
    LA, LB = lift_poset(f.dom), lift_poset(f.cod)

    def assign(u):
        return BOT if u == BOT else LB.up(f(LA.down(u)))

    return StrictMap.from_assignment(LA, LB, assign)


def kleisli(f: MonotoneMap) -> StrictMap:
    """Strict extension of f: A -> L B, computed as mu o L f."""
    B = _base_of_lift_carrier(f.cod)
    return lift_map(f).then(mu(B))


def _base_of_lift_carrier(carrier: FinPoset) -> FinPoset:
    """Reconstruct the base poset from a lift carrier (bot plus eta ids)."""
    base_elems = [x[4:-1] for x in carrier.elements if x != BOT]
    return poset_from_order(
        carrier.name[5:-1] if carrier.name.startswith("lift(") else f"base({carrier.name})",
        base_elems,
        lambda x, y: carrier.leq(eta_id(x), eta_id(y)),
    )


def lift_lub(L: LiftPoset, members) -> str:
    """Lub of a directed family in L A: bottom unless some member is defined,
    in which case the lub in A of the defined members."""
    members = list(members)
    for u in members:
        L.carrier.index(u)
    w = undirected_witness(L.carrier, members)
    if w == "empty":
        raise NotDirected(empty=True)
    if w is not None:
        raise NotDirected(*w)
    defined = [L.down(u) for u in members if support(u)]
    if not defined:
        return BOT
    return L.up(directed_lub(L.base, defined))


def lift_ep(e: EpPair) -> StrictEpPair:
    """Functor action on an ep-pair; laws are revalidated."""
    return make_strict_ep(lift_map(e.emb), lift_map(e.proj))


def strict_ep_from_partial(A: FinPoset, B: FinPoset,
                           emb_assign: Mapping[str, str] | None = None,
                           proj_assign: Mapping[str, str] | None = None) -> StrictEpPair:
    """Build a strict ep-pair L A <-> L B from partial assignments.

    Elements missing from an assignment are sent to bottom. With both
    assignments empty and A the empty poset this is the canonical
    everywhere-undefined pair that starts iterated chains at the initial
    object.
    """
    emb_assign = dict(emb_assign or {})
    proj_assign = dict(proj_assign or {})
    LA, LB = lift_poset(A), lift_poset(B)

    def mk(L_from, L_to, table):
        def assign(u):
            if u == BOT:
                return BOT
            x = L_from.down(u)
            return L_to.up(table[x]) if x in table else BOT
        return StrictMap.from_assignment(L_from, L_to, assign)

    return make_strict_ep(mk(LA, LB, emb_assign), mk(LB, LA, proj_assign))


def enumerate_strict_maps(LA: LiftPoset, LB: LiftPoset, budget=DEFAULT_BUDGET):
    """All strict monotone maps L A -> L B."""
    from domkit.poset import enumerate_monotone_maps

    bot_a = LA.carrier.index(BOT)
    bot_b = LB.carrier.index(BOT)
    out = []
    for f in enumerate_monotone_maps(LA.carrier, LB.carrier, budget):
        if f.fwd[bot_a] == bot_b:
            out.append(StrictMap(LA, LB, f))
    return out


def enumerate_strict_ep_pairs(LA: LiftPoset, LB: LiftPoset, budget=DEFAULT_BUDGET):
    """All strict ep-pairs L A <-> L B.

    Every ep-pair between lift carriers is automatically strict: deflation at
    bottom forces emb(bot) = bot, and injectivity of emb then forces
    proj(bot) = bot. The constructor asserts this all the same.
    """
    from domkit.ep import enumerate_ep_pairs

    out = []
    for pair in enumerate_ep_pairs(LA.carrier, LB.carrier, budget):
        out.append(StrictEpPair(StrictMap(LA, LB, pair.emb), StrictMap(LB, LA, pair.proj)))
    return out


def strict_function_space(LA: LiftPoset, LB: LiftPoset, budget=DEFAULT_BUDGET):
    """Poset of all strict maps L A -> L B under the pointwise order."""
    from domkit.poset import map_id, FinPoset

    maps = enumerate_strict_maps(LA, LB, budget)
    elements = [map_id(s.map) for s in maps]
    n = len(maps)
    m = bytearray(n * n)
    for a, f in enumerate(maps):
        for b, g in enumerate(maps):
            if all(LB.carrier.leq_i(u, v) for u, v in zip(f.map.fwd, g.map.fwd)):
                m[a * n + b] = 1
    poset = FinPoset(f"strictfn({LA.base.name},{LB.base.name})", elements, bytes(m))
    return poset, maps
