"""Predomains internal to presheaves over a finite base poset.

Truth values are sieves (downward-closed subsets below a base point), so
definedness becomes a degree: a lifted element carries a support sieve plus a
compatible family over it, witnessing partiality over regions of the base
rather than a yes/no bit. Everything the boolean modules do is rerun
stagewise here, and collapses back to them over a one-point base.

Morphisms of the internal partial-map category are Kleisli maps: strict
extensions mu o L f of natural maps f. Stagewise bottom preservation alone is
weaker (a natural, stagewise-strict map may raise the support of a partial
element at a later stage) and would break the classifier arguments, so
"strict projection" below always means a Kleisli map with a Kleisli adjoint.
Over a one-point base the two notions coincide.
"""

from __future__ import annotations

import itertools

from domkit import kernel
from domkit.errors import BudgetExceeded, Mismatch
from domkit.poset import (
    DEFAULT_BUDGET,
    FinPoset,
    MonotoneMap,
    poset_from_order,
)

STAGE_BUDGET = 200  # stage posets multiply fast; fixtures stay far below


def sieve_id(members) -> str:
    return "{" + ",".join(members) + "}"


def family_id(items) -> str:
    return "<" + ";".join(f"{q}:{v}" for q, v in items) + ">"


class PresheafPoset:
    """A finite poset per base element, with monotone restriction maps."""

    __slots__ = ("base", "stages", "restrictions", "name")

    def __init__(self, base: FinPoset, stages, restrictions, name="presheaf"):
        self.base = base
        self.stages = dict(stages)
        self.restrictions = dict(restrictions)
        self.name = name
        self._validate()

    def _validate(self):
        for p in self.base.elements:
            if p not in self.stages:
                raise Mismatch(f"missing stage at {p!r}")
        for p in self.base.elements:
            for q in self.base.down_set(p):
                r = self.restrictions.get((p, q))
                if r is None:
                    raise Mismatch(f"missing restriction {p!r} -> {q!r}")
                if r.dom != self.stages[p] or r.cod != self.stages[q]:
                    raise Mismatch(f"restriction {p!r} -> {q!r} connects wrong stages")
        for p in self.base.elements:
            if not self.restrictions[(p, p)].is_identity():
                raise Mismatch(f"restriction at {p!r} is not the identity")
            for q in self.base.down_set(p):
                for r in self.base.down_set(q):
                    lhs = self.restrictions[(p, q)].then(self.restrictions[(q, r)])
                    if lhs != self.restrictions[(p, r)]:
                        raise Mismatch(f"restrictions do not compose at {p!r}>={q!r}>={r!r}")

    def stage(self, p) -> FinPoset:
        return self.stages[p]

    def restrict(self, p, q) -> MonotoneMap:
        return self.restrictions[(p, q)]

    @property
    def n(self) -> int:
        """Total element count across stages (a size proxy)."""
        return sum(P.n for P in self.stages.values())

    def __eq__(self, other):
        if not isinstance(other, PresheafPoset):
            return NotImplemented
        return (self.base == other.base and self.stages == other.stages
                and self.restrictions == other.restrictions)

    def __hash__(self):
        return hash((self.base, tuple(sorted((k, v) for k, v in self.stages.items()))))

    def __repr__(self):
        return f"PresheafPoset({self.name!r} over {self.base.name})"


def constant_presheaf(base: FinPoset, P: FinPoset, name=None) -> PresheafPoset:
    stages = {p: P for p in base.elements}
    restrictions = {(p, q): MonotoneMap.identity(P)
                    for p in base.elements for q in base.down_set(p)}
    return PresheafPoset(base, stages, restrictions, name or f"const({P.name})")


class InternalMap:
    """A natural transformation with monotone components."""

    __slots__ = ("dom", "cod", "components")

    def __init__(self, dom: PresheafPoset, cod: PresheafPoset, components):
        self.dom = dom
        self.cod = cod
        self.components = dict(components)
        for p in dom.base.elements:
            c = self.components[p]
            if c.dom != dom.stages[p] or c.cod != cod.stages[p]:
                raise Mismatch(f"component at {p!r} connects wrong stages")
        for p in dom.base.elements:
            for q in dom.base.down_set(p):
                if self.components[p].then(cod.restrict(p, q)) != \
                        dom.restrict(p, q).then(self.components[q]):
                    raise Mismatch(f"naturality square fails for {p!r} -> {q!r}")

    @classmethod
    def raw(cls, dom, cod, components):
        m = object.__new__(cls)
        m.dom = dom
        m.cod = cod
        m.components = dict(components)
        return m

    @classmethod
    def identity(cls, A: PresheafPoset) -> "InternalMap":
        return cls.raw(A, A, {p: MonotoneMap.identity(A.stages[p])
                              for p in A.base.elements})

    def at(self, p) -> MonotoneMap:
        return self.components[p]

    def then(self, g: "InternalMap") -> "InternalMap":
        return InternalMap.raw(self.dom, g.cod,
                               {p: self.components[p].then(g.components[p])
                                for p in self.dom.base.elements})

    def is_identity(self) -> bool:
        return all(c.is_identity() for c in self.components.values())

    def __eq__(self, other):
        if not isinstance(other, InternalMap):
            return NotImplemented
        return self.components == other.components and self.dom == other.dom \
            and self.cod == other.cod

    def __hash__(self):
        return hash(tuple(sorted((p, c) for p, c in self.components.items())))

    def __repr__(self):
        return f"InternalMap({self.dom.name} -> {self.cod.name})"


# --- the subobject classifier and the internal lift ---------------------------

def sieves_at(base: FinPoset, p):
    """All downward-closed subsets of the lower cone of p, smallest first."""
    cone = base.down_set(p)
    out = []
    for bits in itertools.product([0, 1], repeat=len(cone)):
        S = [q for q, b in zip(cone, bits) if b]
        sset = set(S)
        if all(r in sset for q in S for r in base.down_set(q)):
            out.append(tuple(S))
    out.sort(key=lambda S: (len(S), tuple(base.index(q) for q in S)))
    return out


def omega_presheaf(base: FinPoset) -> PresheafPoset:
    """Stage p: sieves at p ordered by inclusion; restriction intersects."""
    stages = {}
    decode = {}
    for p in base.elements:
        sieves = sieves_at(base, p)
        decode[p] = {sieve_id(S): frozenset(S) for S in sieves}
        stages[p] = poset_from_order(
            f"omega({p})", [sieve_id(S) for S in sieves],
            lambda x, y, p=p: decode[p][x] <= decode[p][y])
    restrictions = {}
    for p in base.elements:
        for q in base.down_set(p):
            lower = frozenset(base.down_set(q))
            restrictions[(p, q)] = MonotoneMap(
                stages[p], stages[q],
                lambda s, p=p, lower=lower: sieve_id(
                    sorted(decode[p][s] & lower, key=base.index)))
    return PresheafPoset(base, stages, restrictions, name="omega")


class InternalLift:
    """The lift of an internal poset: stagewise supports plus families.

    ``presheaf`` is the lifted object; ``support``/``family`` decode stage
    elements; ``bottom`` is the empty-support element at each stage.
    """

    __slots__ = ("source", "presheaf", "support", "family", "bottom", "encode")

    def __init__(self, source, presheaf, support, family, bottom, encode):
        self.source = source
        self.presheaf = presheaf
        self.support = support    # (p, elem) -> frozenset of base elements
        self.family = family      # (p, elem) -> dict q -> source element
        self.bottom = bottom      # p -> elem
        self.encode = encode      # (p, sieve tuple, family tuple) -> elem

    def up(self, p, x) -> str:
        """eta at stage p."""
        cone = sorted(self.source.base.down_set(p), key=self.source.base.index)
        fam = tuple((q, self.source.restrict(p, q)(x)) for q in cone)
        return self.encode[(p, tuple(q for q, _ in fam), fam)]

    def full_support(self, p, u) -> bool:
        return self.support[(p, u)] == frozenset(self.source.base.down_set(p))


def internal_lift(A: PresheafPoset, budget=STAGE_BUDGET) -> InternalLift:
    """Partial map classifier of A, computed stagewise.

    Stage p holds every pair (sieve S at p, compatible family over S);
    the order compares supports by inclusion and families pointwise."""
    base = A.base
    stages = {}
    restrictions = {}
    support = {}
    family = {}
    bottom = {}
    encode = {}
    elems_by_stage = {}
    for p in base.elements:
        elems = []
        for S in sieves_at(base, p):
            members = sorted(S, key=base.index)
            pools = [A.stages[q].elements for q in members]
            for combo in itertools.product(*pools):
                fam = dict(zip(members, combo))
                ok = all(A.restrict(q, r)(fam[q]) == fam[r]
                         for q in members for r in base.down_set(q))
                if not ok:
                    continue
                eid = family_id(fam.items())
                elems.append(eid)
                support[(p, eid)] = frozenset(S)
                family[(p, eid)] = fam
                encode[(p, tuple(members), tuple(fam.items()))] = eid
                if not S:
                    bottom[p] = eid
        if len(elems) > budget:
            raise BudgetExceeded(len(elems), budget)
        elems_by_stage[p] = elems

        def leq(u, v, p=p):
            su, sv = support[(p, u)], support[(p, v)]
            if not su <= sv:
                return False
            fu, fv = family[(p, u)], family[(p, v)]
            return all(A.stages[q].leq(fu[q], fv[q]) for q in su)

        stages[p] = poset_from_order(f"lift({A.name})@{p}", elems, leq)

    for p in base.elements:
        for q in base.down_set(p):
            lower = frozenset(base.down_set(q))

            def res(u, p=p, q=q, lower=lower):
                S = sorted(support[(p, u)] & lower, key=base.index)
                fam = family[(p, u)]
                return encode[(q, tuple(S), tuple((r, fam[r]) for r in S))]

            restrictions[(p, q)] = MonotoneMap(stages[p], stages[q], res)

    lifted = PresheafPoset(base, stages, restrictions, name=f"lift({A.name})")
    return InternalLift(A, lifted, support, family, bottom, encode)


def internal_eta(L: InternalLift) -> InternalMap:
    """Unit A -> L A: full support, restricted family."""
    A = L.source
    return InternalMap(A, L.presheaf,
                       {p: MonotoneMap(A.stages[p], L.presheaf.stages[p],
                                       lambda x, p=p: L.up(p, x))
                        for p in A.base.elements})


def internal_mu(L: InternalLift, LL: InternalLift) -> InternalMap:
    """Multiplication L(L A) -> L A: keep the points whose inner element is
    defined there, and evaluate the inner family on the spot."""
    A = L.source
    base = A.base

    def mu_at(p):
        def go(w):
            S = LL.support[(p, w)]
            fam = LL.family[(p, w)]  # q -> element of L A at stage q
            S2 = sorted((q for q in S if q in L.support[(q, fam[q])]),
                        key=base.index)
            items = tuple((q, L.family[(q, fam[q])][q]) for q in S2)
            return L.encode[(p, tuple(S2), items)]
        return MonotoneMap(LL.presheaf.stages[p], L.presheaf.stages[p], go)

    return InternalMap(LL.presheaf, L.presheaf,
                       {p: mu_at(p) for p in base.elements})


def internal_lift_map(f: InternalMap, LA: InternalLift, LB: InternalLift) -> InternalMap:
    """Functor action: keep the support, push the family through f."""
    base = f.dom.base

    def at(p):
        def go(u):
            S = sorted(LA.support[(p, u)], key=base.index)
            fam = LA.family[(p, u)]
            items = tuple((q, f.at(q)(fam[q])) for q in S)
            return LB.encode[(p, tuple(S), items)]
        return MonotoneMap(LA.presheaf.stages[p], LB.presheaf.stages[p], go)

    return InternalMap(LA.presheaf, LB.presheaf,
                       {p: at(p) for p in base.elements})


def internal_kleisli(f: InternalMap, LA: InternalLift, LB: InternalLift) -> InternalMap:
    """Strict extension of f: A -> L B; morphisms of the internal partial
    category are exactly the maps of this shape."""
    base = f.dom.base

    def at(p):
        def go(u):
            S = LA.support[(p, u)]
            fam = LA.family[(p, u)]
            S2 = []
            items = []
            for q in sorted(S, key=base.index):
                v = f.at(q)(fam[q])  # element of L B at stage q
                if q in LB.support[(q, v)]:
                    S2.append(q)
                    items.append((q, LB.family[(q, v)][q]))
            return LB.encode[(p, tuple(S2), tuple(items))]
        return MonotoneMap(LA.presheaf.stages[p], LB.presheaf.stages[p], go)

    return InternalMap(LA.presheaf, LB.presheaf,
                       {p: at(p) for p in base.elements})


def eta_restriction(h: InternalMap, LA: InternalLift) -> InternalMap:
    """h o eta: the partial-map core of a candidate morphism L A -> L B."""
    A = LA.source
    return InternalMap.raw(A, h.cod,
                           {p: MonotoneMap.raw(
                               A.stages[p], h.cod.stages[p],
                               tuple(h.at(p).fwd[LA.presheaf.stages[p].index(LA.up(p, x))]
                                     for x in A.stages[p].elements))
                            for p in A.base.elements})


def is_kleisli(h: InternalMap, LA: InternalLift, LB: InternalLift) -> bool:
    """True iff h is the strict extension of its own eta-restriction."""
    return h == internal_kleisli(eta_restriction(h, LA), LA, LB)


class InternalStrictEpPair:
    """Section/deflation pair of Kleisli maps between internal lifts."""

    __slots__ = ("emb", "proj", "dom_lift", "cod_lift")

    def __init__(self, emb: InternalMap, proj: InternalMap,
                 dom_lift: InternalLift, cod_lift: InternalLift):
        self.emb = emb
        self.proj = proj
        self.dom_lift = dom_lift
        self.cod_lift = cod_lift

    def __eq__(self, other):
        if not isinstance(other, InternalStrictEpPair):
            return NotImplemented
        return self.emb == other.emb and self.proj == other.proj

    def __hash__(self):
        return hash((self.emb, self.proj))


def make_internal_strict_ep(emb, proj, dom_lift, cod_lift) -> InternalStrictEpPair:
    base = dom_lift.source.base
    for p in base.elements:
        if not emb.at(p).then(proj.at(p)).is_identity():
            raise Mismatch(f"section law fails at stage {p!r}")
        back = proj.at(p).then(emb.at(p))
        for j, y in enumerate(cod_lift.presheaf.stages[p].elements):
            if not cod_lift.presheaf.stages[p].leq_i(back.fwd[j], j):
                raise Mismatch(f"deflation law fails at stage {p!r} on {y!r}")
    if not (is_kleisli(emb, dom_lift, cod_lift) and is_kleisli(proj, cod_lift, dom_lift)):
        raise Mismatch("ep components must be Kleisli maps")
    return InternalStrictEpPair(emb, proj, dom_lift, cod_lift)


def identity_internal_ep(L: InternalLift) -> InternalStrictEpPair:
    i = InternalMap.identity(L.presheaf)
    return InternalStrictEpPair(i, i, L, L)


def compose_internal_ep(f: InternalStrictEpPair, g: InternalStrictEpPair):
    return make_internal_strict_ep(f.emb.then(g.emb), g.proj.then(f.proj),
                                   f.dom_lift, g.cod_lift)


def enumerate_natural_maps(A: PresheafPoset, B: PresheafPoset, budget=DEFAULT_BUDGET):
    """All natural transformations A -> B, by stagewise DFS filtered against
    the naturality squares of the already placed stages."""
    base = A.base
    order = list(base.elements)
    per_stage = []
    total = 1
    for p in order:
        cands = kernel.monotone_maps(A.stages[p].n, B.stages[p].n,
                                     A.stages[p].relmat, B.stages[p].relmat)
        per_stage.append(cands)
        total *= max(len(cands), 1)
        if total > budget:
            raise BudgetExceeded(total, budget)

    out = []
    chosen = {}

    def natural_with(p, fwd):
        cp = MonotoneMap.raw(A.stages[p], B.stages[p], fwd)
        for q, cq in chosen.items():
            if base.leq(q, p):
                if cp.then(B.restrict(p, q)) != A.restrict(p, q).then(cq):
                    return None
            elif base.leq(p, q):
                if cq.then(B.restrict(q, p)) != A.restrict(q, p).then(cp):
                    return None
        return cp

    def place(k):
        if k == len(order):
            out.append(InternalMap.raw(A, B, dict(chosen)))
            return
        p = order[k]
        for fwd in per_stage[k]:
            cp = natural_with(p, fwd)
            if cp is not None:
                chosen[p] = cp
                place(k + 1)
                del chosen[p]

    place(0)
    return out


def enumerate_internal_kleisli_maps(LA: InternalLift, LB: InternalLift,
                                    budget=DEFAULT_BUDGET):
    """All morphisms L A -> L B of the internal partial category."""
    seen = set()
    out = []
    for f in enumerate_natural_maps(LA.source, LB.presheaf, budget):
        h = internal_kleisli(f, LA, LB)
        if h not in seen:
            seen.add(h)
            out.append(h)
    return out


def enumerate_internal_strict_eps(LA: InternalLift, LB: InternalLift,
                                  budget=DEFAULT_BUDGET):
    embs = enumerate_internal_kleisli_maps(LA, LB, budget)
    projs = enumerate_internal_kleisli_maps(LB, LA, budget)
    out = []
    for e in embs:
        for p in projs:
            try:
                out.append(make_internal_strict_ep(e, p, LA, LB))
            except Mismatch:
                pass
    return out


def boolean_collapse_iso(L: InternalLift):
    """Over a one-point base the internal lift is the boolean lift: build the
    order isomorphism between the stage and the add-a-bottom carrier and
    check both composites are identities."""
    from domkit.lift import BOT, lift_poset

    base = L.source.base
    if base.n != 1:
        raise Mismatch("collapse isomorphism needs a one-point base")
    pt = base.elements[0]
    stage = L.presheaf.stages[pt]
    boolean = lift_poset(L.source.stages[pt])

    fwd = MonotoneMap(stage, boolean.carrier,
                      lambda u: BOT if u == L.bottom[pt]
                      else boolean.up(L.family[(pt, u)][pt]))
    bwd = MonotoneMap(boolean.carrier, stage,
                      lambda v: L.bottom[pt] if v == BOT
                      else L.up(pt, boolean.down(v)))
    if not (fwd.then(bwd).is_identity() and bwd.then(fwd).is_identity()):
        raise Mismatch("collapse maps are not mutually inverse")
    return fwd, bwd
