"""Bilimits of directed diagrams of strict ep-pairs (partial maps).

The apex collects coherent tuples of lifted elements that are defined at
some index; the all-undefined tuple is excluded. The mediating projection is
built from its termination support (where some leg is defined) plus the total
tuple-of-legs map, mirroring the pullback construction; the embedding is a
pointwise directed lub. Uniqueness is checked among strict projections by
exhaustion.
"""

from __future__ import annotations

from domkit.errors import ConeInvalid, LubUndefined, Mismatch
from domkit.poset import (
    DEFAULT_BUDGET,
    FinPoset,
    MonotoneMap,
    is_directed,
    poset_from_order,
    product_family,
    sub_poset,
    tuple_id,
    undirected_witness,
)
from domkit.lift import (
    BOT,
    StrictEpPair,
    StrictMap,
    enumerate_strict_ep_pairs,
    enumerate_strict_maps,
    kleisli,
    lift_lub,
    lift_map,
    lift_poset,
    make_strict_ep,
    support,
)
from domkit.bilimit_total import EpDiagram, require_valid, validate_diagram

# truth values for termination supports
OMEGA = poset_from_order("omega", ["ff", "tt"], lambda x, y: x == y or x == "ff")


class PartialEpDiagram:
    """Directed index, a finite poset per element, a strict ep-pair between
    the lifts for every index relation; functorial at the strict level."""

    __slots__ = ("index", "objects", "lifts", "edges", "name")

    def __init__(self, index: FinPoset, objects, edges, name="pdiagram"):
        self.index = index
        self.objects = dict(objects)
        self.lifts = {i: lift_poset(P) for i, P in self.objects.items()}
        self.edges = dict(edges)
        self.name = name

    def edge(self, i, j) -> StrictEpPair:
        return self.edges[(i, j)]

    def upper_bound(self, i, j):
        for k in self.index.elements:
            if self.index.leq(i, k) and self.index.leq(j, k):
                return k
        raise Mismatch(f"index elements {i!r}, {j!r} have no upper bound")

    def as_carrier_diagram(self) -> EpDiagram:
        """The same data as a total diagram between the lift carriers."""
        return EpDiagram(
            self.index,
            {i: L.carrier for i, L in self.lifts.items()},
            {ij: pair.underlying() for ij, pair in self.edges.items()},
            name=self.name,
        )


def validate_partial_diagram(D: PartialEpDiagram) -> dict:
    report = validate_diagram(D.as_carrier_diagram())
    strictness = [[i, j] for (i, j), pair in D.edges.items()
                  if pair.emb(BOT) != BOT or pair.proj(BOT) != BOT]
    report["checks"].append({"property": "edges_strict", "ok": not strictness,
                             "witness": strictness or None})
    report["ok"] = report["ok"] and not strictness
    return report


class PartialBilimit:
    """Apex of defined-somewhere coherent tuples plus its strict cone."""

    __slots__ = ("diagram", "apex", "lifted_apex", "cone_proj", "cone_emb",
                 "component", "total_emb")

    def __init__(self, diagram, apex, lifted_apex, cone_proj, cone_emb,
                 component, total_emb):
        self.diagram = diagram
        self.apex = apex
        self.lifted_apex = lifted_apex
        self.cone_proj = cone_proj
        self.cone_emb = cone_emb
        # component[i]: MonotoneMap apex -> carrier of L D_i (sigma to sigma_i)
        self.component = component
        # total_emb[i]: MonotoneMap D_i -> apex (the coherent-tuple map)
        self.total_emb = total_emb


def build_partial_bilimit(D: PartialEpDiagram, budget=DEFAULT_BUDGET) -> PartialBilimit:
    require_valid(D.as_carrier_diagram())
    idx = list(D.index.elements)
    carriers = {i: D.lifts[i].carrier for i in idx}
    product, projections = product_family(idx, carriers, budget)

    rel = [(i, j) for i in idx for j in idx if i != j and D.index.leq(i, j)]

    def qualifies(t):
        ti = product.index(t)
        comps = {i: carriers[i].elements[projections[i].fwd[ti]] for i in idx}
        if not any(support(comps[i]) for i in idx):
            return False
        return all(D.edge(i, j).proj(comps[j]) == comps[i] for i, j in rel)

    apex, inclusion = sub_poset(product, qualifies)
    apex = apex.rename(f"apex({D.name})")
    inclusion = MonotoneMap.raw(apex, product, inclusion.fwd)
    lifted_apex = lift_poset(apex)

    component = {i: inclusion.then(projections[i]) for i in idx}
    cone_proj = {i: kleisli(component[i]) for i in idx}

    total_emb = {}
    cone_emb = {}
    for i in idx:
        assign = {}
        for x in D.objects[i].elements:
            u = D.lifts[i].up(x)
            comps = []
            for j in idx:
                k = D.upper_bound(i, j)
                comps.append(D.edge(j, k).proj(D.edge(i, k).emb(u)))
            assign[x] = tuple_id(comps)
        total_emb[i] = MonotoneMap(D.objects[i], apex, assign)
        cone_emb[i] = lift_map(total_emb[i])

    for i in idx:
        make_strict_ep(cone_emb[i], cone_proj[i])
    for i, j in rel:
        if cone_proj[j].then(D.edge(i, j).proj) != cone_proj[i]:
            raise Mismatch(f"strict cone naturality fails between {i!r} and {j!r}")

    return PartialBilimit(D, apex, lifted_apex, cone_proj, cone_emb,
                          component, total_emb)


def approximation_identity_partial(B: PartialBilimit) -> dict:
    """Each element of the lifted apex is the least upper bound of its
    approximations through the cone, checked against every competitor."""
    idx = list(B.diagram.index.elements)
    carrier = B.lifted_apex.carrier
    for u in carrier.elements:
        fam = sorted({B.cone_emb[i](B.cone_proj[i](u)) for i in idx},
                     key=carrier.index)
        if not is_directed(carrier, fam):
            return {"ok": False, "witness": {"element": u, "family": fam,
                                             "reason": "not directed"}}
        if not all(carrier.leq(a, u) for a in fam):
            return {"ok": False, "witness": {"element": u, "family": fam,
                                             "reason": "not below"}}
        for cand in carrier.elements:
            if all(carrier.leq(a, cand) for a in fam) and not carrier.leq(u, cand):
                return {"ok": False, "witness": {"element": u, "family": fam,
                                                 "competitor": cand}}
    return {"ok": True, "elements": carrier.n}


class PartialProjCone:
    """Competing cone at the strict level: legs L H -> L D_i."""

    __slots__ = ("apex", "lifted_apex", "legs", "adjoints", "name")

    def __init__(self, apex: FinPoset, legs, adjoints, name="pcone"):
        self.apex = apex
        self.lifted_apex = lift_poset(apex)
        self.legs = dict(legs)
        self.adjoints = dict(adjoints)
        self.name = name


def validate_partial_cone(D: PartialEpDiagram, C: PartialProjCone):
    for i in D.index.elements:
        if i not in C.legs or i not in C.adjoints:
            raise ConeInvalid(f"cone is missing a leg at {i!r}")
        make_strict_ep(C.adjoints[i], C.legs[i])
    for i in D.index.elements:
        for j in D.index.elements:
            if i != j and D.index.leq(i, j):
                if C.legs[j].then(D.edge(i, j).proj) != C.legs[i]:
                    raise ConeInvalid(f"legs are not natural between {i!r} and {j!r}")


def termination_support(D: PartialEpDiagram, C: PartialProjCone) -> MonotoneMap:
    """Where the mediating projection will be defined: the pointwise join of
    the supports of the legs, as a strict monotone map L H -> omega."""
    idx = list(D.index.elements)
    assign = {h: "tt" if any(support(C.legs[i](h)) for i in idx) else "ff"
              for h in C.lifted_apex.carrier.elements}
    m = MonotoneMap(C.lifted_apex.carrier, OMEGA, assign)
    assert m(BOT) == "ff"  # strictness (legs are strict maps)
    return m


def mediating_projection_partial(B: PartialBilimit, C: PartialProjCone) -> StrictEpPair:
    """Projection from the support predicate plus the tuple-of-legs map;
    embedding as the pointwise directed lub of adjoints after cone
    projections."""
    D = B.diagram
    validate_partial_cone(D, C)
    idx = list(D.index.elements)
    supp = termination_support(D, C)
    LH, LDinf = C.lifted_apex, B.lifted_apex

    p_assign = {}
    for h in LH.carrier.elements:
        if supp(h) == "ff":
            p_assign[h] = BOT
        else:
            # defined somewhere: the tuple of legs is a legitimate apex element
            p_assign[h] = LDinf.up(tuple_id([C.legs[i](h) for i in idx]))
    p_inf = StrictMap.from_assignment(LH, LDinf, p_assign)

    e_assign = {}
    for u in LDinf.carrier.elements:
        fam = sorted({C.adjoints[i](B.cone_proj[i](u)) for i in idx},
                     key=LH.carrier.index)
        w = undirected_witness(LH.carrier, fam)
        if w is not None and w != "empty":
            raise LubUndefined(*w)
        e_assign[u] = lift_lub(LH, fam)
    e_inf = StrictMap.from_assignment(LDinf, LH, e_assign)

    pair = make_strict_ep(e_inf, p_inf)
    for i in idx:
        if p_inf.then(B.cone_proj[i]) != C.legs[i]:
            raise ConeInvalid(f"mediating triangle fails at {i!r}")
    return pair


def support_of_e_infinity(B: PartialBilimit, C: PartialProjCone) -> dict:
    """The embedding half is defined exactly on defined elements: its
    termination support is the whole apex."""
    pair = mediating_projection_partial(B, C)
    for u in B.lifted_apex.carrier.elements:
        if support(pair.emb(u)) != support(u):
            return {"ok": False, "witness": {"element": u, "image": pair.emb(u)}}
    return {"ok": True}


def section_chase(B: PartialBilimit, C: PartialProjCone) -> dict:
    """Totalized section identity: chasing a defined tuple through the
    embedding and back through the tuple-of-legs map returns every
    component unchanged."""
    D = B.diagram
    idx = list(D.index.elements)
    pair = mediating_projection_partial(B, C)
    for sigma in B.apex.elements:
        u = pair.emb(B.lifted_apex.up(sigma))
        if not support(u):
            return {"ok": False, "witness": {"sigma": sigma, "reason": "embedding undefined"}}
        legs_tuple = [C.legs[i](u) for i in idx]
        comps = [B.component[i](sigma) for i in idx]
        if legs_tuple != comps:
            return {"ok": False, "witness": {"sigma": sigma, "chase": legs_tuple,
                                             "direct": comps}}
    return {"ok": True}


def verify_universal_partial(B: PartialBilimit, C: PartialProjCone,
                             budget=DEFAULT_BUDGET) -> dict:
    """Among all strict monotone maps L H -> L D_infinity, exactly one strict
    projection commutes with every triangle; uniqueness among arbitrary
    strict commuting maps is reported as data, not asserted."""
    D = B.diagram
    idx = list(D.index.elements)
    mediating = mediating_projection_partial(B, C)

    all_strict = enumerate_strict_maps(C.lifted_apex, B.lifted_apex, budget)
    projections = {pair.proj
                   for pair in enumerate_strict_ep_pairs(B.lifted_apex, C.lifted_apex, budget)}

    commuting = [q for q in all_strict
                 if all(q.then(B.cone_proj[i]) == C.legs[i] for i in idx)]
    commuting_projections = [q for q in commuting if q in projections]

    return {
        "exists": len(commuting_projections) >= 1,
        "commutes": mediating.proj in commuting,
        "unique_among_strict_projections": len(commuting_projections) == 1,
        "matches_mediating": commuting_projections == [mediating.proj],
        "strict_commuting_count": len(commuting),
        "candidate_count": len(all_strict),
        "ok": commuting_projections == [mediating.proj] and mediating.proj in commuting,
    }


def colimit_view_partial(B: PartialBilimit) -> dict:
    """Cocone laws for the strict embeddings."""
    D = B.diagram
    for i in D.index.elements:
        for j in D.index.elements:
            if i != j and D.index.leq(i, j):
                if D.edge(i, j).emb.then(B.cone_emb[j]) != B.cone_emb[i]:
                    return {"ok": False, "witness": {"i": i, "j": j}}
    return {"ok": True}
