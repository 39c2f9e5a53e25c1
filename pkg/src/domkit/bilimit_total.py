"""Bilimits of directed diagrams of ep-pairs between finite posets.

The apex is the subposet of coherent tuples of the product, ordered
pointwise. The cone of projections is limiting; the adjoint embeddings form a
colimiting cocone on the same apex. ``verify_universal`` checks the universal
property by brute force: among all monotone maps out of a competing cone's
apex, exactly one projection commutes.
"""

from __future__ import annotations

from domkit.errors import (
    ConeInvalid,
    FunctorialityFailure,
    IndexNotDirected,
    LubUndefined,
    Mismatch,
)
from domkit.poset import (
    DEFAULT_BUDGET,
    FinPoset,
    MonotoneMap,
    directed_lub,
    enumerate_monotone_maps,
    is_directed,
    product_family,
    sub_poset,
    tuple_id,
    undirected_witness,
)
from domkit.ep import EpPair, enumerate_ep_pairs, make_ep


class EpDiagram:
    """A directed index poset, an object per index element, an ep-pair per
    index relation; functorial."""

    __slots__ = ("index", "objects", "edges", "name")

    def __init__(self, index: FinPoset, objects, edges, name="diagram"):
        self.index = index
        self.objects = dict(objects)
        self.edges = dict(edges)
        self.name = name

    def edge(self, i, j) -> EpPair:
        return self.edges[(i, j)]

    def upper_bound(self, i, j):
        """First index element (in element order) above both i and j."""
        for k in self.index.elements:
            if self.index.leq(i, k) and self.index.leq(j, k):
                return k
        raise IndexNotDirected(i, j)


def validate_diagram(D: EpDiagram) -> dict:
    """Directedness of the index plus identity/functoriality of the edges."""
    checks = []

    w = undirected_witness(D.index, D.index.elements)
    if w == "empty":
        checks.append({"property": "index_directed", "ok": False, "witness": "empty index"})
    elif w is not None:
        checks.append({"property": "index_directed", "ok": False, "witness": list(w)})
    else:
        checks.append({"property": "index_directed", "ok": True})

    missing = [[i, j] for i in D.index.elements for j in D.index.elements
               if D.index.leq(i, j) and (i, j) not in D.edges]
    checks.append({"property": "edges_present", "ok": not missing, "witness": missing or None})

    bad_ident = [i for i in D.index.elements
                 if (i, i) in D.edges and not (D.edge(i, i).emb.is_identity()
                                               and D.edge(i, i).proj.is_identity())]
    checks.append({"property": "identity_edges", "ok": not bad_ident,
                   "witness": bad_ident or None})

    bad_functor = None
    if not missing:
        for i in D.index.elements:
            for j in D.index.elements:
                if not D.index.leq(i, j):
                    continue
                for k in D.index.elements:
                    if not D.index.leq(j, k):
                        continue
                    if D.edge(i, j).emb.then(D.edge(j, k).emb) != D.edge(i, k).emb or \
                            D.edge(j, k).proj.then(D.edge(i, j).proj) != D.edge(i, k).proj:
                        bad_functor = [i, j, k]
                        break
                if bad_functor:
                    break
            if bad_functor:
                break
    checks.append({"property": "functorial", "ok": bad_functor is None,
                   "witness": bad_functor})

    return {"ok": all(c["ok"] for c in checks), "checks": checks}


def require_valid(D: EpDiagram):
    report = validate_diagram(D)
    if not report["ok"]:
        first = next(c for c in report["checks"] if not c["ok"])
        if first["property"] == "index_directed":
            w = first["witness"]
            raise IndexNotDirected(*(w if isinstance(w, list) else ("<empty>", "<empty>")))
        if first["property"] == "functorial":
            raise FunctorialityFailure(*first["witness"])
        raise Mismatch(f"invalid diagram: {first}")


class Bilimit:
    """Apex of coherent tuples plus its limiting/colimiting cone."""

    __slots__ = ("diagram", "apex", "cone_proj", "cone_emb", "product", "projections",
                 "inclusion")

    def __init__(self, diagram, apex, cone_proj, cone_emb, product, projections, inclusion):
        self.diagram = diagram
        self.apex = apex
        self.cone_proj = cone_proj
        self.cone_emb = cone_emb
        self.product = product
        self.projections = projections
        self.inclusion = inclusion


def build_bilimit(D: EpDiagram, budget=DEFAULT_BUDGET) -> Bilimit:
    """Carve the apex out of the product and validate the whole cone."""
    require_valid(D)
    idx = list(D.index.elements)
    product, projections = product_family(idx, D.objects, budget)

    rel = [(i, j) for i in idx for j in idx if i != j and D.index.leq(i, j)]

    def coherent(t):
        ti = product.index(t)
        return all(
            D.edge(i, j).proj(projections[j].cod.elements[projections[j].fwd[ti]])
            == projections[i].cod.elements[projections[i].fwd[ti]]
            for i, j in rel
        )

    apex, inclusion = sub_poset(product, coherent)
    apex = apex.rename(f"apex({D.name})")
    inclusion = MonotoneMap.raw(apex, product, inclusion.fwd)

    cone_proj = {i: inclusion.then(projections[i]) for i in idx}

    cone_emb = {}
    for i in idx:
        assign = {}
        for x in D.objects[i].elements:
            comps = []
            for j in idx:
                k = D.upper_bound(i, j)
                comps.append(D.edge(j, k).proj(D.edge(i, k).emb(x)))
            assign[x] = tuple_id(comps)
        cone_emb[i] = MonotoneMap(D.objects[i], apex, assign)

    for i in idx:
        make_ep(cone_emb[i], cone_proj[i])
    for i, j in rel:
        if cone_proj[j].then(D.edge(i, j).proj) != cone_proj[i]:
            raise Mismatch(f"cone naturality fails between {i!r} and {j!r}")

    return Bilimit(D, apex, cone_proj, cone_emb, product, projections, inclusion)


def choice_independence(D: EpDiagram, i, j) -> dict:
    """The composite proj_{j<=k} o emb_{i<=k} is the same for every upper
    bound k of i and j."""
    ubs = [k for k in D.index.elements if D.index.leq(i, k) and D.index.leq(j, k)]
    composites = []
    for k in ubs:
        composites.append((k, D.edge(i, k).emb.then(D.edge(j, k).proj)))
    for k, f in composites:
        for k2, g in composites:
            if f != g:
                x = next(x for x in D.objects[i].elements if f(x) != g(x))
                return {"ok": False, "witness": {"k": k, "k2": k2, "x": x,
                                                 "via_k": f(x), "via_k2": g(x)}}
    return {"ok": True, "upper_bounds": ubs}


def approximation_identity(B: Bilimit) -> dict:
    """Every apex element is the least upper bound of its approximations
    emb_i(proj_i(sigma)), and the family is directed."""
    idx = list(B.diagram.index.elements)
    for sigma in B.apex.elements:
        fam = sorted({B.cone_emb[i](B.cone_proj[i](sigma)) for i in idx},
                     key=B.apex.index)
        if not is_directed(B.apex, fam):
            return {"ok": False, "witness": {"sigma": sigma, "family": fam,
                                             "reason": "not directed"}}
        if not all(B.apex.leq(a, sigma) for a in fam):
            return {"ok": False, "witness": {"sigma": sigma, "family": fam,
                                             "reason": "not below sigma"}}
        # least among all upper bounds, by exhaustion over the apex
        for cand in B.apex.elements:
            if all(B.apex.leq(a, cand) for a in fam) and not B.apex.leq(sigma, cand):
                return {"ok": False, "witness": {"sigma": sigma, "family": fam,
                                                 "competitor": cand}}
    return {"ok": True, "elements": B.apex.n}


class ProjCone:
    """A competing cone: apex H with projection legs onto every object."""

    __slots__ = ("apex", "legs", "adjoints", "name")

    def __init__(self, apex: FinPoset, legs, adjoints, name="cone"):
        self.apex = apex
        self.legs = dict(legs)
        self.adjoints = dict(adjoints)
        self.name = name


def validate_cone(D: EpDiagram, C: ProjCone):
    for i in D.index.elements:
        if i not in C.legs or i not in C.adjoints:
            raise ConeInvalid(f"cone is missing a leg at {i!r}")
        make_ep(C.adjoints[i], C.legs[i])
    for i in D.index.elements:
        for j in D.index.elements:
            if i != j and D.index.leq(i, j):
                if C.legs[j].then(D.edge(i, j).proj) != C.legs[i]:
                    raise ConeInvalid(f"legs are not natural between {i!r} and {j!r}")


def mediating_projection(B: Bilimit, C: ProjCone) -> EpPair:
    """The unique projection from the competing apex, with its adjoint.

    The projection tuples the legs; the embedding is the pointwise directed
    lub of adjoint-after-cone-projection. Directedness of that family is
    asserted, not assumed.
    """
    D = B.diagram
    validate_cone(D, C)
    idx = list(D.index.elements)

    p_assign = {h: tuple_id([C.legs[i](h) for i in idx]) for h in C.apex.elements}
    p_inf = MonotoneMap(C.apex, B.apex, p_assign)

    e_assign = {}
    for sigma in B.apex.elements:
        fam = sorted({C.adjoints[i](B.cone_proj[i](sigma)) for i in idx},
                     key=C.apex.index)
        w = undirected_witness(C.apex, fam)
        if w is not None and w != "empty":
            raise LubUndefined(*w)
        e_assign[sigma] = directed_lub(C.apex, fam)
    e_inf = MonotoneMap(B.apex, C.apex, e_assign)

    pair = make_ep(e_inf, p_inf)
    for i in idx:
        if p_inf.then(B.cone_proj[i]) != C.legs[i]:
            raise ConeInvalid(f"mediating triangle fails at {i!r}")
    return pair


def verify_universal(B: Bilimit, C: ProjCone, budget=DEFAULT_BUDGET) -> dict:
    """Brute-force uniqueness: among all monotone maps from the competing
    apex, exactly one participates in an ep-pair and commutes."""
    D = B.diagram
    idx = list(D.index.elements)
    mediating = mediating_projection(B, C)

    all_maps = enumerate_monotone_maps(C.apex, B.apex, budget)
    projections = {pair.proj for pair in enumerate_ep_pairs(B.apex, C.apex, budget)}

    commuting = [q for q in all_maps
                 if all(q.then(B.cone_proj[i]) == C.legs[i] for i in idx)]
    commuting_projections = [q for q in commuting if q in projections]

    return {
        "exists": len(commuting_projections) >= 1,
        "commutes": mediating.proj in commuting,
        "unique_among_projections": len(commuting_projections) == 1,
        "matches_mediating": commuting_projections == [mediating.proj],
        "monotone_commuting_count": len(commuting),
        "candidate_count": len(all_maps),
        "ok": commuting_projections == [mediating.proj] and mediating.proj in commuting,
    }


def colimit_view(B: Bilimit) -> dict:
    """The embeddings of the cone form a cocone: emb_j o edge_emb = emb_i."""
    D = B.diagram
    for i in D.index.elements:
        for j in D.index.elements:
            if i != j and D.index.leq(i, j):
                if D.edge(i, j).emb.then(B.cone_emb[j]) != B.cone_emb[i]:
                    x = next(x for x in D.objects[i].elements
                             if B.cone_emb[j](D.edge(i, j).emb(x)) != B.cone_emb[i](x))
                    return {"ok": False, "witness": {"i": i, "j": j, "x": x}}
    return {"ok": True}
