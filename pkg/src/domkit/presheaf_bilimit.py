"""Stagewise rerun of the partial bilimit construction inside presheaves.

Membership of the apex reads the defined-somewhere condition per stage: a
tuple qualifies at p iff some component has the maximal sieve as support (the
forcing semantics of an existential over the external index set, under
trivial coverage). Stability of that condition under restriction is verified,
not assumed.
"""

from __future__ import annotations

import itertools

from domkit.errors import ConeInvalid, LubUndefined, Mismatch
from domkit.poset import (
    DEFAULT_BUDGET,
    FinPoset,
    MonotoneMap,
    directed_lub,
    is_directed,
    poset_from_order,
    tuple_id,
    undirected_witness,
)
from domkit.presheaf import (
    InternalLift,
    InternalMap,
    InternalStrictEpPair,
    PresheafPoset,
    enumerate_internal_kleisli_maps,
    enumerate_internal_strict_eps,
    internal_kleisli,
    internal_lift,
    internal_lift_map,
    make_internal_strict_ep,
    omega_presheaf,
    sieve_id,
)


class InternalDiagram:
    """Directed index; an internal poset per element; a Kleisli ep-pair
    between the lifts per index relation."""

    __slots__ = ("index", "objects", "lifts", "edges", "name")

    def __init__(self, index: FinPoset, objects, lifts, edges, name="idiagram"):
        self.index = index
        self.objects = dict(objects)
        self.lifts = dict(lifts)
        self.edges = dict(edges)
        self.name = name

    def edge(self, i, j) -> InternalStrictEpPair:
        return self.edges[(i, j)]

    def upper_bound(self, i, j):
        for k in self.index.elements:
            if self.index.leq(i, k) and self.index.leq(j, k):
                return k
        raise Mismatch(f"index elements {i!r}, {j!r} have no upper bound")


def validate_internal_diagram(D: InternalDiagram) -> dict:
    checks = []
    w = undirected_witness(D.index, D.index.elements)
    checks.append({"property": "index_directed", "ok": w is None,
                   "witness": None if w is None else list(w) if w != "empty" else "empty"})
    bad_ident = [i for i in D.index.elements
                 if not (D.edge(i, i).emb.is_identity() and D.edge(i, i).proj.is_identity())]
    checks.append({"property": "identity_edges", "ok": not bad_ident,
                   "witness": bad_ident or None})
    bad = None
    for i in D.index.elements:
        for j in D.index.elements:
            if not D.index.leq(i, j):
                continue
            for k in D.index.elements:
                if not D.index.leq(j, k):
                    continue
                if D.edge(i, j).emb.then(D.edge(j, k).emb) != D.edge(i, k).emb or \
                        D.edge(j, k).proj.then(D.edge(i, j).proj) != D.edge(i, k).proj:
                    bad = [i, j, k]
    checks.append({"property": "functorial", "ok": bad is None, "witness": bad})
    return {"ok": all(c["ok"] for c in checks), "checks": checks}


class InternalBilimit:
    __slots__ = ("diagram", "apex", "apex_lift", "cone_proj", "cone_emb",
                 "component", "total_emb")

    def __init__(self, diagram, apex, apex_lift, cone_proj, cone_emb, component,
                 total_emb):
        self.diagram = diagram
        self.apex = apex            # PresheafPoset of qualifying tuples
        self.apex_lift = apex_lift  # InternalLift over it
        self.cone_proj = cone_proj  # i -> InternalMap L apex -> L D_i
        self.cone_emb = cone_emb    # i -> InternalMap L D_i -> L apex
        self.component = component  # i -> InternalMap apex -> L D_i
        self.total_emb = total_emb  # i -> InternalMap D_i -> apex


def build_internal_bilimit(D: InternalDiagram) -> InternalBilimit:
    rep = validate_internal_diagram(D)
    if not rep["ok"]:
        raise Mismatch(f"invalid internal diagram: {rep}")
    base = next(iter(D.objects.values())).base
    idx = list(D.index.elements)
    rel = [(i, j) for i in idx for j in idx if i != j and D.index.leq(i, j)]

    stages = {}
    for p in base.elements:
        pools = [D.lifts[i].presheaf.stages[p].elements for i in idx]
        elems = []
        for combo in itertools.product(*pools):
            t = dict(zip(idx, combo))
            if not any(D.lifts[i].full_support(p, t[i]) for i in idx):
                continue
            if not all(D.edge(i, j).proj.at(p)(t[j]) == t[i] for i, j in rel):
                continue
            elems.append(tuple_id(combo))
        decode = {tuple_id(c): c for c in itertools.product(*pools)}

        def leq(u, v, p=p, decode=decode):
            cu, cv = decode[u], decode[v]
            return all(D.lifts[i].presheaf.stages[p].leq(a, b)
                       for i, a, b in zip(idx, cu, cv))

        stages[p] = poset_from_order(f"apex({D.name})@{p}", elems, leq)

    restrictions = {}
    for p in base.elements:
        for q in base.down_set(p):
            def res(u, p=p, q=q):
                comps = _components(stages[p], u, len(idx))
                out = [D.lifts[i].presheaf.restrict(p, q)(c)
                       for i, c in zip(idx, comps)]
                v = tuple_id(out)
                if v not in stages[q]:
                    raise Mismatch(
                        f"defined-somewhere condition is not stable: {u!r} at {p!r}")
                return v
            restrictions[(p, q)] = MonotoneMap(stages[p], stages[q], res)

    apex = PresheafPoset(base, stages, restrictions, name=f"apex({D.name})")
    apex_lift = internal_lift(apex)

    component = {}
    for i in idx:
        pos = idx.index(i)
        component[i] = InternalMap(
            apex, D.lifts[i].presheaf,
            {p: MonotoneMap(stages[p], D.lifts[i].presheaf.stages[p],
                            lambda u, p=p, pos=pos: _components(stages[p], u, len(idx))[pos])
             for p in base.elements})
    cone_proj = {i: internal_kleisli(component[i], apex_lift, D.lifts[i]) for i in idx}

    total_emb = {}
    cone_emb = {}
    for i in idx:
        comps = {}
        for p in base.elements:
            def go(x, i=i, p=p):
                u = D.lifts[i].up(p, x)
                out = []
                for j in idx:
                    k = D.upper_bound(i, j)
                    out.append(D.edge(j, k).proj.at(p)(D.edge(i, k).emb.at(p)(u)))
                return tuple_id(out)
            comps[p] = MonotoneMap(D.objects[i].stages[p], stages[p], go)
        total_emb[i] = InternalMap(D.objects[i], apex, comps)
        cone_emb[i] = internal_lift_map(total_emb[i], D.lifts[i], apex_lift)

    for i in idx:
        make_internal_strict_ep(cone_emb[i], cone_proj[i], D.lifts[i], apex_lift)
    for i, j in rel:
        if cone_proj[j].then(D.edge(i, j).proj) != cone_proj[i]:
            raise Mismatch(f"internal cone naturality fails between {i!r} and {j!r}")

    return InternalBilimit(D, apex, apex_lift, cone_proj, cone_emb, component,
                           total_emb)


def _components(stage: FinPoset, u: str, k: int):
    """Split a tuple id back into its k component ids.

    Components are family ids '<...;...>' which never contain a top-level
    comma, so splitting on commas outside angle brackets is unambiguous."""
    body = u[1:-1]
    out = []
    depth = 0
    cur = []
    for ch in body:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    assert len(out) == k
    return out


def internal_approximation_identity(B: InternalBilimit) -> dict:
    idx = list(B.diagram.index.elements)
    base = B.apex.base
    for p in base.elements:
        stage = B.apex_lift.presheaf.stages[p]
        for u in stage.elements:
            fam = sorted({B.cone_emb[i].at(p)(B.cone_proj[i].at(p)(u)) for i in idx},
                         key=stage.index)
            if not is_directed(stage, fam):
                return {"ok": False, "witness": {"stage": p, "element": u,
                                                 "reason": "not directed"}}
            if not all(stage.leq(a, u) for a in fam):
                return {"ok": False, "witness": {"stage": p, "element": u,
                                                 "reason": "not below"}}
            for cand in stage.elements:
                if all(stage.leq(a, cand) for a in fam) and not stage.leq(u, cand):
                    return {"ok": False, "witness": {"stage": p, "element": u,
                                                     "competitor": cand}}
    return {"ok": True}


class InternalProjCone:
    __slots__ = ("apex", "apex_lift", "legs", "adjoints", "name")

    def __init__(self, apex: PresheafPoset, apex_lift: InternalLift, legs,
                 adjoints, name="icone"):
        self.apex = apex
        self.apex_lift = apex_lift
        self.legs = dict(legs)
        self.adjoints = dict(adjoints)
        self.name = name


def validate_internal_cone(D: InternalDiagram, C: InternalProjCone):
    for i in D.index.elements:
        if i not in C.legs or i not in C.adjoints:
            raise ConeInvalid(f"cone is missing a leg at {i!r}")
        make_internal_strict_ep(C.adjoints[i], C.legs[i], D.lifts[i], C.apex_lift)
    for i in D.index.elements:
        for j in D.index.elements:
            if i != j and D.index.leq(i, j):
                if C.legs[j].then(D.edge(i, j).proj) != C.legs[i]:
                    raise ConeInvalid(f"legs are not natural between {i!r} and {j!r}")


def internal_termination_support(D: InternalDiagram, C: InternalProjCone) -> InternalMap:
    """Sieve-valued join of the supports of the legs."""
    base = C.apex.base
    omega = omega_presheaf(base)
    idx = list(D.index.elements)

    def at(p):
        def go(u):
            s = frozenset()
            for i in idx:
                s |= D.lifts[i].support[(p, C.legs[i].at(p)(u))]
            return sieve_id(sorted(s, key=base.index))
        return MonotoneMap(C.apex_lift.presheaf.stages[p], omega.stages[p], go)

    return InternalMap(C.apex_lift.presheaf, omega,
                       {p: at(p) for p in base.elements})


def internal_mediating_projection(B: InternalBilimit, C: InternalProjCone):
    """Kleisli projection from the support sieve plus the tuple of legs;
    embedding as the stagewise lub of adjoints after cone projections."""
    D = B.diagram
    validate_internal_cone(D, C)
    idx = list(D.index.elements)
    base = B.apex.base
    LH, LDinf = C.apex_lift, B.apex_lift

    def p_at(p):
        def go(u):
            s = frozenset()
            for i in idx:
                s |= D.lifts[i].support[(p, C.legs[i].at(p)(u))]
            S = sorted(s, key=base.index)
            items = []
            for q in S:
                uq = LH.presheaf.restrict(p, q)(u)
                items.append((q, tuple_id([C.legs[i].at(q)(uq) for i in idx])))
            return LDinf.encode[(p, tuple(S), tuple(items))]
        return MonotoneMap(LH.presheaf.stages[p], LDinf.presheaf.stages[p], go)

    p_inf = InternalMap(LH.presheaf, LDinf.presheaf,
                        {p: p_at(p) for p in base.elements})

    def e_at(p):
        stage = LH.presheaf.stages[p]

        def go(u):
            fam = sorted({C.adjoints[i].at(p)(B.cone_proj[i].at(p)(u)) for i in idx},
                         key=stage.index)
            w = undirected_witness(stage, fam)
            if w is not None and w != "empty":
                raise LubUndefined(*w)
            return directed_lub(stage, fam)
        return MonotoneMap(LDinf.presheaf.stages[p], stage, go)

    e_inf = InternalMap(LDinf.presheaf, LH.presheaf,
                        {p: e_at(p) for p in base.elements})

    pair = make_internal_strict_ep(e_inf, p_inf, LDinf, LH)
    for i in idx:
        if p_inf.then(B.cone_proj[i]) != C.legs[i]:
            raise ConeInvalid(f"internal mediating triangle fails at {i!r}")
    return pair


def internal_verify_universal(B: InternalBilimit, C: InternalProjCone,
                              budget=DEFAULT_BUDGET) -> dict:
    """Exactly one Kleisli projection commutes; counts of arbitrary Kleisli
    commuting maps are reported alongside."""
    D = B.diagram
    idx = list(D.index.elements)
    mediating = internal_mediating_projection(B, C)

    candidates = enumerate_internal_kleisli_maps(C.apex_lift, B.apex_lift, budget)
    projections = {pair.proj
                   for pair in enumerate_internal_strict_eps(B.apex_lift, C.apex_lift,
                                                             budget)}
    commuting = [q for q in candidates
                 if all(q.then(B.cone_proj[i]) == C.legs[i] for i in idx)]
    commuting_projections = [q for q in commuting if q in projections]
    return {
        "exists": len(commuting_projections) >= 1,
        "commutes": mediating.proj in commuting,
        "unique_among_internal_projections": len(commuting_projections) == 1,
        "matches_mediating": commuting_projections == [mediating.proj],
        "kleisli_commuting_count": len(commuting),
        "candidate_count": len(candidates),
        "ok": commuting_projections == [mediating.proj] and mediating.proj in commuting,
    }


def collapse_diagram(D: InternalDiagram):
    """Over a one-point base: read the internal diagram as a boolean partial
    diagram through the collapse isomorphisms."""
    from domkit.bilimit_partial import PartialEpDiagram
    from domkit.lift import StrictMap, lift_poset, make_strict_ep
    from domkit.presheaf import boolean_collapse_iso

    base = next(iter(D.objects.values())).base
    if base.n != 1:
        raise Mismatch("collapse needs a one-point base")
    pt = base.elements[0]
    objects = {i: D.objects[i].stages[pt] for i in D.index.elements}
    isos = {i: boolean_collapse_iso(D.lifts[i]) for i in D.index.elements}
    edges = {}
    for (i, j), pair in D.edges.items():
        li, lj = lift_poset(objects[i]), lift_poset(objects[j])
        fwd_i, bwd_i = isos[i]
        fwd_j, bwd_j = isos[j]
        emb = StrictMap(li, lj, bwd_i.then(pair.emb.at(pt)).then(fwd_j))
        proj = StrictMap(lj, li, bwd_j.then(pair.proj.at(pt)).then(fwd_i))
        edges[(i, j)] = make_strict_ep(emb, proj)
    return PartialEpDiagram(D.index, objects, edges, name=f"collapse({D.name})")


def collapse_bilimit_iso(B: InternalBilimit):
    """Over a one-point base: boolean partial bilimit of the collapsed
    diagram, plus the checked order isomorphism between the two apexes."""
    from domkit.bilimit_partial import build_partial_bilimit
    from domkit.presheaf import boolean_collapse_iso

    D = B.diagram
    base = B.apex.base
    pt = base.elements[0]
    idx = list(D.index.elements)
    boolean = build_partial_bilimit(collapse_diagram(D))
    isos = {i: boolean_collapse_iso(D.lifts[i]) for i in idx}
    stage = B.apex.stages[pt]

    def fwd_assign(u):
        comps = _components(stage, u, len(idx))
        return tuple_id([isos[i][0](c) for i, c in zip(idx, comps)])

    fwd = MonotoneMap(stage, boolean.apex, fwd_assign)

    def bwd_assign(v):
        comps = [boolean.component[i](v) for i in idx]
        return tuple_id([isos[i][1](c) for i, c in zip(idx, comps)])

    bwd = MonotoneMap(boolean.apex, stage, bwd_assign)
    if not (fwd.then(bwd).is_identity() and bwd.then(fwd).is_identity()):
        raise Mismatch("apex collapse maps are not mutually inverse")
    return boolean, fwd, bwd


def internal_suite(B: InternalBilimit, cones) -> dict:
    """The full stagewise property suite over a built internal bilimit."""
    results = {"approximation_identity": internal_approximation_identity(B)}
    per_cone = []
    for C in cones:
        r = internal_verify_universal(B, C)
        per_cone.append({"cone": C.name, **r})
    results["cones"] = per_cone
    results["ok"] = results["approximation_identity"]["ok"] and \
        all(c["ok"] for c in per_cone)
    return results


def standard_internal_cones(B: InternalBilimit):
    """The bilimit's own cone plus the top-index cone."""
    D = B.diagram
    idx = list(D.index.elements)
    top = next(t for t in idx if all(D.index.leq(i, t) for i in idx))
    ident = InternalMap.identity(D.lifts[top].presheaf)
    return [
        InternalProjCone(B.apex, B.apex_lift, dict(B.cone_proj),
                         dict(B.cone_emb), name="own"),
        InternalProjCone(D.objects[top], D.lifts[top],
                         {i: D.edge(i, top).proj if i != top else ident
                          for i in idx},
                         {i: D.edge(i, top).emb if i != top else ident
                          for i in idx},
                         name="top"),
    ]


def internal_partial_bilimit(D: InternalDiagram, cones=None):
    """Build the internal bilimit and rerun the whole property suite."""
    B = build_internal_bilimit(D)
    report = internal_suite(B, cones if cones is not None
                            else standard_internal_cones(B))
    return B, report
