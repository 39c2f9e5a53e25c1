"""Seeded random diagrams and competing cones for the verification suites.

All sampling goes through ``random.Random`` (Mersenne Twister), which is
stable across platforms and Python versions for a fixed seed, so fixtures
and failure reproductions are portable.

Diagram strategy: sample a directed index (random up-edges on an ordered
label set, transitively closed, with a forced top), sample an object per
index element, sample an ep-pair per cover edge, close the edge family under
composition along fixed paths, then validate functoriality; rejection-sample
the whole attempt until it validates. Functorial diagrams are sparse, so the
constructive closure does the heavy lifting and rejection only arbitrates
genuinely conflicting diamonds.
"""

from __future__ import annotations

import random

from domkit.poset import FinPoset, MonotoneMap, chain, poset_from_order, product_family
from domkit.ep import EpPair, compose_ep, enumerate_ep_pairs, identity_ep
from domkit.bilimit_total import Bilimit, EpDiagram, ProjCone, validate_diagram
from domkit.lift import (
    compose_strict_ep,
    enumerate_strict_ep_pairs,
    identity_strict_ep,
    lift_ep,
    lift_poset,
)
from domkit.bilimit_partial import PartialBilimit, PartialEpDiagram, PartialProjCone, validate_partial_diagram

MAX_ATTEMPTS = 200


def random_poset(rng: random.Random, max_size: int, name: str, prefix="x",
                 min_size=1) -> FinPoset:
    """Random poset: up-edges on ordered labels, transitively closed."""
    n = rng.randint(min(min_size, max_size), max_size)
    elements = [f"{prefix}{i}" for i in range(n)]
    rel = {(i, i) for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                rel.add((i, j))
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return poset_from_order(name, elements, lambda x, y: (int(x[len(prefix):]), int(y[len(prefix):])) in rel)


def random_directed_index(rng: random.Random, max_size: int) -> FinPoset:
    """Random index with its last element forced to be a top.

    Every finite directed poset has a greatest element, so forcing one is
    a normal form, not a restriction. Sizes are biased upward: singleton
    indexes make the bilimit degenerate and are allowed but rare.
    """
    n = max(rng.randint(1, max_size), rng.randint(1, max_size))
    elements = [str(i) for i in range(n)]
    rel = {(i, i) for i in range(n)}
    for i in range(n):
        rel.add((i, n - 1))
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                rel.add((i, j))
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return poset_from_order("index", elements, lambda x, y: (int(x), int(y)) in rel)


def _cover_edges(P: FinPoset):
    from domkit.poset import hasse_edges

    return hasse_edges(P)


def _close_edges(index: FinPoset, objects, cover, identity, compose):
    """Extend cover-edge arrows to all index relations along fixed paths."""
    edges = {}
    for i in index.elements:
        edges[(i, i)] = identity(objects[i])
    for i, j in cover:
        edges[(i, j)] = cover[(i, j)]
    order = list(index.elements)
    for j in order:
        for i in order:
            if i == j or not index.leq(i, j) or (i, j) in edges:
                continue
            # first cover predecessor of j above i, in element order
            m = next(m for m in order
                     if (m, j) in cover and i != m and index.leq(i, m))
            if (i, m) not in edges:
                continue  # handled on a later sweep
            edges[(i, j)] = compose(edges[(i, m)], edges[(m, j)])
    # sweeps above fill in topological order; repeat until stable
    missing = [(i, j) for i in order for j in order
               if index.leq(i, j) and (i, j) not in edges]
    while missing:
        progressed = False
        for i, j in missing:
            m = next(m for m in order
                     if (m, j) in cover and i != m and index.leq(i, m))
            if (i, m) in edges:
                edges[(i, j)] = compose(edges[(i, m)], edges[(m, j)])
                progressed = True
        missing = [(i, j) for i in order for j in order
                   if index.leq(i, j) and (i, j) not in edges]
        if missing and not progressed:
            raise AssertionError("edge closure did not progress")
    return edges


def _sample_objects_and_covers(rng, index, max_obj, enumerate_pairs, sample_poset):
    """Objects placed along a linear extension; each must admit an ep-pair
    from every cover predecessor (a target at least as large as its sources
    usually does, so sizes are biased up accordingly)."""
    cover = _cover_edges(index)
    preds = {j: [i for i, jj in cover if jj == j] for j in index.elements}
    objects = {}
    cover_eps = {}
    for j in index.elements:
        lo = max((objects[i].n for i in preds[j]), default=1)
        for attempt in range(30):
            P = sample_poset(rng, max_obj, f"D{j}", f"d{j}_", lo)
            eps = {}
            for i in preds[j]:
                candidates = enumerate_pairs(objects[i], P)
                if not candidates:
                    eps = None
                    break
                eps[(i, j)] = rng.choice(candidates)
            if eps is not None:
                objects[j] = P
                cover_eps.update(eps)
                break
        else:
            return None, None
    return objects, cover_eps


def random_total_diagram(rng: random.Random, max_index=4, max_obj=4,
                         name="diagram") -> EpDiagram:
    def sample_poset(rng, max_obj, nm, prefix, lo):
        return random_poset(rng, max_obj, nm, prefix=prefix, min_size=lo)

    for _ in range(MAX_ATTEMPTS):
        index = random_directed_index(rng, max_index)
        objects, cover_eps = _sample_objects_and_covers(
            rng, index, max_obj, enumerate_ep_pairs, sample_poset)
        if objects is None:
            continue
        edges = _close_edges(index, objects, cover_eps, identity_ep, compose_ep)
        D = EpDiagram(index, objects, edges, name=name)
        if validate_diagram(D)["ok"]:
            return D
    # deterministic fallback: identity chain diagram always validates
    index = chain(2, name="index", prefix="")
    P = random_poset(rng, max_obj, "D", prefix="d")
    return EpDiagram(index, {"0": P, "1": P},
                     {("0", "0"): identity_ep(P), ("1", "1"): identity_ep(P),
                      ("0", "1"): identity_ep(P)}, name=name)


def _padding_ep(apex: FinPoset) -> EpPair:
    """Canonical ep-pair apex <-> apex x 2-chain: pair with the low point."""
    two = chain(2, name="pad")
    prod, projs = product_family(["l", "r"], {"l": apex, "r": two})
    emb = MonotoneMap(apex, prod, lambda x: f"({x},c0)")
    return EpPair(emb, projs["l"])


def random_total_cones(rng: random.Random, B: Bilimit, count=3):
    """Competing cones over a built bilimit: its own cone, the top-index
    cone, and cones factored through a sampled ep-pair out of the apex."""
    D = B.diagram
    idx = list(D.index.elements)
    cones = []

    cones.append(ProjCone(B.apex, dict(B.cone_proj), dict(B.cone_emb), name="own"))

    top = next(t for t in idx if all(D.index.leq(i, t) for i in idx))
    cones.append(ProjCone(
        D.objects[top],
        {i: D.edge(i, top).proj for i in idx},
        {i: D.edge(i, top).emb for i in idx},
        name="top",
    ))

    while len(cones) < count:
        pad = None
        if rng.random() < 0.5:
            H = random_poset(rng, B.apex.n + 1, "H", prefix="h")
            candidates = enumerate_ep_pairs(B.apex, H)
            if candidates:
                pad = rng.choice(candidates)
        if pad is None:
            pad = _padding_ep(B.apex)
        cones.append(ProjCone(
            pad.cod,
            {i: pad.proj.then(B.cone_proj[i]) for i in idx},
            {i: B.cone_emb[i].then(pad.emb) for i in idx},
            name="padded",
        ))
    return cones[:count]


def random_partial_diagram(rng: random.Random, max_index=3, max_obj=3,
                           name="pdiagram") -> PartialEpDiagram:
    def enumerate_pairs(A, B):
        return enumerate_strict_ep_pairs(lift_poset(A), lift_poset(B))

    def sample_poset(rng, max_obj, nm, prefix, lo):
        # strict ep-pairs can drop elements to bottom, so smaller targets
        # stay possible; bias only mildly
        return random_poset(rng, max_obj, nm, prefix=prefix,
                            min_size=min(lo, max_obj))

    for _ in range(MAX_ATTEMPTS):
        index = random_directed_index(rng, max_index)
        objects, cover_eps = _sample_objects_and_covers(
            rng, index, max_obj, enumerate_pairs, sample_poset)
        if objects is None:
            continue
        lifts = {i: lift_poset(P) for i, P in objects.items()}
        edges = _close_edges(index, lifts, cover_eps, identity_strict_ep,
                             compose_strict_ep)
        D = PartialEpDiagram(index, objects, edges, name=name)
        if validate_partial_diagram(D)["ok"]:
            return D
    index = chain(2, name="index", prefix="")
    P = random_poset(rng, max_obj, "D", prefix="d")
    ident = identity_strict_ep(lift_poset(P))
    return PartialEpDiagram(index, {"0": P, "1": P},
                            {("0", "0"): ident, ("1", "1"): ident, ("0", "1"): ident},
                            name=name)


def random_presheaf(rng: random.Random, base: FinPoset, max_stage: int,
                    name: str, prefix: str):
    """Random presheaf: stage posets plus sampled monotone restrictions,
    composed along covers so functoriality holds by construction."""
    from domkit.poset import enumerate_monotone_maps, hasse_edges
    from domkit.presheaf import PresheafPoset

    stages = {p: random_poset(rng, max_stage, f"{name}@{p}", prefix=f"{prefix}{p}_")
              for p in base.elements}
    restrictions = {(p, p): MonotoneMap.identity(stages[p]) for p in base.elements}
    for p, q in ((b, a) for a, b in hasse_edges(base)):
        restrictions[(p, q)] = rng.choice(enumerate_monotone_maps(stages[p], stages[q]))
    changed = True
    while changed:
        changed = False
        for p in base.elements:
            for q in base.down_set(p):
                if (p, q) in restrictions:
                    continue
                for m in base.elements:
                    if m != p and m != q and (p, m) in restrictions \
                            and (m, q) in restrictions:
                        restrictions[(p, q)] = restrictions[(p, m)].then(
                            restrictions[(m, q)])
                        changed = True
                        break
    return PresheafPoset(base, stages, restrictions, name=name)


def random_internal_diagram(rng: random.Random, base: FinPoset, max_index=2,
                            max_stage=2, name="idiagram"):
    """Random internal diagram of Kleisli ep-pairs over the given base."""
    from domkit.presheaf import (
        enumerate_internal_strict_eps,
        identity_internal_ep,
        internal_lift,
    )
    from domkit.presheaf_bilimit import (
        InternalDiagram,
        validate_internal_diagram,
    )
    from domkit.presheaf import compose_internal_ep

    def enumerate_pairs(A, B):
        return enumerate_internal_strict_eps(lifted[A.name], lifted[B.name])

    for _ in range(MAX_ATTEMPTS):
        index = random_directed_index(rng, max_index)
        lifted = {}

        def sample(rng, max_obj, nm, prefix, lo):
            P = random_presheaf(rng, base, max_obj, nm, prefix)
            lifted[P.name] = internal_lift(P)
            return P

        objects, cover_eps = _sample_objects_and_covers(
            rng, index, max_stage, enumerate_pairs, sample)
        if objects is None:
            continue
        lifts = {i: lifted[objects[i].name] for i in index.elements}
        edges = _close_edges(index, lifts, cover_eps,
                             lambda L: identity_internal_ep(L),
                             compose_internal_ep)
        D = InternalDiagram(index, objects, lifts, edges, name=name)
        if validate_internal_diagram(D)["ok"]:
            return D
    from domkit.presheaf import constant_presheaf, identity_internal_ep as ident
    from domkit.poset import unit as unit_poset

    index = chain(2, name="index", prefix="")
    P = constant_presheaf(base, unit_poset(), "one")
    L = internal_lift(P)
    e = ident(L)
    return InternalDiagram(index, {"0": P, "1": P}, {"0": L, "1": L},
                           {("0", "0"): e, ("1", "1"): e, ("0", "1"): e},
                           name=name)


def random_internal_cones(rng: random.Random, B, count=2):
    """Own cone plus the top-index cone over an internal bilimit."""
    from domkit.presheaf import InternalMap
    from domkit.presheaf_bilimit import InternalProjCone

    D = B.diagram
    idx = list(D.index.elements)
    cones = [InternalProjCone(B.apex, B.apex_lift, dict(B.cone_proj),
                              dict(B.cone_emb), name="own")]
    top = next(t for t in idx if all(D.index.leq(i, t) for i in idx))
    ident = InternalMap.identity(D.lifts[top].presheaf)
    legs = {i: D.edge(i, top).proj if i != top else ident for i in idx}
    adjoints = {i: D.edge(i, top).emb if i != top else ident for i in idx}
    cones.append(InternalProjCone(D.objects[top], D.lifts[top], legs, adjoints,
                                  name="top"))
    return cones[:count]


def random_partial_cones(rng: random.Random, B: PartialBilimit, count=3):
    D = B.diagram
    idx = list(D.index.elements)
    cones = []

    cones.append(PartialProjCone(B.apex, dict(B.cone_proj), dict(B.cone_emb), name="own"))

    top = next(t for t in idx if all(D.index.leq(i, t) for i in idx))
    cones.append(PartialProjCone(
        D.objects[top],
        {i: D.edge(i, top).proj for i in idx},
        {i: D.edge(i, top).emb for i in idx},
        name="top",
    ))

    while len(cones) < count:
        pad = None
        if rng.random() < 0.5:
            H = random_poset(rng, B.apex.n + 1, "H", prefix="h")
            candidates = enumerate_strict_ep_pairs(B.lifted_apex, lift_poset(H))
            if candidates:
                pad = rng.choice(candidates)
        if pad is None:
            pad = lift_ep(_padding_ep(B.apex))
        cones.append(PartialProjCone(
            pad.cod.base,
            {i: pad.proj.then(B.cone_proj[i]) for i in idx},
            {i: B.cone_emb[i].then(pad.emb) for i in idx},
            name="padded",
        ))
    return cones[:count]
