"""The partial bilimit: defined-somewhere tuples, supports, universality."""

import random

from domkit.poset import MonotoneMap, chain, empty, poset_from_order, unit
from domkit.lift import (
    BOT,
    StrictMap,
    identity_strict_ep,
    kleisli,
    lift_poset,
    strict_ep_from_partial,
    support,
)
from domkit.bilimit_partial import (
    OMEGA,
    PartialEpDiagram,
    PartialProjCone,
    approximation_identity_partial,
    build_partial_bilimit,
    colimit_view_partial,
    mediating_projection_partial,
    section_chase,
    support_of_e_infinity,
    termination_support,
    validate_partial_diagram,
    verify_universal_partial,
)
from domkit.generators import random_partial_cones, random_partial_diagram


def empty_start_diagram():
    """Index {0 < 1}, empty object below the point, everywhere-undefined edge."""
    idx = poset_from_order("idx", ["0", "1"], lambda x, y: x <= y)
    D0, D1 = empty(), unit()
    return PartialEpDiagram(
        idx, {"0": D0, "1": D1},
        {("0", "0"): identity_strict_ep(lift_poset(D0)),
         ("1", "1"): identity_strict_ep(lift_poset(D1)),
         ("0", "1"): strict_ep_from_partial(D0, D1)})


def one_object_diagram(P):
    idx = poset_from_order("one", ["0"], lambda x, y: True)
    return PartialEpDiagram(idx, {"0": P},
                            {("0", "0"): identity_strict_ep(lift_poset(P))})


def own_cone(B):
    return PartialProjCone(B.apex, B.cone_proj, B.cone_emb, name="own")


class TestBuild:
    def test_empty_start_apex_is_point(self):
        B = build_partial_bilimit(empty_start_diagram())
        assert B.apex.n == 1
        assert B.apex.elements == ("(bot,eta(*))",)

    def test_one_object_excludes_all_bottom_tuple(self):
        P = chain(2)
        B = build_partial_bilimit(one_object_diagram(P))
        assert B.apex.n == P.n  # eta images only; (bot,) is excluded

    def test_top_index_isomorphism(self):
        for seed in range(10):
            rng = random.Random(seed)
            D = random_partial_diagram(rng)
            B = build_partial_bilimit(D)
            top = next(t for t in D.index.elements
                       if all(D.index.leq(i, t) for i in D.index.elements))
            fwd = MonotoneMap(B.apex, D.objects[top],
                              lambda s: D.lifts[top].down(B.component[top](s)))
            bwd = B.total_emb[top]
            assert fwd.then(bwd).is_identity()
            assert bwd.then(fwd).is_identity()

    def test_validate_reports_strictness(self):
        rep = validate_partial_diagram(empty_start_diagram())
        assert rep["ok"]
        assert any(c["property"] == "edges_strict" for c in rep["checks"])


class TestConeProjPresentations:
    def test_kleisli_equals_componentwise(self):
        # the strict extension of tuple projection agrees with the direct
        # bot-preserving component map
        for seed in range(10):
            rng = random.Random(300 + seed)
            B = build_partial_bilimit(random_partial_diagram(rng))
            L = B.lifted_apex
            for i in B.diagram.index.elements:
                direct = {BOT: BOT}
                for sigma in B.apex.elements:
                    direct[L.up(sigma)] = B.component[i](sigma)
                assert B.cone_proj[i] == StrictMap.from_assignment(
                    L, B.diagram.lifts[i], direct)
                assert B.cone_proj[i] == kleisli(B.component[i])


class TestApproximation:
    def test_bottom_has_bottom_approximants(self):
        B = build_partial_bilimit(empty_start_diagram())
        for i in B.diagram.index.elements:
            assert B.cone_emb[i](B.cone_proj[i](BOT)) == BOT

    def test_one_object(self):
        assert approximation_identity_partial(
            build_partial_bilimit(one_object_diagram(chain(2))))["ok"]

    def test_randomized(self):
        for seed in range(20):
            rng = random.Random(400 + seed)
            B = build_partial_bilimit(random_partial_diagram(rng))
            assert approximation_identity_partial(B)["ok"]


class TestTerminationSupport:
    def test_strict_at_bottom(self):
        B = build_partial_bilimit(empty_start_diagram())
        ts = termination_support(B.diagram, own_cone(B))
        assert ts(BOT) == "ff"
        assert ts.cod == OMEGA

    def test_all_bottom_legs(self):
        # a cone whose legs are constantly undefined has empty support
        D = one_object_diagram(unit())
        B = build_partial_bilimit(D)
        H = unit("H")
        LH = lift_poset(H)
        bot_leg = StrictMap.from_assignment(
            LH, D.lifts["0"], lambda u: BOT)
        cone = PartialProjCone.__new__(PartialProjCone)
        cone.apex = H
        cone.lifted_apex = LH
        cone.legs = {"0": bot_leg}
        cone.adjoints = {}
        cone.name = "undefined"
        ts = termination_support(D, cone)
        assert all(ts(u) == "ff" for u in LH.carrier.elements)

    def test_join_of_leg_supports(self):
        for seed in range(10):
            rng = random.Random(500 + seed)
            D = random_partial_diagram(rng)
            B = build_partial_bilimit(D)
            for C in random_partial_cones(rng, B, 3):
                ts = termination_support(D, C)
                for h in C.lifted_apex.carrier.elements:
                    joined = any(support(C.legs[i](h)) for i in D.index.elements)
                    assert (ts(h) == "tt") == joined

    def test_top_cone_support_is_top_leg_support(self):
        # supports are nested along the diagram, so the join is the top one
        rng = random.Random(7)
        D = random_partial_diagram(rng)
        B = build_partial_bilimit(D)
        top = next(t for t in D.index.elements
                   if all(D.index.leq(i, t) for i in D.index.elements))
        C = random_partial_cones(rng, B, 2)[1]
        assert C.name == "top"
        ts = termination_support(D, C)
        for h in C.lifted_apex.carrier.elements:
            assert (ts(h) == "tt") == support(C.legs[top](h))


class TestMediating:
    def test_own_cone_identity(self):
        B = build_partial_bilimit(empty_start_diagram())
        pair = mediating_projection_partial(B, own_cone(B))
        assert pair.proj.map.is_identity()

    def test_top_cone_matches_isomorphism(self):
        D = empty_start_diagram()
        B = build_partial_bilimit(D)
        L1 = D.lifts["1"]
        top_cone = PartialProjCone(
            D.objects["1"],
            {"0": D.edge("0", "1").proj, "1": StrictMap.identity(L1)},
            {"0": D.edge("0", "1").emb, "1": StrictMap.identity(L1)},
            name="top")
        pair = mediating_projection_partial(B, top_cone)
        assert pair.proj == B.cone_emb["1"]
        assert pair.emb == B.cone_proj["1"]

    def test_padded_cone_recovers_padding_projection(self):
        from domkit.generators import _padding_ep
        from domkit.lift import lift_ep

        B = build_partial_bilimit(empty_start_diagram())
        pad = lift_ep(_padding_ep(B.apex))
        idx = B.diagram.index.elements
        cone = PartialProjCone(
            pad.cod.base,
            {i: pad.proj.then(B.cone_proj[i]) for i in idx},
            {i: B.cone_emb[i].then(pad.emb) for i in idx})
        pair = mediating_projection_partial(B, cone)
        assert pair.proj == pad.proj
        assert pair.emb == pad.emb

    def test_projection_presentations_agree(self):
        # the support-plus-tuple construction equals the pointwise lub of
        # embed-after-leg composites wherever the latter is formed
        from domkit.lift import lift_lub

        for seed in range(10):
            rng = random.Random(650 + seed)
            B = build_partial_bilimit(random_partial_diagram(rng))
            idx = B.diagram.index.elements
            for C in random_partial_cones(rng, B, 3):
                pair = mediating_projection_partial(B, C)
                for u in C.lifted_apex.carrier.elements:
                    fam = [B.cone_emb[i](C.legs[i](u)) for i in idx]
                    assert pair.proj(u) == lift_lub(B.lifted_apex, fam)

    def test_support_of_embedding_is_everything(self):
        for seed in range(15):
            rng = random.Random(600 + seed)
            B = build_partial_bilimit(random_partial_diagram(rng))
            for C in random_partial_cones(rng, B, 3):
                assert support_of_e_infinity(B, C)["ok"]

    def test_section_chase_identity(self):
        for seed in range(15):
            rng = random.Random(700 + seed)
            B = build_partial_bilimit(random_partial_diagram(rng))
            for C in random_partial_cones(rng, B, 3):
                assert section_chase(B, C)["ok"]


class TestUniversal:
    def test_identity_cone(self):
        B = build_partial_bilimit(empty_start_diagram())
        rep = verify_universal_partial(B, own_cone(B))
        assert rep["ok"] and rep["unique_among_strict_projections"]

    def test_randomized_seeds(self):
        for seed in range(20):
            rng = random.Random(800 + seed)
            D = random_partial_diagram(rng)
            B = build_partial_bilimit(D)
            for C in random_partial_cones(rng, B, 3):
                rep = verify_universal_partial(B, C)
                assert rep["ok"], (seed, C.name, rep)


class TestColimitView:
    def test_randomized(self):
        for seed in range(15):
            rng = random.Random(900 + seed)
            B = build_partial_bilimit(random_partial_diagram(rng))
            assert colimit_view_partial(B)["ok"]
