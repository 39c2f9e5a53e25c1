"""The total bilimit: coherent-tuple apex, cone laws, universal property."""

import random

import pytest

from domkit.poset import MonotoneMap, chain, poset_from_order, unit
from domkit.ep import compose_ep, enumerate_ep_pairs, identity_ep
from domkit.bilimit_total import (
    EpDiagram,
    ProjCone,
    approximation_identity,
    build_bilimit,
    choice_independence,
    colimit_view,
    mediating_projection,
    validate_diagram,
    verify_universal,
)
from domkit.generators import random_total_cones, random_total_diagram


def two_step_diagram():
    """Index {0 < 1}, point into the two-chain at the bottom."""
    idx = poset_from_order("idx", ["0", "1"], lambda x, y: x <= y)
    D0, D1 = unit(), chain(2)
    edge = enumerate_ep_pairs(D0, D1)[0]
    return EpDiagram(idx, {"0": D0, "1": D1},
                     {("0", "0"): identity_ep(D0),
                      ("1", "1"): identity_ep(D1),
                      ("0", "1"): edge})


def one_object_diagram(P):
    idx = poset_from_order("one", ["0"], lambda x, y: True)
    return EpDiagram(idx, {"0": P}, {("0", "0"): identity_ep(P)})


def double_path_diagram():
    """0, 1 below 2, everything below 3: two different upper bounds."""
    idx = poset_from_order(
        "dbl", ["0", "1", "2", "3"],
        lambda x, y: x == y or y == "3" or (x in "01" and y == "2"))
    D = {"0": unit(), "1": unit(), "2": chain(2), "3": chain(3)}
    e02 = enumerate_ep_pairs(D["0"], D["2"])[0]
    e12 = enumerate_ep_pairs(D["1"], D["2"])[0]
    e23 = next(p for p in enumerate_ep_pairs(D["2"], D["3"])
               if p.emb("c1") == "c1")
    edges = {(i, i): identity_ep(D[i]) for i in idx.elements}
    edges[("0", "2")] = e02
    edges[("1", "2")] = e12
    edges[("2", "3")] = e23
    edges[("0", "3")] = compose_ep(e02, e23)
    edges[("1", "3")] = compose_ep(e12, e23)
    return EpDiagram(idx, D, edges)


class TestValidate:
    def test_single_object(self):
        assert validate_diagram(one_object_diagram(chain(2)))["ok"]

    def test_two_step(self):
        assert validate_diagram(two_step_diagram())["ok"]

    def test_constructed_functoriality_violation(self):
        idx = poset_from_order("idx3", ["0", "1", "2"], lambda x, y: x <= y)
        c2, c3 = chain(2), chain(3)
        e01 = identity_ep(c2)
        e12 = next(p for p in enumerate_ep_pairs(c2, c3) if p.emb("c1") == "c1")
        bad = next(p for p in enumerate_ep_pairs(c2, c3) if p.emb("c1") == "c2")
        D = EpDiagram(idx, {"0": c2, "1": c2, "2": c3},
                      {("0", "0"): identity_ep(c2), ("1", "1"): identity_ep(c2),
                       ("2", "2"): identity_ep(c3), ("0", "1"): e01,
                       ("1", "2"): e12, ("0", "2"): bad})
        rep = validate_diagram(D)
        assert not rep["ok"]
        failing = next(c for c in rep["checks"] if not c["ok"])
        assert failing["property"] == "functorial"
        assert failing["witness"] == ["0", "1", "2"]

    def test_non_directed_index(self):
        from domkit.poset import antichain

        D = EpDiagram(antichain(2, prefix=""), {"0": unit(), "1": unit()},
                      {("0", "0"): identity_ep(unit()),
                       ("1", "1"): identity_ep(unit())})
        rep = validate_diagram(D)
        assert not rep["ok"]
        assert rep["checks"][0]["property"] == "index_directed"


class TestBuild:
    def test_two_step_apex(self):
        B = build_bilimit(two_step_diagram())
        assert B.apex.n == 2
        assert B.apex.elements == ("(*,c0)", "(*,c1)")
        assert B.cone_emb["0"]("*") == "(*,c0)"

    def test_one_object_apex_isomorphic(self):
        P = chain(3)
        B = build_bilimit(one_object_diagram(P))
        assert B.apex.n == P.n
        assert B.cone_proj["0"].then(B.cone_emb["0"]).is_identity()

    def test_top_index_isomorphism(self):
        # coherence determines the tuple from its top coordinate
        D = double_path_diagram()
        B = build_bilimit(D)
        top = "3"
        assert B.cone_proj[top].then(B.cone_emb[top]).is_identity()
        assert B.cone_emb[top].then(B.cone_proj[top]).is_identity()
        assert B.apex.n == D.objects[top].n


class TestChoiceIndependence:
    def test_unique_upper_bound_vacuous(self):
        D = two_step_diagram()
        assert choice_independence(D, "0", "1")["ok"]

    def test_same_index_gives_identity_composite(self):
        D = two_step_diagram()
        rep = choice_independence(D, "1", "1")
        assert rep["ok"]
        pair = D.edge("1", "1")
        assert pair.emb.then(pair.proj).is_identity()

    def test_two_distinct_upper_bounds(self):
        D = double_path_diagram()
        rep = choice_independence(D, "0", "1")
        assert rep["ok"]
        assert set(rep["upper_bounds"]) == {"2", "3"}


class TestApproximation:
    def test_two_step(self):
        assert approximation_identity(build_bilimit(two_step_diagram()))["ok"]

    def test_one_object_every_approximant_equals_sigma(self):
        B = build_bilimit(one_object_diagram(chain(3)))
        for sigma in B.apex.elements:
            assert B.cone_emb["0"](B.cone_proj["0"](sigma)) == sigma

    def test_randomized(self):
        for seed in range(20):
            rng = random.Random(seed)
            B = build_bilimit(random_total_diagram(rng, max_index=3, max_obj=3))
            assert approximation_identity(B)["ok"]


class TestMediating:
    def test_own_cone_gives_identity(self):
        B = build_bilimit(two_step_diagram())
        own = ProjCone(B.apex, B.cone_proj, B.cone_emb)
        pair = mediating_projection(B, own)
        assert pair.proj.is_identity()
        assert pair.emb.is_identity()

    def test_top_cone_matches_isomorphism(self):
        D = two_step_diagram()
        B = build_bilimit(D)
        top_cone = ProjCone(D.objects["1"],
                            {"0": D.edge("0", "1").proj,
                             "1": MonotoneMap.identity(D.objects["1"])},
                            {"0": D.edge("0", "1").emb,
                             "1": MonotoneMap.identity(D.objects["1"])})
        pair = mediating_projection(B, top_cone)
        assert pair.proj == B.cone_emb["1"]
        assert pair.emb == B.cone_proj["1"]

    def test_padded_cone_recovers_padding_projection(self):
        from domkit.generators import _padding_ep

        B = build_bilimit(two_step_diagram())
        pad = _padding_ep(B.apex)
        cone = ProjCone(pad.cod,
                        {i: pad.proj.then(B.cone_proj[i]) for i in ("0", "1")},
                        {i: B.cone_emb[i].then(pad.emb) for i in ("0", "1")})
        pair = mediating_projection(B, cone)
        assert pair.proj == pad.proj
        assert pair.emb == pad.emb


class TestUniversal:
    def test_identity_cone(self):
        B = build_bilimit(two_step_diagram())
        own = ProjCone(B.apex, B.cone_proj, B.cone_emb)
        rep = verify_universal(B, own)
        assert rep["ok"] and rep["unique_among_projections"]

    def test_randomized_seeds(self):
        for seed in range(20):
            rng = random.Random(100 + seed)
            D = random_total_diagram(rng)
            B = build_bilimit(D)
            for C in random_total_cones(rng, B, 3):
                rep = verify_universal(B, C)
                assert rep["ok"], (seed, C.name, rep)


class TestDetectors:
    def test_approximation_identity_detects_sabotage(self):
        from domkit.bilimit_total import Bilimit

        B = build_bilimit(two_step_diagram())
        bad_emb = dict(B.cone_emb)
        bad_emb["0"] = MonotoneMap(B.diagram.objects["0"], B.apex, {"*": "(*,c1)"})
        sabotaged = Bilimit(B.diagram, B.apex, B.cone_proj, bad_emb,
                            B.product, B.projections, B.inclusion)
        assert not approximation_identity(sabotaged)["ok"]

    def test_colimit_view_detects_sabotage(self):
        from domkit.bilimit_total import Bilimit

        B = build_bilimit(two_step_diagram())
        bad_emb = dict(B.cone_emb)
        bad_emb["0"] = MonotoneMap(B.diagram.objects["0"], B.apex, {"*": "(*,c1)"})
        sabotaged = Bilimit(B.diagram, B.apex, B.cone_proj, bad_emb,
                            B.product, B.projections, B.inclusion)
        assert not colimit_view(sabotaged)["ok"]

    def test_mediating_rejects_incomplete_cone(self):
        from domkit.errors import ConeInvalid

        B = build_bilimit(two_step_diagram())
        broken = ProjCone(B.apex, {"0": B.cone_proj["0"]}, {"0": B.cone_emb["0"]})
        with pytest.raises(ConeInvalid):
            mediating_projection(B, broken)


class TestColimitView:
    def test_one_object(self):
        assert colimit_view(build_bilimit(one_object_diagram(chain(2))))["ok"]

    def test_two_step_triangles(self):
        assert colimit_view(build_bilimit(two_step_diagram()))["ok"]

    def test_randomized(self):
        for seed in range(20):
            rng = random.Random(200 + seed)
            B = build_bilimit(random_total_diagram(rng, max_index=3, max_obj=3))
            assert colimit_view(B)["ok"]
