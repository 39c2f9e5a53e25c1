"""Domain expressions, functor actions, chains, truncations, fixed points."""

import pytest

from domkit.errors import (
    DifferentChains,
    Mismatch,
    MultipleVariables,
    NoStarterEp,
    NotDirected,
    NotPointed,
    ParseError,
)
from domkit.poset import MonotoneMap, antichain, chain, empty, unit
from domkit.ep import enumerate_ep_pairs, identity_ep
from domkit.lift import lift_ep, lift_poset
from domkit.solver import (
    Arrow,
    ConstRef,
    EmptyE,
    FiniteRankElem,
    LiftE,
    Prod,
    Sum,
    UnitE,
    Var,
    canonical_rank,
    compare,
    functor_ep,
    functor_object,
    iterate_chain,
    lfp,
    lub_finite_rank,
    omega_bar,
    parse_expr,
    truncated_bilimit,
)


class TestParser:
    def test_lift(self):
        assert parse_expr("lift X") == LiftE(Var())

    def test_arrow(self):
        assert parse_expr("(X -> X)") == Arrow(Var(), Var())

    def test_sum_of_unit_and_square(self):
        assert parse_expr("1 + (X * X)") == Sum(UnitE(), Prod(Var(), Var()))

    def test_precedence(self):
        # lift > * > + > ->
        assert parse_expr("lift X * X + 1 -> 0") == \
            Arrow(Sum(Prod(LiftE(Var()), Var()), UnitE()), EmptyE())

    def test_arrow_right_associative(self):
        assert parse_expr("X -> X -> X") == Arrow(Var(), Arrow(Var(), Var()))

    def test_named_constant(self):
        assert parse_expr("sierpinski") == ConstRef("sierpinski")

    def test_other_variable_rejected(self):
        with pytest.raises(MultipleVariables):
            parse_expr("X -> Y")

    def test_syntax_errors(self):
        with pytest.raises(ParseError):
            parse_expr("X ->")
        with pytest.raises(ParseError):
            parse_expr("(X")
        with pytest.raises(ParseError):
            parse_expr("X X")


class TestFunctorObject:
    def test_lift_of_empty(self):
        assert functor_object(parse_expr("lift X"), empty()).n == 1

    def test_arrow_on_two_chain(self):
        assert functor_object(parse_expr("X -> X"), chain(2)).n == 3

    def test_sum_with_unit(self):
        P = functor_object(parse_expr("1 + X"), antichain(2))
        assert P.n == 3
        assert not any(P.leq(x, y) for x in P.elements for y in P.elements
                       if x != y)

    def test_partial_arrow_counts_strict_maps(self):
        # strict maps L1 -> L1 between two-chains: two of them
        P = functor_object(parse_expr("X -> X"), unit(), mode="partial")
        assert P.n == 2

    def test_constants(self):
        P = functor_object(parse_expr("two * X"), unit(),
                           constants={"two": chain(2)})
        assert P.n == 2


class TestFunctorEp:
    def test_identity_goes_to_identity(self):
        e = identity_ep(chain(2))
        out = functor_ep(parse_expr("X -> X"), e)
        assert out.emb.is_identity() and out.proj.is_identity()

    def test_lift_action_agrees_with_lift_ep(self):
        e = enumerate_ep_pairs(unit(), chain(2))[0]
        via_functor = functor_ep(parse_expr("lift X"), e)
        assert via_functor == lift_ep(e).underlying()

    def test_arrow_action_embeds_point_space_into_three_chain(self):
        e = enumerate_ep_pairs(unit(), chain(2))[0]
        out = functor_ep(parse_expr("X -> X"), e)
        assert out.dom.n == 1 and out.cod.n == 3
        # section law was validated on construction; spot-check deflation
        for y in out.cod.elements:
            assert out.cod.leq(out.emb(out.proj(y)), y)

    def test_functoriality_on_composites(self):
        from domkit.ep import compose_ep

        f = enumerate_ep_pairs(unit(), chain(2))[0]
        g = enumerate_ep_pairs(chain(2), chain(3))[0]
        for expr in ("lift X", "X -> X", "1 + X", "X * X"):
            e = parse_expr(expr)
            assert functor_ep(e, compose_ep(f, g)) == \
                _compose(functor_ep(e, f), functor_ep(e, g))

    def test_partial_functoriality_on_composites(self):
        from domkit.lift import compose_strict_ep, enumerate_strict_ep_pairs

        f = enumerate_strict_ep_pairs(lift_poset(unit()), lift_poset(chain(2)))[0]
        g = enumerate_strict_ep_pairs(lift_poset(chain(2)), lift_poset(chain(3)))[0]
        for expr in ("lift X", "1 + X", "X * X"):
            e = parse_expr(expr)
            assert functor_ep(e, compose_strict_ep(f, g), mode="partial") == \
                compose_strict_ep(functor_ep(e, f, mode="partial"),
                                  functor_ep(e, g, mode="partial"))


def _compose(f, g):
    from domkit.ep import compose_ep

    return compose_ep(f, g)


class TestChains:
    def test_lift_chain_sizes(self):
        c = iterate_chain(parse_expr("lift X"), empty("0"), 4, mode="partial")
        assert c.sizes() == [0, 1, 2, 3, 4]
        # each level is a linear order
        for P in c.levels:
            assert all(P.leq(x, y) or P.leq(y, x)
                       for x in P.elements for y in P.elements)

    def test_arrow_chain_sizes(self):
        c = iterate_chain(parse_expr("X -> X"), chain(2), 2, mode="total")
        assert c.sizes() == [2, 3, 10]

    def test_sum_chain_sizes(self):
        c = iterate_chain(parse_expr("1 + X"), empty("0"), 3, mode="partial")
        assert c.sizes() == [0, 1, 2, 3]

    def test_no_starter_from_empty_in_total_mode(self):
        with pytest.raises(NoStarterEp):
            iterate_chain(parse_expr("X -> X"), empty("0"), 2, mode="total")

    def test_links_validate(self):
        c = iterate_chain(parse_expr("lift X"), empty("0"), 3, mode="partial")
        for k, link in enumerate(c.links):
            assert link.dom.base == c.levels[k]
            assert link.cod.base == c.levels[k + 1]


class TestTruncatedBilimit:
    def test_level_zero(self):
        c = iterate_chain(parse_expr("lift X"), empty("0"), 2, mode="partial")
        _, rep = truncated_bilimit(c, 0)
        assert rep["ok"] and rep["apex_size"] == 0

    def test_lift_chain_all_levels(self):
        c = iterate_chain(parse_expr("lift X"), empty("0"), 3, mode="partial")
        for k in range(4):
            _, rep = truncated_bilimit(c, k)
            assert rep["ok"]
            assert rep["apex_size"] == rep["top_size"] == k

    def test_arrow_chain_level_two(self):
        c = iterate_chain(parse_expr("X -> X"), chain(2), 2, mode="total")
        _, rep = truncated_bilimit(c, 2)
        assert rep["ok"] and rep["apex_size"] == 10

    def test_out_of_range(self):
        c = iterate_chain(parse_expr("lift X"), empty("0"), 1, mode="partial")
        with pytest.raises(Mismatch):
            truncated_bilimit(c, 5)


class TestOmegaBar:
    def test_first_level_is_point(self):
        c, rep = omega_bar(1)
        assert rep["levels"] == [0, 1]
        assert rep["checks"][0]["iso"]

    def test_eta_sends_top_to_top(self):
        c, rep = omega_bar(3)
        assert rep["ok"]
        assert all(e.get("top_to_top", True) for e in rep["checks"])

    def test_links_are_lifts_of_previous(self):
        _, rep = omega_bar(4)
        assert all(e.get("link_is_lift_of_previous", True)
                   for e in rep["checks"])

    def test_up_to_six(self):
        _, rep = omega_bar(6)
        assert rep["ok"] and rep["levels"] == [0, 1, 2, 3, 4, 5, 6]


class TestFiniteRank:
    @pytest.fixture
    def lift_chain(self):
        return omega_bar(4)[0]

    def test_canonicalize_embedded_element(self, lift_chain):
        # bottom at level 3 is the image of bottom all the way down to 1
        x = canonical_rank(FiniteRankElem(lift_chain, 3, "bot"))
        assert (x.rank, x.value) == (1, "bot")

    def test_canonical_is_idempotent(self, lift_chain):
        for rank in (1, 2, 3):
            for value in lift_chain.levels[rank].elements:
                once = canonical_rank(FiniteRankElem(lift_chain, rank, value))
                assert canonical_rank(once) == once

    def test_compare_with_image_is_equal(self, lift_chain):
        top2 = FiniteRankElem(lift_chain, 2, lift_chain.levels[2].top())
        assert compare(top2, FiniteRankElem(lift_chain, 3, "eta(bot)")) == "eq"

    def test_compare_orders_approximants(self, lift_chain):
        bot = FiniteRankElem(lift_chain, 1, "bot")
        top3 = FiniteRankElem(lift_chain, 3, lift_chain.levels[3].top())
        assert compare(bot, top3) == "lt"
        assert compare(top3, bot) == "gt"

    def test_lub_of_comparable_pair(self, lift_chain):
        a = FiniteRankElem(lift_chain, 1, "bot")
        b = FiniteRankElem(lift_chain, 2, lift_chain.levels[2].top())
        assert lub_finite_rank([a, b]) == canonical_rank(b)

    def test_different_chains_rejected(self, lift_chain):
        other = omega_bar(2)[0]
        with pytest.raises(DifferentChains):
            compare(FiniteRankElem(lift_chain, 1, "bot"),
                    FiniteRankElem(other, 1, "bot"))

    def test_incomparable_ranks(self):
        c = iterate_chain(parse_expr("1 + X"), empty("0"), 3, mode="partial")
        elems = c.levels[2].elements
        a = FiniteRankElem(c, 2, elems[0])
        b = FiniteRankElem(c, 2, elems[1])
        assert compare(a, b) == "incomparable"
        with pytest.raises(NotDirected):
            lub_finite_rank([a, b])


class TestLfp:
    def test_identity_returns_bottom(self):
        assert lfp(MonotoneMap.identity(chain(3))) == "c0"

    def test_constant(self):
        P = chain(3)
        assert lfp(MonotoneMap.constant(P, P, "c1")) == "c1"

    def test_step_up_reaches_top(self):
        P = chain(3)
        f = MonotoneMap(P, P, {"c0": "c1", "c1": "c2", "c2": "c2"})
        assert lfp(f) == "c2"

    def test_unpointed_raises(self):
        with pytest.raises(NotPointed):
            lfp(MonotoneMap.identity(antichain(2)))
