"""The boolean lift monad: carriers, monad laws, lubs, strict ep-pairs."""

import pytest
from hypothesis import given, settings

from domkit.errors import NotDirected, NotStrict
from domkit.poset import MonotoneMap, all_posets, antichain, chain, empty, unit
from domkit.ep import enumerate_ep_pairs, identity_ep
from domkit.lift import (
    BOT,
    StrictMap,
    compose_strict_ep,
    enumerate_strict_ep_pairs,
    enumerate_strict_maps,
    eta,
    identity_strict_ep,
    kleisli,
    lift_ep,
    lift_lub,
    lift_map,
    lift_poset,
    mu,
    strict_ep_from_partial,
    support,
)
from tests.conftest import posets


class TestCarrier:
    def test_lift_of_empty_is_point(self):
        assert lift_poset(empty()).carrier.n == 1

    def test_lift_of_point_is_two_chain(self):
        L = lift_poset(unit())
        assert L.carrier.n == 2
        assert L.carrier.leq(BOT, "eta(*)")

    def test_lift_of_antichain_is_flat(self):
        L = lift_poset(antichain(2))
        assert L.carrier.n == 3
        assert L.carrier.leq(BOT, "eta(a0)")
        assert not L.carrier.leq("eta(a0)", "eta(a1)")

    def test_support(self):
        L = lift_poset(unit())
        assert not support(BOT)
        assert support(L.up("*"))

    def test_support_of_flattened_bottom(self):
        m = mu(unit())
        assert not support(m("eta(bot)"))

    @given(posets())
    @settings(max_examples=40, deadline=None)
    def test_support_is_monotone(self, A):
        L = lift_poset(A)
        for u in L.carrier.elements:
            for v in L.carrier.elements:
                if L.carrier.leq(u, v) and support(u):
                    assert support(v)


def check_monad_laws(A):
    LA = lift_poset(A)
    LLA = lift_poset(LA.carrier)
    m = mu(A)
    unit_map = eta(A)
    # mu o L eta = id
    assert lift_map(unit_map).then(m).map == MonotoneMap.identity(LA.carrier)
    # mu o eta_L = id
    eta_at_L = eta(LA.carrier)
    assert all(m(eta_at_L(u)) == u for u in LA.carrier.elements)
    # mu o L mu = mu o mu_L
    m_outer = mu(LA.carrier)
    left = lift_map(m.map).then(m)
    right = m_outer.then(m)
    assert left.map == right.map


class TestMonadLaws:
    def test_small_fixture_posets(self, small_posets):
        for A in small_posets:
            check_monad_laws(A)

    def test_all_posets_up_to_three(self):
        for n in range(4):
            for A in all_posets(n):
                check_monad_laws(A)


class TestKleisli:
    def test_kleisli_of_unit_is_identity(self, small_posets):
        for A in small_posets:
            assert kleisli(eta(A)).map == MonotoneMap.identity(lift_poset(A).carrier)

    def test_kleisli_of_constant_bottom(self):
        A = chain(2)
        f = MonotoneMap.constant(A, lift_poset(A).carrier, BOT)
        k = kleisli(f)
        assert all(k(u) == BOT for u in lift_poset(A).carrier.elements)

    def test_point_to_point(self):
        k = kleisli(eta(unit()))
        assert k(BOT) == BOT and k("eta(*)") == "eta(*)"

    @given(posets(3))
    @settings(max_examples=30, deadline=None)
    def test_strict_maps_are_kleisli_extensions(self, A):
        # boolean coincidence: every strict map is determined by its values
        # on defined elements
        LA = lift_poset(A)
        for s in enumerate_strict_maps(LA, LA):
            f = MonotoneMap(A, LA.carrier, {x: s(LA.up(x)) for x in A.elements})
            assert kleisli(f) == s


class TestLub:
    def test_bottom_only(self):
        assert lift_lub(lift_poset(unit()), [BOT]) == BOT

    def test_bottom_and_defined(self):
        L = lift_poset(antichain(2))
        assert lift_lub(L, [BOT, "eta(a0)"]) == "eta(a0)"

    def test_two_comparable(self):
        L = lift_poset(chain(2))
        assert lift_lub(L, ["eta(c0)", "eta(c1)"]) == "eta(c1)"

    def test_not_directed(self):
        with pytest.raises(NotDirected):
            lift_lub(lift_poset(antichain(2)), ["eta(a0)", "eta(a1)"])

    @given(posets())
    @settings(max_examples=40, deadline=None)
    def test_agrees_with_carrier_lub(self, A):
        from domkit.poset import directed_lub, is_directed
        import itertools

        L = lift_poset(A)
        elems = L.carrier.elements
        for r in range(1, min(3, len(elems)) + 1):
            for members in itertools.combinations(elems, r):
                if is_directed(L.carrier, members):
                    assert lift_lub(L, members) == directed_lub(L.carrier, members)


class TestLiftEp:
    def test_identity(self):
        s = lift_ep(identity_ep(chain(2)))
        assert s.emb.map.is_identity() and s.proj.map.is_identity()

    def test_point_into_two_chain(self):
        s = lift_ep(enumerate_ep_pairs(unit(), chain(2))[0])
        assert s.dom.carrier.n == 2 and s.cod.carrier.n == 3
        assert s.emb("eta(*)") == "eta(c0)"
        assert s.proj("eta(c1)") == "eta(*)"

    def test_functorial_on_composites(self):
        f = enumerate_ep_pairs(unit(), chain(2))[0]
        for g in enumerate_ep_pairs(chain(2), chain(3)):
            from domkit.ep import compose_ep

            lhs = lift_ep(compose_ep(f, g))
            rhs = compose_strict_ep(lift_ep(f), lift_ep(g))
            assert lhs == rhs


class TestStrictEpFromPartial:
    def test_empty_case(self):
        s = strict_ep_from_partial(empty(), chain(2))
        assert s.dom.carrier.n == 1
        assert all(s.proj(u) == BOT for u in s.cod.carrier.elements)

    def test_identity_case(self):
        P = chain(2)
        table = {x: x for x in P.elements}
        s = strict_ep_from_partial(P, P, table, table)
        assert s == identity_strict_ep(lift_poset(P))

    def test_total_ep_matches_lift_ep(self):
        pair = enumerate_ep_pairs(unit(), chain(2))[0]
        s = strict_ep_from_partial(unit(), chain(2),
                                   dict(pair.emb.as_pairs()),
                                   dict(pair.proj.as_pairs()))
        assert s == lift_ep(pair)


class TestStrictness:
    def test_non_strict_rejected(self):
        L = lift_poset(unit())
        raising = MonotoneMap.constant(L.carrier, L.carrier, "eta(*)")
        with pytest.raises(NotStrict):
            StrictMap(L, L, raising)

    @given(posets(3), posets(3))
    @settings(max_examples=20, deadline=None)
    def test_every_ep_between_lifts_is_strict(self, A, B):
        # deflation at bottom forces emb(bot) = bot; injectivity then forces
        # proj(bot) = bot, so the strict wrapper never rejects one
        LA, LB = lift_poset(A), lift_poset(B)
        for pair in enumerate_ep_pairs(LA.carrier, LB.carrier):
            assert pair.emb(BOT) == BOT and pair.proj(BOT) == BOT
        enumerate_strict_ep_pairs(LA, LB)  # wrapping must not raise
