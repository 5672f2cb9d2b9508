import random

import pytest
from hypothesis import given, strategies as st

from ninefields.acceptance import random_triple, sn_records
from ninefields.curve_models import (
    AbModel, PreconditionViolated, WeierstrassModel, conductor, j_equals, kraus_criterion,
)
from ninefields.field_arith import FIELDS, QuadInt, canonical, field, valuation
from ninefields.oracles import setzer_neumann_bruteforce
from ninefields.two_torsion import (
    ClassificationTriple, InvalidProfile, _split_square_unit, classify, enumerate_additive,
    enumerate_good_twist, exhaustive_sweep, good_twist_bases, isogeny_triple_swap,
    normalized_two_isogenous, odd_disc_in_isogeny_class, setzer_neumann_solutions,
    sporadic_family, supersingular_candidates, synthesize, triples_equivalent,
    valuation_profiles,
)


def min_disc(a, b):
    return conductor(AbModel(a, b).weierstrass()).disc_min


def classify_ab(a, b):
    return classify(a, b, min_disc(a, b))


class TestClassify:
    def test_good_twist_base(self):
        K = field(7)
        s = K.sqrt_minus_d
        t = classify_ab(6 * s, K.one)
        want = ClassificationTriple(K.one, K(-64), K.one, 3 * s, K.one, K.one, K)
        assert triples_equivalent(t, want)

    def test_additive_base(self):
        K = field(1)
        t = classify_ab(K(-42), K(-7))
        assert canonical(t.A) == K(7)

    def test_odd_profile_first_row(self):
        # at an odd prime with v(a) = v(b) = 0 the profile is (0, k, 0)
        K = field(7)
        s = K.sqrt_minus_d
        t = classify_ab(6 * s, K.one)
        for prof in valuation_profiles(t):
            if prof.prime.p != 2:
                k = valuation(t.D, prof.prime)
                assert prof.key() == (0, k, 0)


class TestSynthesize:
    def test_49a2(self):
        K = field(1)
        t = ClassificationTriple(K(-7), K(-64), K.one, K(3), K.one, K(-7), K)
        syn = synthesize(t)
        assert (syn.base.a, syn.base.b) == (K(-42), K(-7))
        a, b = syn.base.a, syn.base.b
        assert b * b * (a * a - 4 * b) == 4 * t.A ** 3 * t.B * t.C ** 2

    def test_invalid(self):
        K = field(11)
        with pytest.raises(InvalidProfile):
            synthesize(ClassificationTriple(K(3), K(64), K(2), K(2), K.one, K(3), K))

    @given(st.sampled_from(FIELDS), st.integers(0, 10 ** 6))
    def test_round_trip(self, d, seed):
        K = field(d)
        t = random_triple(K, random.Random(seed))
        syn = synthesize(t)
        a, b = syn.base.a, syn.base.b
        back = classify(a, b, b * b * (a * a - 4 * b))
        assert triples_equivalent(back, t)
        for prof in valuation_profiles(back):
            if prof.prime.p == 2:
                assert prof.key() in ((0, 6 * prof.prime.e, 0), (0, 0, 6 * prof.prime.e))


class TestSwap:
    def test_examples(self):
        K = field(7)
        s = K.sqrt_minus_d
        t = classify_ab(6 * s, K.one)
        sw = isogeny_triple_swap(t)
        assert (canonical(sw.B), canonical(sw.C)) == (K.one, K(64))
        assert isogeny_triple_swap(sw) == t
        a2, b2 = normalized_two_isogenous(6 * s, K.one)
        assert triples_equivalent(classify(a2, b2, b2 * b2 * (a2 * a2 - 4 * b2)), sw)

    @given(st.sampled_from(FIELDS), st.integers(0, 10 ** 6))
    def test_commutes_with_isogeny(self, d, seed):
        K = field(d)
        t = random_triple(K, random.Random(seed))
        syn = synthesize(t)
        a2, b2 = normalized_two_isogenous(syn.base.a, syn.base.b)
        t2 = classify(a2, b2, b2 * b2 * (a2 * a2 - 4 * b2))
        assert triples_equivalent(t2, isogeny_triple_swap(t))
        for prof, sprof in zip(valuation_profiles(t), valuation_profiles(isogeny_triple_swap(t))):
            assert (prof.vA, prof.vB, prof.vC) == (sprof.vA, sprof.vC, sprof.vB)


class TestGoodTwist:
    def test_menu_examples(self):
        K7 = field(7)
        s = K7.sqrt_minus_d
        bases = [(a, b) for a, b, _ in good_twist_bases(K7) if b is not None]
        assert any((a, b) in ((6 * s, K7.one), (-6 * s, K7.one)) for a, b in bases)
        for d in FIELDS:
            assert _split_square_unit(field(d)(65)) is None
        K2 = field(2)
        s2 = K2.sqrt_minus_d
        bases = [(a, b) for a, b, c in good_twist_bases(K2) if c == "supersingular"]
        assert (2 * s2, -K2.one) in bases or (-2 * s2, -K2.one) in bases
        assert j_equals(AbModel(2 * s2, -K2.one).weierstrass(), 20 ** 3)

    @pytest.mark.parametrize("d", FIELDS)
    def test_only_three_fields(self, d):
        recs = enumerate_good_twist(field(d), 500)
        assert bool(recs) == (d in (1, 2, 7))
        for r in recs:
            assert r.conductor_exponents == [2]


class TestAdditive:
    @pytest.mark.parametrize("d", FIELDS)
    def test_quadruple(self, d):
        recs = enumerate_additive(field(d))
        if d in (3, 7, 19):
            assert recs == []
        else:
            assert len(recs) == 4
            assert all(r.conductor_gens == [[7, 0]] and r.conductor_exponents == [2] for r in recs)


class TestSetzerNeumann:
    @pytest.mark.parametrize("d", FIELDS)
    def test_against_bruteforce(self, d):
        K = field(d)
        sols = setzer_neumann_solutions(K, 2000)
        height = max([max(abs(a.x), abs(a.y)) for a, *_ in sols] + [3])
        oracle = {k for k in setzer_neumann_bruteforce(K, 2000, height) if k[1] == K.epsilon.key()}
        assert oracle == {(a.key(), K.epsilon.key()) for a, *_ in sols}

    @pytest.mark.parametrize("d", FIELDS)
    def test_records(self, d):
        K = field(d)
        for r in sn_records(d, 2000):
            p = r.params
            a, u, pi, eps = (QuadInt(*p[k], K) for k in ("a", "u", "pi", "eps"))
            assert p["r"] % 2 == 1
            assert (16 * eps) ** 2 * (a * a - 64 * eps) == 2 ** 8 * u * eps * eps * pi ** p["r"]
            P = r.cd.factors[0][0]
            if r.family == "setzer-neumann":
                assert r.conductor_exponents == [1] and valuation(r.cd.disc_min, P) == p["r"]
                assert odd_disc_in_isogeny_class(r).params["v_disc"] == p["r"]
            else:
                assert r.conductor_exponents == [2]
            inv = r.cd.model.invariants
            assert all(kraus_criterion(inv.c4, inv.c6, q)[0] for q in K.two_primes)

    def test_bound(self):
        from ninefields.two_torsion import setzer_neumann_search
        with pytest.raises(ValueError):
            setzer_neumann_search(field(7), 1)


class TestSporadic:
    @pytest.mark.parametrize("d", FIELDS)
    def test_seventeen(self, d):
        K = field(d)
        recs = sporadic_family(K.one, K)
        assert len(recs) == 4
        for r in recs:
            assert r.params["kraus_twist"]
            assert r.cd.factors and all(P.p == 17 for P, _ in r.cd.factors)
            if len(r.cd.factors) == 1 and r.cd.factors[0][0].kind == "inert":
                assert r.conductor_exponents == [1]

    def test_gaussian_257(self):
        K = field(1)
        for u in (K.omega, -K.omega):
            assert {r.conductor_norm for r in sporadic_family(u, K)} == {257}

    def test_eisenstein_241(self):
        K = field(3)
        assert {r.conductor_norm for r in sporadic_family(K.epsilon ** 2, K)} == {241}

    def test_full_two_torsion(self):
        K = field(11)
        E_u = sporadic_family(K.one, K)[0]
        assert E_u.torsion_structure.startswith("Z/2 x Z/2")

    def test_odd_partner(self):
        # 17 is inert in Q(sqrt(-11)); the oracle is the valuation of every
        # member computed by Tate's algorithm
        K = field(11)
        recs = sporadic_family(K.one, K)
        P = recs[0].cd.factors[0][0]
        vals = {r.params["member"]: valuation(r.cd.disc_min, P) for r in recs}
        for r in recs:
            out = odd_disc_in_isogeny_class(r)
            assert out.params["v_disc"] % 2 == 1
            assert out.params["v_disc"] in vals.values()

    def test_no_two_torsion(self):
        E = WeierstrassModel.from_ainvs(field(11), [0, [0, 1], 1, -1, 0])
        from ninefields.records import make_record
        with pytest.raises(PreconditionViolated):
            odd_disc_in_isogeny_class(make_record(E, "test"))


class TestSupersingular:
    @pytest.mark.parametrize("d", [1, 2])
    def test_all_rejected(self, d):
        cands = supersingular_candidates(field(d), box=6)
        assert cands and not any(c["good_twist_at_2"] for c in cands)

    def test_other_fields_empty(self):
        assert supersingular_candidates(field(7)) == []


class TestSweep:
    # the bound is on norm(b^2 (a^2 - 4b)) = 2^16 norm(D_min), so 10^8 reaches
    # minimal discriminants of norm up to 1525
    @pytest.mark.parametrize("d", [7, 11])
    def test_nothing_missing(self, d):
        found, missing = exhaustive_sweep(field(d), 10 ** 8)
        assert found and missing == []
