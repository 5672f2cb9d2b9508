import pytest
import sympy
from hypothesis import assume, given

from ninefields.acceptance import SQUARE_DISC_EXAMPLES, square_disc_records
from ninefields.curve_models import AbModel, WeierstrassModel, is_isomorphic
from ninefields.field_arith import FIELDS, WrongField, conjugate, field
from ninefields.mod2_square_disc import (
    SQUARE_DISC_FIELDS, DegenerateParameters, RsFamily, field_pq, rs_normalization,
    rs_specialize, two_division_check, verify_seed,
)

from conftest import field_and_elements

U, V = sympy.symbols("u v")


class TestRsFamily:
    @given(field_and_elements(4, bound=12))
    def test_disc_identity(self, args):
        K, a, b, u, v = args
        fam = RsFamily(a, b)
        assume(fam.disc_F and fam.F(u, v))
        E = rs_specialize(fam, u, v)
        assert E.invariants.disc == 2 ** 4 * 3 ** 6 * fam.disc_F * fam.F(u, v) ** 2

    def test_symbolic_forms(self):
        a, b = sympy.symbols("a b")
        A4 = 3 * (3 * a * V ** 2 + 9 * b * U * V - a ** 2 * U ** 2)
        A6 = 27 * b * V ** 3 - 18 * a ** 2 * U * V ** 2 - 27 * a * b * U ** 2 * V - (2 * a ** 3 + 27 * b ** 2) * U ** 3
        F = V ** 3 + a * V * U ** 2 + b * U ** 3
        disc = -16 * (4 * A4 ** 3 + 27 * A6 ** 2)
        assert sympy.expand(disc - 2 ** 4 * 3 ** 6 * (-(4 * a ** 3 + 27 * b ** 2)) * F ** 2) == 0

    def test_specialisations(self):
        K = field(19)
        fam = RsFamily(K(2), K(5))
        E = rs_specialize(fam, 0, 1)
        assert (E.a4, E.a6) == (9 * fam.a, 27 * fam.b)
        E = rs_specialize(fam, 1, 0)
        assert (E.a4, E.a6) == (-3 * fam.a ** 2, -(2 * fam.a ** 3 + 27 * fam.b ** 2))
        with pytest.raises(DegenerateParameters):
            rs_specialize(RsFamily(K(-1), K.zero), 1, 1)


class TestFieldPQ:
    def test_examples(self):
        pq = field_pq(19)
        assert pq.P == (2, 9, 3) and pq.Q == (46, 54, 36, 27)
        assert pq.cubic == (0, -2, -2)
        assert field_pq(163).P == (32, 45, 12)
        for d in (1, 2, 3, 7):
            with pytest.raises(WrongField):
                field_pq(d)

    @pytest.mark.parametrize("d", SQUARE_DISC_FIELDS)
    def test_identities(self, d):
        pq = field_pq(d)
        assert pq.cubic_disc() == -4 * d
        P = pq.p_val(U, V)
        Q = pq.q_val(U, V)
        G = pq.g_val(U, V)
        assert sympy.expand(8 * P ** 3 - Q ** 2 + 27 * d * G ** 2) == 0
        K = field(d)
        E = pq.model(K(3), K(1, 1))
        p, q = pq.p_val(K(3), K(1, 1)), pq.q_val(K(3), K(1, 1))
        assert E.invariants.disc == 1728 * (8 * p ** 3 - q * q)

    @pytest.mark.parametrize("d,lam", [(11, -3), (19, -1), (43, 3), (67, 3), (163, -1)])
    def test_rs_family_matches(self, d, lam):
        pq = field_pq(d)
        assert rs_normalization(pq) == lam
        # independent symbolic check
        g = [c * pq.G[3] for c in pq.G]
        a, b = g[1], g[0]
        A4 = 3 * (3 * a * V ** 2 + 9 * b * U * V - a ** 2 * U ** 2)
        A6 = 27 * b * V ** 3 - 18 * a ** 2 * U * V ** 2 - 27 * a * b * U ** 2 * V - (2 * a ** 3 + 27 * b ** 2) * U ** 3
        assert sympy.expand(A4 - lam ** 2 * -6 * pq.p_val(U, V)) == 0
        assert sympy.expand(A6 - lam ** 3 * 2 * pq.q_val(U, V)) == 0

    @pytest.mark.parametrize("d", SQUARE_DISC_FIELDS)
    def test_seed(self, d):
        seed = verify_seed(d)
        assert seed["conductor_is_root"] and seed["disc_square"] and seed["v_disc"] == 2


class TestSearch:
    @pytest.mark.parametrize("d", SQUARE_DISC_FIELDS)
    def test_printed_example(self, d):
        _, norm, ainvs = SQUARE_DISC_EXAMPLES[d]
        K = field(d)
        E = WeierstrassModel.from_ainvs(K, ainvs)
        Ec = WeierstrassModel(*[conjugate(a) for a in E.ainvs])
        recs = [r for r in square_disc_records(d) if r.conductor_norm == norm]
        assert any(is_isomorphic(r.model, E) or is_isomorphic(r.model, Ec) for r in recs)

    @pytest.mark.parametrize("d", SQUARE_DISC_FIELDS)
    def test_record_invariants(self, d):
        recs = square_disc_records(d)
        assert recs
        for r in recs:
            assert r.conductor_exponents == [1]
            assert r.params["v_disc"] == 2 and r.params["v_disc"] % 4
            assert r.params["szpiro"]
            assert r.params["two_division"]["cyclic_order3"]


class TestTwoDivision:
    def test_47(self):
        rep = two_division_check(WeierstrassModel.from_ainvs(field(11), SQUARE_DISC_EXAMPLES[11][2]))
        assert rep.disc_square and not rep.rational_root and rep.disc_class_matches
        assert rep.cyclic_order3

    @pytest.mark.parametrize("d", FIELDS)
    def test_ab_reducible(self, d):
        K = field(d)
        rep = two_division_check(AbModel(K(3), K(1, 1)).weierstrass())
        assert rep.rational_root and not rep.cyclic_order3

    def test_nonsquare(self):
        rep = two_division_check(WeierstrassModel.from_ainvs(field(19), [0, -1, 1, 0, 0]))
        assert not rep.disc_square and not rep.cyclic_order3
