import json
import math
import random
from fractions import Fraction

import pytest

from oracles import form_by_rounding
from thuetwist import intervals as ivs
from thuetwist.exact import Poly
from thuetwist.family import (
    BinaryForm, SolutionTriple, TwistFamily, chi, corollary_family, corollary_field,
    cyclotomic_demo, evaluate_form, form_at, hauteurunite_check, invariants_of, load_family,
    minimal_a0, psi_values,
)
from thuetwist.embeddings import isolate_roots, mahler_measure
from thuetwist.intervals import IV
from thuetwist.numfield import NumberField

GOLDEN = Poly([-1, -1, 1])


def mid(x):
    return ivs.mid(x)


class TestFormAt:
    @pytest.mark.parametrize("a, text", [
        (1, "X^3+3X^2Y+3XY^2-Y^3"),
        (0, "X^3-3X^2Y+3XY^2-Y^3"),
        (-1, "X^3-3X^2Y-3XY^2-Y^3"),
    ])
    def test_cubic2(self, cubic2_family, a, text):
        assert str(form_at(cubic2_family, a)) == text

    @pytest.mark.parametrize("a", [-1, 1, 4])
    def test_matches_rounding_oracle(self, cubic2_family, a):
        coeffs = form_by_rounding([-2, 0, 0, 1], [1], 1, 1, [-1, 1], a)
        assert list(form_at(cubic2_family, a).coeffs) == coeffs

    def test_plastic(self, plastic_family):
        assert str(form_at(plastic_family, 1)) == "X^3-XY^2-Y^3"

    def test_group_action(self, cubic2_family):
        fam = cubic2_family
        K = fam.field
        for a in (-2, 1, 3):
            shifted = TwistFamily(K, fam.alpha * fam.upsilon ** a, fam.upsilon)
            for b in (-1, 0, 2):
                assert form_at(fam, a + b) == form_at(shifted, b)

    def test_leading_coefficient_is_a0(self, cubic2):
        alpha = cubic2.theta / 2
        a0 = minimal_a0(alpha)
        fam = TwistFamily(cubic2, alpha, cubic2.theta - 1, a0)
        assert a0 == 4
        for a in range(-2, 3):
            assert form_at(fam, a).coeffs[0] == 4

    def test_bad_a0(self, cubic2):
        with pytest.raises(ValueError):
            TwistFamily(cubic2, cubic2.theta / 2, cubic2.theta - 1, 1)


class TestEvaluate:
    def test_cyclotomic(self):
        assert evaluate_form(BinaryForm((1, 0, -1, 0, 1)), 1, 1) == 1

    def test_plastic_point(self):
        assert evaluate_form(BinaryForm((1, 0, -1, -1)), 4, 3) == 1

    def test_y_zero(self, cubic2):
        fam = TwistFamily(cubic2, cubic2.theta / 2, cubic2.theta - 1, 4)
        F = form_at(fam, 2)
        for x in (-3, 1, 5):
            assert evaluate_form(F, x, 0) == 4 * x ** 3

    def test_norm_identity(self, cubic2):
        fam = TwistFamily(cubic2, cubic2.theta / 2, cubic2.theta - 1, 4)
        rng = random.Random(0)
        for _ in range(30):
            a, x, y = rng.randint(-4, 4), rng.randint(-20, 20), rng.randint(-20, 20)
            gamma = fam.gamma(a)
            assert evaluate_form(form_at(fam, a), x, y) == 4 * (cubic2.rational(x) - gamma * y).norm()

    def test_str_and_json(self):
        F = BinaryForm((1, 0, -1, -1))
        assert str(F) == "X^3-XY^2-Y^3"
        assert F.to_json() == ["1", "0", "-1", "-1"]


class TestInvariants:
    def test_plastic(self, plastic_family):
        inv = invariants_of(plastic_family)
        assert inv.mu_case == "case1_tie"
        assert mid(inv.lambda_) == pytest.approx(1.3247179572, abs=1e-9)
        assert ivs.overlaps(inv.mu, inv.lambda_)
        assert mid(inv.lambda0) == 1

    def test_quartic(self, quartic_family):
        inv = invariants_of(quartic_family)
        assert inv.mu_case == "case3_generic"
        assert mid(inv.mu) == pytest.approx(2 + math.sqrt(3), abs=1e-12)
        assert ivs.width(inv.mu) < Fraction(1, 10 ** 20)

    def test_cubic2(self, cubic2_family):
        inv = invariants_of(cubic2_family)
        assert inv.mu_case == "case1_tie"
        assert mid(inv.mu) == pytest.approx(3.8473221, abs=1e-6)

    def test_mu_at_most_lambda_squared(self, plastic_family, quartic_family, cubic2_family):
        for fam in (plastic_family, quartic_family, cubic2_family):
            inv = invariants_of(fam)
            assert ivs.possibly_le(inv.mu, inv.lambda_ ** 2)
            assert ivs.certainly_lt(1, inv.mu)

    def test_rescaled_lambda0(self, cubic2):
        fam = TwistFamily(cubic2, cubic2.theta / 2, cubic2.theta - 1, 4)
        inv = invariants_of(fam)
        # lambda0 = 4 * max(1, 2^(1/3)/2)^3 = 4; rescaled uses conjugates of 4 alpha = 2 theta
        assert mid(inv.lambda0) == pytest.approx(4.0)
        assert mid(inv.lambda0_rescaled) == pytest.approx(16.0)

    def test_root_of_unity_rejected(self):
        K = NumberField(Poly([1, 0, -1, 0, 1]))
        with pytest.raises(ValueError):
            TwistFamily(K, K.one, K.theta)
        TwistFamily(K, K.one, K.theta, unchecked=True)

    def test_non_unit_rejected(self, cubic2):
        with pytest.raises(ValueError):
            TwistFamily(cubic2, cubic2.one, cubic2.theta)


class TestChi:
    def test_all_clamped(self):
        assert mid(chi(1, math.e, 2)) == pytest.approx(1.0)

    def test_log8(self):
        assert mid(chi(math.e, math.e, 8)) == pytest.approx(math.log(8), rel=1e-12)

    def test_min_branch(self):
        assert mid(chi(math.e ** 4, math.e, 100)) == pytest.approx(4 * math.log(25), rel=1e-12)

    def test_zero_a(self):
        with pytest.raises(ValueError):
            chi(1, 2, 0)


class TestHauteurunite:
    @pytest.mark.parametrize("coeffs", [[-1, 3, 3, 1], [-1, -1, 0, 1], [1, 0, -4, 0, 1]])
    def test_examples_certified(self, coeffs):
        P = Poly(coeffs)
        emb = isolate_roots(P)
        rep = hauteurunite_check(emb, mahler_measure(P, emb))
        assert rep["pass"]
        assert all(v == "certified" for k, v in rep.items() if k != "pass")

    def test_boundary_equality(self):
        P = Poly([-1, 3, 3, 1])
        emb = isolate_roots(P)
        lam = mahler_measure(P, emb)
        top = emb.group_moduli()[-1]
        assert ivs.overlaps(IV.sqrt(lam), top)

    def test_detects_wrong_lambda(self):
        P = Poly([-1, -1, 0, 1])
        emb = isolate_roots(P)
        assert not hauteurunite_check(emb, IV.mpf(100))["pass"]


class TestPsi:
    def test_plastic_solution(self, plastic_family):
        rep = psi_values(plastic_family, SolutionTriple(4, 3, 1, 1), m=1)
        assert rep["consistent"] and rep["product_contains_value"]
        order = rep["embedding_order"]
        real_index = [i for i, j in enumerate(order) if plastic_family.emb.real_flags[j]]
        assert rep["i0"] - 1 in real_index

    def test_degenerate_a_zero(self, cubic2_family):
        rep = psi_values(cubic2_family, SolutionTriple(2, 1, 0, 1))
        for b in rep["beta"]:
            assert 1 in b.real and 0 in b.imag
        assert rep["product_contains_value"]

    def test_cyclotomic(self):
        K = NumberField(Poly([1, 0, -1, 0, 1]))
        # alpha = zeta_12 so that F_0 is Phi_12 homogenized
        fam = TwistFamily(K, K.theta, K.theta, unchecked=True)
        assert evaluate_form(form_at(fam, 0), 1, 1) == 1
        rep = psi_values(fam, SolutionTriple(1, 1, 0, 1), m=1)
        assert rep["product_contains_value"]

    def test_negative_y_and_a(self, plastic_family):
        v = evaluate_form(form_at(plastic_family, -2), 3, -2)
        rep = psi_values(plastic_family, SolutionTriple(3, -2, -2, v))
        assert rep["consistent"]

    def test_rejects_non_solution(self, plastic_family):
        with pytest.raises(ValueError):
            psi_values(plastic_family, SolutionTriple(1, 1, 1, 6), m=1)


class TestCorollary:
    def test_a_zero(self):
        assert corollary_family(GOLDEN, 2, 0) == BinaryForm((1, 0, -2, 0, 1))

    def test_a_one(self):
        assert str(corollary_family(GOLDEN, 2, 1)) == "X^4-X^2Y^2-Y^4"

    def test_a_three_sign(self):
        # trace L_3 = 4, norm (-1)^3 = -1
        assert str(corollary_family(GOLDEN, 2, 3)) == "X^4-4X^2Y^2-Y^4"

    def test_a_two(self):
        assert str(corollary_family(GOLDEN, 2, 2)) == "X^4-3X^2Y^2+Y^4"

    @pytest.mark.parametrize("eps, h, a", [
        (GOLDEN, 2, 3), (GOLDEN, 3, 2), (GOLDEN, 2, -2), (Poly([-1, -2, 1]), 2, 4),
        (Poly([-1, -1, 0, 1]), 2, 3),
    ])
    def test_matches_product_oracle(self, eps, h, a):
        import mpmath
        from oracles import numeric_roots
        with mpmath.workdps(60):
            poly = [mpmath.mpc(1)]  # coefficients in T = X^h / Y^h, highest first
            for r in numeric_roots(list(eps.coeffs), 60):
                e = r ** a
                poly = [c - e * p for c, p in zip(poly + [0], [0] + poly)]
            ref = [int(mpmath.nint(c.real)) for c in poly]
            assert all(abs(c - n) < mpmath.mpf(2) ** -100 for c, n in zip(poly, ref))
        expected = [0] * (len(ref) - 1) * h + [0]
        for k, c in enumerate(ref):
            expected[k * h] = c
        assert list(corollary_family(eps, h, a).coeffs) == expected

    def test_h_too_small(self):
        with pytest.raises(ValueError):
            corollary_family(GOLDEN, 1, 1)

    def test_non_unit(self):
        with pytest.raises(ValueError):
            corollary_family(Poly([-3, -1, 1]), 2, 1)

    @pytest.mark.parametrize("eps, h", [(GOLDEN, 2), (Poly([-1, -2, 1]), 2), (GOLDEN, 3)])
    def test_mu_law(self, eps, h):
        K = corollary_field(eps, h)
        fam = TwistFamily(K, K.one, K.theta)
        inv = invariants_of(fam)
        emb_eps = isolate_roots(eps)
        gm = emb_eps.group_moduli()
        expected = (gm[-1] / gm[0]) ** (IV.mpf(1) / h)
        assert ivs.overlaps(inv.mu, expected)
        d = fam.d
        assert ivs.certainly_le(IV.mpf(2) / (d - 1) * IV.log(inv.lambda_), IV.log(inv.mu))


class TestCyclotomicDemo:
    def test_twelve(self):
        rep = cyclotomic_demo(12)
        assert rep["all_equal"] and rep["coprime_a"] == [1, 5, 7, 11]
        assert rep["F0"] == "X^4-X^2Y^2+Y^4"
        assert rep["solutions"] == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def test_three(self):
        rep = cyclotomic_demo(3)
        assert rep["phi"] == "X^2+X+1" and rep["coprime_a"] == [1, 2] and rep["all_equal"]

    def test_too_small(self):
        with pytest.raises(ValueError):
            cyclotomic_demo(2)


class TestLoad:
    def test_round_trip(self, plastic_family):
        again = load_family(json.dumps(plastic_family.to_json()))
        assert form_at(again, 3) == form_at(plastic_family, 3)

    def test_bundled(self):
        from importlib import resources
        for name in ("plastic", "cuberoot2", "quartic", "sqrt2"):
            text = (resources.files("thuetwist") / "data" / f"{name}.json").read_text()
            fam = load_family(text)
            assert fam.name == name
