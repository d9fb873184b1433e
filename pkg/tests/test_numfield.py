import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thuetwist import intervals as ivs
from thuetwist.embeddings import CertificationError
from thuetwist.exact import Poly, squarefree_check
from thuetwist.numfield import (
    FieldMismatchError, NumberField, UnitSystem, charpoly_of, check_siegel_properties,
    element_arith, generates_field, is_unit, norm, reduce_by_units, regulator_from_units,
)
from thuetwist.numfield import _log_deviation

X = Poly.x()


def elements(K, bound=4):
    return st.tuples(st.lists(st.integers(-bound, bound), min_size=K.d, max_size=K.d),
                     st.integers(1, 3)).map(lambda t: K.element(*t))


CUBIC2 = NumberField.from_coeffs([-2, 0, 0, 1])
QUINTIC = NumberField.from_coeffs([-1, -1, 0, 0, 0, 1])


class TestNumberField:
    def test_validation(self):
        with pytest.raises(ValueError):
            NumberField.from_coeffs([1, 0, 2])  # not monic
        with pytest.raises(ValueError):
            NumberField.from_coeffs([-1, 1])  # degree 1
        with pytest.raises(ValueError):
            NumberField.from_coeffs([1, -2, 1])  # not squarefree
        with pytest.raises(ValueError):
            NumberField.from_coeffs([-2, -1, 1])  # rational root 2

    def test_signature(self, plastic_field):
        emb = plastic_field.embeddings()
        assert plastic_field.signature(emb) == (1, 1)
        assert plastic_field.unit_rank(emb) == 1

    def test_element_normalized(self, cubic2):
        x = cubic2.element([2, 4, 6], 4)
        assert x.coords == (1, 2, 3) and x.den == 2

    def test_immutable(self, cubic2):
        with pytest.raises(AttributeError):
            cubic2.theta.den = 3


class TestArithmetic:
    def test_theta_cubed(self, cubic2):
        t = cubic2.theta
        assert element_arith(t, t * t, "mul") == cubic2.rational(2)

    def test_inverse(self, cubic2):
        u = cubic2.theta - 1
        assert element_arith(u, None, "inv") == cubic2.element([1, 1, 1])
        assert u * u.inverse() == cubic2.one

    def test_square(self, cubic2):
        u = cubic2.theta - 1
        assert element_arith(u, None, "pow", 2) == cubic2.element([1, -2, 1])

    def test_negative_power(self, cubic2):
        u = cubic2.theta - 1
        assert u ** -3 * u ** 3 == cubic2.one

    def test_zero_inverse(self, cubic2):
        with pytest.raises(ZeroDivisionError):
            (cubic2.theta - cubic2.theta).inverse()

    def test_mismatch(self, cubic2, plastic_field):
        with pytest.raises(FieldMismatchError):
            cubic2.theta + plastic_field.theta

    @settings(max_examples=50)
    @given(elements(CUBIC2), elements(CUBIC2))
    def test_norm_multiplicative(self, x, y):
        assert norm(x * y) == norm(x) * norm(y)

    @settings(max_examples=30)
    @given(elements(QUINTIC), elements(QUINTIC))
    def test_ring_axioms(self, x, y):
        assert (x + y) * (x - y) == x * x - y * y


class TestCharpolyNorm:
    def test_theta(self, cubic2):
        assert charpoly_of(cubic2.theta) == X ** 3 - 2

    def test_theta_minus_one(self, cubic2):
        assert charpoly_of(cubic2.theta - 1) == Poly([-1, 3, 3, 1])

    def test_one(self, cubic2):
        assert charpoly_of(cubic2.one) == (X - 1) ** 3

    @pytest.mark.parametrize("coords, n", [([-1, 1], 1), ([0, 1], 2), ([1], 1)])
    def test_norm_examples(self, cubic2, coords, n):
        assert norm(cubic2.element(coords)) == n

    def test_trace(self, cubic2):
        assert (cubic2.theta - 1).trace() == -3


class TestUnitAndGenerator:
    def test_is_unit(self, cubic2):
        assert is_unit(cubic2.theta - 1)
        assert not is_unit(cubic2.theta)
        assert not is_unit(cubic2.rational(Fraction(1, 2)))

    def test_generates(self, cubic2):
        assert generates_field(cubic2.theta)
        assert not generates_field(cubic2.one)
        assert generates_field(cubic2.theta ** 2)

    def test_non_generator_in_quartic(self):
        K = NumberField.from_coeffs([1, 0, -4, 0, 1])
        assert not generates_field(K.theta ** 2)

    @settings(max_examples=40)
    @given(elements(CUBIC2, 2).filter(lambda x: not x.is_zero()))
    def test_unit_inverse(self, x):
        if is_unit(x):
            assert is_unit(x.inverse()) and norm(x) * norm(x.inverse()) == 1

    @settings(max_examples=40)
    @given(elements(QUINTIC, 3))
    def test_generator_has_squarefree_charpoly(self, x):
        if generates_field(x):
            assert squarefree_check(charpoly_of(x))


class TestRegulator:
    def test_sqrt2(self, sqrt2_field):
        K = sqrt2_field
        R = regulator_from_units(UnitSystem(K, (K.element([1, 1]),)), K.embeddings())
        assert abs(ivs.mid(R) - 0.881373587) < 1e-8

    def test_plastic(self, plastic_field):
        K = plastic_field
        R = regulator_from_units(UnitSystem(K, (K.theta,)), K.embeddings())
        assert abs(ivs.mid(R) - 0.2811995743) < 1e-9

    def test_dependent_pair(self):
        K = NumberField.from_coeffs([-1, -3, 0, 1])  # totally real cubic, rank 2
        with pytest.raises(CertificationError):
            regulator_from_units(UnitSystem(K, (K.theta, K.theta ** 2)), K.embeddings())

    def test_wrong_count(self, plastic_field):
        K = plastic_field
        with pytest.raises(ValueError):
            regulator_from_units(UnitSystem(K, (K.theta, K.theta ** 2)), K.embeddings())

    def test_non_unit_rejected(self, cubic2):
        with pytest.raises(ValueError):
            UnitSystem(cubic2, (cubic2.theta,))


class TestSiegel:
    def test_sqrt2_all_pass(self, sqrt2_field):
        K = sqrt2_field
        rep = check_siegel_properties(UnitSystem(K, (K.element([1, 1]),)), K.embeddings(), 10, 10, 10)
        assert rep["pass"] and rep["i"] and rep["ii"] and rep["iii"]
        assert rep["max_inverse_entry"] == pytest.approx(1 / 0.881373587, rel=1e-6)

    def test_kappa9_one_fails(self, sqrt2_field):
        K = sqrt2_field
        rep = check_siegel_properties(UnitSystem(K, (K.element([1, 1]),)), K.embeddings(), 10, 10, 1)
        assert rep["i"] and rep["ii"] and not rep["iii"] and not rep["pass"]

    def test_rank_zero_vacuous(self):
        K = NumberField.from_coeffs([1, 0, 1])
        rep = check_siegel_properties(UnitSystem(K, ()), K.embeddings(), 1, 1, 1)
        assert rep["pass"] and rep["vacuous"]


class TestReduceByUnits:
    def test_square(self, sqrt2_field):
        K = sqrt2_field
        eps = K.element([1, 1])
        b, bt, _ = reduce_by_units(eps ** 2, UnitSystem(K, (eps,)), K.embeddings())
        assert b == [2] and bt == K.one

    def test_one(self, sqrt2_field):
        K = sqrt2_field
        b, bt, _ = reduce_by_units(K.one, UnitSystem(K, (K.element([1, 1]),)), K.embeddings())
        assert b == [0] and bt == K.one

    def test_five(self, sqrt2_field):
        K = sqrt2_field
        eps = K.element([1, 1])
        b, bt, _ = reduce_by_units(K.rational(5) * eps ** -3,
                                   UnitSystem(K, (eps,)), K.embeddings())
        assert b == [-3] and bt == K.rational(5)

    def test_round_trip_and_deviation(self, plastic_field):
        K = plastic_field
        eps = K.theta
        sys = UnitSystem(K, (eps,))
        emb = K.embeddings()
        rng = random.Random(2)
        for _ in range(20):
            base = K.element([rng.randint(-3, 3) for _ in range(3)])
            if base.is_zero() or base.norm() == 0:
                continue
            c = rng.randint(-8, 8)
            beta = base * eps ** c
            b, bt, dev = reduce_by_units(beta, sys, emb)
            assert bt * eps ** b[0] == beta
            # shifting by a unit power does not change the balanced representative
            _, bt0, dev0 = reduce_by_units(base, sys, emb)
            assert bt == bt0
            # and the recorded deviation never exceeds that of the input's own cofactor
            assert ivs.mid(dev) <= ivs.mid(_log_deviation(base, base.norm(), emb)) + 1e-12

    def test_zero_rejected(self, sqrt2_field):
        K = sqrt2_field
        with pytest.raises(ValueError):
            reduce_by_units(K.rational(0), UnitSystem(K, (K.element([1, 1]),)), K.embeddings())
