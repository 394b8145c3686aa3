from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpe_solver.polynomials import EpsPolynomial, limit_ratio_at_zero
from cpe_solver.rationals import rat

# Coefficients kept within [-1000, 1000] with denominators up to 1000, so the
# lowest nonzero coefficient has magnitude >= 1/1000 and evaluation at 1e-9 is
# sign-faithful for degree <= 4 (tail is at most ~2e-3 of the lead term).
coeffs = st.lists(
    st.fractions(
        min_value=Fraction(-1000),
        max_value=Fraction(1000),
        max_denominator=1000,
    ),
    min_size=0,
    max_size=5,
)


def poly(cs):
    return EpsPolynomial([rat(c) for c in cs])


def test_trimming_and_equality():
    assert EpsPolynomial([1, 2, 0, 0]) == EpsPolynomial([1, 2])
    assert EpsPolynomial([0, 0]).is_zero()
    assert EpsPolynomial([]).degree == -1


def test_str_rendering():
    p = EpsPolynomial([rat(-9, 16), rat(7, 4), rat(-1, 2)])
    assert str(p) == "-9/16 + 7/4*eps - 1/2*eps^2"
    assert str(EpsPolynomial([])) == "0"
    assert str(EpsPolynomial([0, 6])) == "6*eps"


def test_sign_near_zero():
    assert EpsPolynomial([]).sign_near_zero() == 0
    assert EpsPolynomial([0, 0, rat(1, 5)]).sign_near_zero() == 1
    # large positive high-order terms cannot rescue a negative lead
    assert EpsPolynomial([0, -1, 10**9]).sign_near_zero() == -1
    assert EpsPolynomial([rat(1, 10**6), -(10**9)]).sign_near_zero() == 1


def test_arithmetic_basics():
    e = EpsPolynomial.eps()
    one = EpsPolynomial.one()
    assert (one - 3 * e) + (3 * e) == one
    assert e * e == EpsPolynomial([0, 0, 1])
    assert (one - e) * (one + e) == EpsPolynomial([1, 0, -1])
    assert (one - 2 * e - e * e).evaluate(rat(1, 2)) == rat(-1, 4)


def test_scale_and_coefficient_access():
    p = EpsPolynomial([1, 2, 3]).scale(rat(1, 2))
    assert p.coefficient(1) == 1
    assert p.coefficient(99) == 0
    assert p.constant_term == rat(1, 2)


def test_limit_ratio():
    num = EpsPolynomial([0, 3])
    den = EpsPolynomial([0, 12])
    assert limit_ratio_at_zero(num, den) == rat(1, 4)
    assert limit_ratio_at_zero(EpsPolynomial([0, 0, 5]), den) == 0
    with pytest.raises(ValueError):
        limit_ratio_at_zero(den, EpsPolynomial([]))
    with pytest.raises(ValueError):
        limit_ratio_at_zero(EpsPolynomial([1]), EpsPolynomial([0, 1]))


@settings(max_examples=60, deadline=None)
@given(coeffs, coeffs, coeffs)
def test_ring_laws(a, b, c):
    p, q, r = poly(a), poly(b), poly(c)
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@settings(max_examples=60, deadline=None)
@given(coeffs)
def test_sign_decision_matches_evaluation_near_zero(cs):
    p = poly(cs)
    probe = rat(1, 10**9)
    value = p.evaluate(probe)
    sign = p.sign_near_zero()
    if sign == 0:
        assert value == 0
    elif sign > 0:
        assert value > 0
    else:
        assert value < 0


@settings(max_examples=40, deadline=None)
@given(coeffs, st.integers(min_value=1, max_value=10**6))
def test_evaluation_is_a_ring_homomorphism(cs, denom):
    p = poly(cs)
    q = p * p + p
    x = rat(1, denom)
    assert q.evaluate(x) == p.evaluate(x) * p.evaluate(x) + p.evaluate(x)
