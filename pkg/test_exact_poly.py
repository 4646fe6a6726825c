"""
Tests for the exact Laurent polynomial layer
"""
import random
from fractions import Fraction
from itertools import product

import pytest

import exact_poly as ep
from errors import InputError, NonExactDivision
from exact_poly import LaurentPolynomial, Q


def poly(*coeffs, start=0):
    return LaurentPolynomial({start + i: c for i, c in enumerate(coeffs)})


def test_phi_int_small_cases():
    assert ep.phi_int(0) == ep.ONE
    assert ep.phi_int(1) == poly(1, -1)
    assert ep.phi_int(2) == poly(1, -1, -1, 1)


def test_phi_vec_is_product_over_coordinates():
    assert ep.phi_vec((1, 1)) == poly(1, -1) * poly(1, -1)
    assert ep.phi_vec((0, 0)) == ep.ONE
    assert ep.phi_vec((2,)) == ep.phi_int(2)
    with pytest.raises(InputError):
        ep.phi_vec((1, -1))


def test_b_exponent():
    assert ep.b_exponent((1, 1)) == 2
    assert ep.b_exponent((0, 0)) == 0
    assert ep.b_exponent((3, 2)) == 9


def test_arithmetic():
    assert poly(1, -1) + Q == ep.ONE
    assert poly(1, -1) * poly(1, 1) == poly(1, 0, -1)
    assert ep.scale(poly(0, 2), Fraction(1, 2)) == Q
    assert ep.shift(poly(-1, 1), -1) == poly(-1, 1, start=-1)


def test_zero_coefficients_are_dropped():
    p = poly(1, 1) - poly(1, 1)
    assert p.is_zero()
    assert p.terms == []
    assert ep.render(p) == "0"


def test_exact_div():
    assert ep.exact_div(poly(1, 0, -1), poly(1, -1)) == poly(1, 1)
    assert ep.exact_div(ep.phi_int(3), ep.phi_int(2)) == poly(1, 0, 0, -1)
    # phi_(2,1) / (phi_(1,1) phi_(1,0))
    ratio = ep.exact_div(ep.phi_vec((2, 1)), ep.phi_vec((1, 1)) * ep.phi_vec((1, 0)))
    assert ratio == poly(1, 1)


def test_exact_div_with_laurent_terms():
    a = ep.shift(poly(1, 0, -1), -3)
    assert ep.exact_div(a, ep.shift(poly(1, -1), 2)) == ep.shift(poly(1, 1), -5)


def test_exact_div_errors():
    with pytest.raises(NonExactDivision):
        ep.exact_div(poly(1, 1), poly(1, -1))
    with pytest.raises(InputError):
        ep.exact_div(ep.ONE, ep.ZERO)


def test_degree_valuation_and_eval():
    p = poly(-1, 0, 0, 1)
    assert ep.degree(p) == 3
    assert ep.valuation(p) == 0
    assert ep.leading_coefficient(p) == 1
    assert ep.eval_at(poly(1, 1, 1), 2) == 7
    assert poly(1, 1, 1)(Fraction(1, 2)) == Fraction(7, 4)
    with pytest.raises(InputError):
        ep.degree(ep.ZERO)
    with pytest.raises(InputError):
        ep.valuation(ep.ZERO)


@pytest.mark.parametrize("m, expected", [(0, (1, 0)), (1, (-1, 1)), (2, (1, 3)), (3, (-1, 6))])
def test_monomial_reciprocal_phi(m, expected):
    assert ep.monomial_reciprocal_phi(m) == expected


@pytest.mark.parametrize("m", range(6))
def test_monomial_reciprocal_phi_identity(m):
    # phi_m(q^-1) = sign * q^-e * phi_m(q)
    sign, e = ep.monomial_reciprocal_phi(m)
    assert ep.substitute_inverse(ep.phi_int(m)) == ep.scale(ep.shift(ep.phi_int(m), -e), sign)


def test_render_is_canonical():
    assert ep.render(poly(1, 1)) == "1*q^0 + 1*q^1"
    assert ep.render(LaurentPolynomial({-1: Fraction(-1, 2)})) == "-1/2*q^-1"


def test_polynomial_json():
    p = LaurentPolynomial({-2: Fraction(3, 4), 5: -1})
    doc = ep.to_json(p)
    assert doc == {"terms": [[-2, "3/4"], [5, "-1"]], "degree": 5}
    assert ep.from_json(doc) == p
    assert ep.to_json(ep.ZERO) == {"terms": [], "degree": None}


@pytest.mark.parametrize("doc", [
    {"terms": [[0, "0"]], "degree": 0},
    {"terms": [[1, "1"], [0, "1"]], "degree": 1},
    {"terms": [[0, "x"]], "degree": 0},
    {"degree": 0},
])
def test_polynomial_json_rejects_bad_documents(doc):
    with pytest.raises(InputError):
        ep.from_json(doc)


def test_is_integral_polynomial():
    assert ep.is_integral_polynomial(poly(1, 2, 3))
    assert not ep.is_integral_polynomial(poly(Fraction(1, 2)))
    assert not ep.is_integral_polynomial(poly(1, start=-1))
    assert ep.coefficients(poly(1, 2), 0, 4) == [1, 2, 0, 0]


COEFFS = range(-2, 3)
LINEAR = [poly(a, b) for a, b in product(COEFFS, repeat=2)]


def random_cubics(count, seed=0):
    rng = random.Random(seed)
    return [poly(*(rng.choice(COEFFS) for _ in range(4)), start=rng.randint(-2, 2)) for _ in range(count)]


def check_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ep.ZERO == a
    assert a * ep.ONE == a
    assert a + ep.negate(a) == ep.ZERO


def test_ring_axioms_on_linear_polynomials():
    for a, b, c in product(LINEAR, repeat=3):
        check_ring_axioms(a, b, c)


def test_ring_axioms_on_cubics():
    pool = random_cubics(60)
    for a, b, c in zip(pool, pool[1:] + pool[:1], pool[2:] + pool[:2]):
        check_ring_axioms(a, b, c)


def test_exact_div_inverts_multiplication():
    pool = random_cubics(40, seed=1) + LINEAR
    for a, b in product(pool, pool[:20]):
        if b.is_zero():
            continue
        assert ep.exact_div(a * b, b) == a


@pytest.mark.parametrize("gamma", list(product(range(6), repeat=2)))
def test_phi_vec_degree_is_b_exponent(gamma):
    assert ep.degree(ep.phi_vec(gamma)) == ep.b_exponent(gamma)


@pytest.mark.parametrize("gamma", list(product(range(5), repeat=2)) + [(1, 2, 3), (4, 0, 2)])
def test_vector_reciprocal_identity(gamma):
    phi = ep.phi_vec(gamma)
    flipped = ep.shift(ep.substitute_inverse(phi), ep.b_exponent(gamma))
    assert ep.scale(flipped, (-1) ** sum(gamma)) == phi
