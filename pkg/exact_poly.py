"""
Exact Laurent polynomials in one variable q with rational coefficients
Also provides the phi / b functions consumed by Hua's formula
"""

import logging
from fractions import Fraction
from functools import lru_cache

from errors import InputError, NonExactDivision

logger = logging.getLogger(__name__)


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InputError(f"Coefficient must be an int, Fraction or rational string, got {value!r}")


class LaurentPolynomial:
    """
    Finitely supported map exponent -> nonzero Fraction

    Instances are immutable; every operation returns a new polynomial in
    canonical form (no stored zero coefficients).
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for exponent, coeff in (terms or {}).items():
            if not isinstance(exponent, int):
                raise InputError(f"Exponent must be an integer, got {exponent!r}")
            c = _as_fraction(coeff)
            if c:
                clean[exponent] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    @property
    def terms(self):
        """Sorted list of (exponent, coefficient) pairs"""
        return sorted(self._terms.items())

    def coefficient(self, exponent):
        return self._terms.get(exponent, Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPolynomial({render(self)!r})"

    def __str__(self):
        return render(self)

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, negate(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), negate(self))

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __call__(self, r):
        return eval_at(self, r)


def _coerce(value):
    if isinstance(value, LaurentPolynomial):
        return value
    return LaurentPolynomial.constant(_as_fraction(value))


ZERO = LaurentPolynomial()
ONE = LaurentPolynomial.constant(1)
Q = LaurentPolynomial.monomial(1)


def add(a, b):
    terms = dict(a._terms)
    for e, c in b._terms.items():
        terms[e] = terms.get(e, 0) + c
    return LaurentPolynomial(terms)


def negate(a):
    return LaurentPolynomial({e: -c for e, c in a._terms.items()})


def scale(a, factor):
    factor = _as_fraction(factor)
    return LaurentPolynomial({e: c * factor for e, c in a._terms.items()})


def mul(a, b):
    terms = {}
    for e1, c1 in a._terms.items():
        for e2, c2 in b._terms.items():
            terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
    return LaurentPolynomial(terms)


def shift(p, k):
    """Multiply by q**k"""
    return LaurentPolynomial({e + k: c for e, c in p._terms.items()})


def degree(p):
    if p.is_zero():
        raise InputError("Degree of the zero polynomial is undefined")
    return max(p._terms)


def valuation(p):
    if p.is_zero():
        raise InputError("Valuation of the zero polynomial is undefined")
    return min(p._terms)


def leading_coefficient(p):
    return p._terms[degree(p)]


def eval_at(p, r):
    """Substitute q = r exactly; r must be a nonzero rational when p has negative exponents"""
    r = _as_fraction(r)
    if r == 0 and p._terms and valuation(p) < 0:
        raise InputError("Cannot evaluate a Laurent polynomial with negative exponents at 0")
    return sum((c * r ** e for e, c in p._terms.items()), Fraction(0))


def exact_div(a, b):
    """
    Divide a by b in the Laurent polynomial ring

    Args:
        a: dividend
        b: nonzero divisor

    Returns:
        c with a == b * c

    Raises:
        NonExactDivision when b does not divide a
    """
    if b.is_zero():
        raise InputError("Division by the zero polynomial")
    if a.is_zero():
        return ZERO
    # strip monomial factors; what remains has nonzero constant terms
    va, vb = valuation(a), valuation(b)
    rem = {e - va: c for e, c in a._terms.items()}
    divisor = {e - vb: c for e, c in b._terms.items()}
    top = max(divisor)
    lead = divisor[top]
    quotient = {}
    while rem and max(rem) >= top:
        d = max(rem)
        c = rem[d] / lead
        e = d - top
        quotient[e] = c
        for k, v in divisor.items():
            nv = rem.get(k + e, 0) - c * v
            if nv:
                rem[k + e] = nv
            else:
                rem.pop(k + e, None)
    if rem:
        raise NonExactDivision(f"({render(a)}) is not divisible by ({render(b)})")
    return shift(LaurentPolynomial(quotient), va - vb)


@lru_cache(maxsize=None)
def phi_int(m):
    """phi_m(q) = (1 - q)(1 - q^2)...(1 - q^m)"""
    if m < 0:
        raise InputError(f"phi_int needs m >= 0, got {m}")
    result = ONE
    for j in range(1, m + 1):
        result = mul(result, LaurentPolynomial({0: 1, j: -1}))
    return result


@lru_cache(maxsize=None)
def _phi_tuple(beta):
    result = ONE
    for m in beta:
        result = mul(result, phi_int(m))
    return result


def phi_vec(beta):
    """Product of phi_int over the coordinates of beta"""
    beta = tuple(beta)
    if any(m < 0 for m in beta):
        raise InputError(f"phi_vec needs a nonnegative vector, got {beta}")
    return _phi_tuple(beta)


def b_exponent(gamma):
    """b(gamma) = sum of gamma_i (gamma_i + 1) / 2"""
    if any(g < 0 for g in gamma):
        raise InputError(f"b_exponent needs a nonnegative vector, got {tuple(gamma)}")
    return sum(g * (g + 1) // 2 for g in gamma)


def monomial_reciprocal_phi(m):
    """
    Sign and exponent relating 1/phi_m(q^-1) to 1/phi_m(q)

    1/phi_m(q^-1) = sign * q^exponent / phi_m(q)
    """
    if m < 0:
        raise InputError(f"monomial_reciprocal_phi needs m >= 0, got {m}")
    return (-1) ** m, m * (m + 1) // 2


def substitute_inverse(p):
    """p(q^-1)"""
    return LaurentPolynomial({-e: c for e, c in p._terms.items()})


def render(p):
    """Canonical text: 'c*q^e' terms in increasing exponent order joined by ' + '"""
    if p.is_zero():
        return "0"
    return " + ".join(f"{c}*q^{e}" for e, c in p.terms)


def to_json(p):
    """PolynomialJSON dictionary"""
    return {
        "terms": [[e, str(c)] for e, c in p.terms],
        "degree": None if p.is_zero() else degree(p),
    }


def from_json(doc):
    """Rebuild a polynomial from its PolynomialJSON dictionary"""
    try:
        pairs = doc["terms"]
        terms = {}
        last = None
        for exponent, coeff in pairs:
            if not isinstance(exponent, int) or (last is not None and exponent <= last):
                raise InputError("PolynomialJSON exponents must be strictly increasing integers")
            c = Fraction(coeff)
            if not c:
                raise InputError("PolynomialJSON must not store zero coefficients")
            terms[exponent] = c
            last = exponent
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"Malformed PolynomialJSON: {e}")
    return LaurentPolynomial(terms)


def coefficients(p, start, stop):
    """Coefficients of q^start .. q^(stop-1) as a list"""
    return [p.coefficient(e) for e in range(start, stop)]


def is_integral_polynomial(p):
    """True when every exponent is >= 0 and every coefficient an integer"""
    return all(e >= 0 and c.denominator == 1 for e, c in p._terms.items())
