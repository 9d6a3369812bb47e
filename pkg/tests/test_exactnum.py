import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from thetabundle.errors import IncompatibleOrder, ZeroInversion
from thetabundle.exactnum import (
    Cyclotomic,
    RootOfUnity,
    cyclo_inv,
    cyclo_mul,
    cyclotomic_polynomial,
    euler_phi,
    format_rational,
    lift_order,
    parse_rational,
    zeta,
)

X = sympy.Symbol("x")


def as_poly(a: Cyclotomic) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(a.coeffs)], X, domain="QQ")


def from_poly_mod_phi(p: sympy.Poly, n: int) -> Cyclotomic:
    """Oracle reduction: work in Q[x]/(x^n - 1), then reduce mod Phi_n with sympy."""
    r = sympy.rem(p, sympy.Poly(sympy.cyclotomic_poly(n, X), X, domain="QQ"))
    coeffs = list(reversed(r.all_coeffs())) if not r.is_zero else []
    return Cyclotomic(n, [Fraction(int(c.p), int(c.q)) for c in coeffs])


def random_cyclo(rng: random.Random, n: int) -> Cyclotomic:
    return Cyclotomic(n, [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(euler_phi(n))])


cyclo_orders = st.integers(min_value=1, max_value=24)


@st.composite
def cyclotomics(draw, n=None):
    n = draw(cyclo_orders) if n is None else n
    fr = st.fractions(min_value=-6, max_value=6, max_denominator=5)
    return Cyclotomic(n, draw(st.lists(fr, min_size=euler_phi(n), max_size=euler_phi(n))))


@pytest.mark.parametrize("n", range(1, 40))
def test_cyclotomic_polynomial_matches_sympy(n):
    expected = sympy.Poly(sympy.cyclotomic_poly(n, X), X).all_coeffs()
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in reversed(expected)]
    assert euler_phi(n) == sympy.totient(n)


def test_i_squared_is_minus_one():
    i = zeta(4)
    assert cyclo_mul(i, i) == Cyclotomic.rational(-1, 4)


def test_product_against_redundant_representation():
    a = Cyclotomic.one(5) + zeta(5)
    b = Cyclotomic.one(5) + zeta(5, -1)
    # in Q[x]/(x^5 - 1): (1 + x)(1 + x^4) = 1 + x + x^4 + x^5 = 2 + x + x^4
    expected = from_poly_mod_phi(sympy.Poly(X**4 + X + 2, X, domain="QQ"), 5)
    assert cyclo_mul(a, b) == expected
    assert cyclo_mul(a, b) == Cyclotomic(5, [1, 0, -1, -1])


@pytest.mark.parametrize("n", [3, 5, 7, 8, 9, 12, 15, 20])
def test_products_against_sympy_oracle(n):
    rng = random.Random(n)
    for _ in range(20):
        a, b = random_cyclo(rng, n), random_cyclo(rng, n)
        assert cyclo_mul(a, b) == from_poly_mod_phi(as_poly(a) * as_poly(b), n)


def test_identity_product():
    rng = random.Random(1)
    x = random_cyclo(rng, 12)
    assert cyclo_mul(x, Cyclotomic.one(12)) == x


def test_inverse_examples():
    assert cyclo_inv(Cyclotomic.rational(2, 7)) == Cyclotomic.rational(Fraction(1, 2), 7)
    for n in (3, 4, 7, 12):
        assert cyclo_inv(zeta(n)) == zeta(n, n - 1)


def test_random_inverse_over_zeta12():
    rng = random.Random(12)
    for _ in range(50):
        a = random_cyclo(rng, 12)
        if a:
            assert cyclo_mul(a, cyclo_inv(a)) == Cyclotomic.one(12)


def test_zero_inversion():
    with pytest.raises(ZeroInversion):
        cyclo_inv(Cyclotomic.zero(6))
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.one(3) / 0


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_field_axioms(data):
    n = data.draw(cyclo_orders)
    a, b, c = (data.draw(cyclotomics(n)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    if a:
        assert a * a.inverse() == Cyclotomic.one(n)
        assert (b / a) * a == b


@pytest.mark.parametrize("n", range(1, 17))
def test_roots_of_unity_form_cyclic_group(n):
    elems = [RootOfUnity(n, k) for k in range(n)]
    for j, x in enumerate(elems):
        for k, y in enumerate(elems):
            assert x * y == RootOfUnity(n, j + k)
        assert x * x.inverse() == RootOfUnity.one()
    assert len({x.reduced() for x in elems}) == n


def test_embedding_is_multiplicative():
    for n in range(1, 13):
        for m in range(1, 13):
            for j in range(n):
                for k in range(m):
                    x, y = RootOfUnity(n, j), RootOfUnity(m, k)
                    assert (x * y).to_cyclotomic() == cyclo_mul(x.to_cyclotomic(), y.to_cyclotomic())


def test_lift_order():
    assert lift_order(RootOfUnity(2, 1), 4) == RootOfUnity(4, 2)
    assert lift_order(RootOfUnity(2, 1), 4).exp == 2
    x = RootOfUnity(6, 5)
    assert lift_order(x, 6).exp == 5
    with pytest.raises(IncompatibleOrder):
        lift_order(RootOfUnity(4, 1), 6)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.integers(-100, 100))
def test_lift_to_triple_order_preserves_value(n, k):
    x = RootOfUnity(n, k)
    y = lift_order(x, 3 * n)
    assert y.order == 3 * n and y == x and hash(y) == hash(x)
    assert y.to_cyclotomic() == x.to_cyclotomic()


def test_equality_across_orders():
    assert zeta(3) == zeta(12, 4)
    assert RootOfUnity(3, 1) != RootOfUnity(6, 1)
    assert Cyclotomic.root(6, 3) == Cyclotomic.rational(-1)


def test_as_root_of_unity():
    assert zeta(5, 2).as_root_of_unity() == RootOfUnity(5, 2)
    assert (-zeta(5)).as_root_of_unity() == RootOfUnity(10, 7)
    assert (Cyclotomic.one(5) * 2).as_root_of_unity() is None


def test_json_round_trip():
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert parse_rational("-3/4") == Fraction(-3, 4)
    a = Cyclotomic(8, [Fraction(1, 2), -1, 0, Fraction(7, 3)])
    assert Cyclotomic.from_json(a.to_json()) == a
    assert a.to_json()["coeffs"][0] == "1/2"
    r = RootOfUnity(9, 4)
    assert r.to_json() == {"order": 9, "exp": 4}
    assert RootOfUnity.from_json(r.to_json()) == r
