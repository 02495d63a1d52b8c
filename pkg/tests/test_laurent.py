import pytest
from hypothesis import given
from hypothesis import strategies as st

from soergel.laurent import LaurentPoly, laurent

V = LaurentPoly.monomial(1)
VI = LaurentPoly.monomial(-1)

polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)


def test_inverse_pair():
    assert V * VI == LaurentPoly.const(1)


def test_difference_of_squares():
    assert (V + 1) * (V - 1) == LaurentPoly({2: 1, 0: -1})


def test_symmetric_square():
    assert (VI + V) * (VI + V) == LaurentPoly({-2: 1, 0: 2, 2: 1})


@pytest.mark.parametrize("a, expected", [
    (V, VI),
    (LaurentPoly.const(1), LaurentPoly.const(1)),
    (LaurentPoly({2: 1, -1: 3}), LaurentPoly({-2: 1, 1: 3})),
])
def test_bar_values(a, expected):
    assert a.bar() == expected


def test_selfdual_and_nonneg_flags():
    assert (V + VI).is_selfdual()
    assert not V.is_selfdual()
    assert not LaurentPoly({2: 1, 0: -1}).is_nonneg()
    assert (V + 3).is_nonneg()


def test_canonical_string():
    p = LaurentPoly({0: 3, -2: 1})
    assert str(p) == "1*v^-2 + 3*v^0"
    assert str(LaurentPoly()) == "0"
    assert str(LaurentPoly({1: -2})) == "-2*v^1"


def test_zero_coefficients_are_dropped():
    p = LaurentPoly({3: 0, 1: 2})
    assert p.exponents() == [1]
    assert (p - p).is_zero()


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        LaurentPoly.parse("v^2 + 1")
    with pytest.raises(ValueError):
        LaurentPoly.parse("1*v^1 + 2*v^1")


def test_coercion():
    assert laurent(3) == LaurentPoly.const(3)
    with pytest.raises(TypeError):
        laurent(1.5)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(polys, polys)
def test_bar_is_ring_automorphism(a, b):
    assert (a * b).bar() == a.bar() * b.bar()
    assert (a + b).bar() == a.bar() + b.bar()
    assert a.bar().bar() == a


@given(polys)
def test_string_round_trip(a):
    assert LaurentPoly.parse(str(a)) == a
    assert hash(LaurentPoly.parse(str(a))) == hash(a)


@given(polys, st.integers(-4, 4))
def test_shift_is_multiplication_by_monomial(a, n):
    assert a.shift(n) == a * LaurentPoly.monomial(n)


@given(polys)
def test_evaluate_matches_terms(a):
    assert a.evaluate(2) * 2 ** 6 == sum(c * 2 ** (e + 6) for e, c in a.terms())
