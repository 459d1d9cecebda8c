from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from ellipack.arith import (
    Surd,
    continued_fraction,
    evaluate_continued_fraction,
    farey_parents,
    format_number,
    is_farey_adjacent,
    mediant,
    parse_number,
    parse_rational,
    sqrt_exact,
)


def test_mediant_examples():
    assert mediant(Fraction(0), Fraction(1)) == Fraction(1, 2)
    assert mediant(Fraction(3, 5), Fraction(7, 12)) == Fraction(10, 17)
    assert mediant(Fraction(1, 2), Fraction(1)) == Fraction(2, 3)


def test_mediant_rejects_non_neighbours():
    with pytest.raises(ValueError):
        mediant(Fraction(1, 3), Fraction(2, 3))


def test_farey_parents_examples():
    assert farey_parents(Fraction(10, 17)) == (Fraction(3, 5), Fraction(7, 12))
    assert farey_parents(Fraction(1, 2)) == (Fraction(0), Fraction(1))
    # ordered by denominator: 5 < 7
    assert farey_parents(Fraction(7, 12)) == (Fraction(3, 5), Fraction(4, 7))


@pytest.mark.parametrize("f", [Fraction(0), Fraction(1)])
def test_farey_parents_endpoints(f):
    with pytest.raises(ValueError):
        farey_parents(f)


def test_farey_parents_large_denominator():
    a, b = farey_parents(Fraction(1, 10 ** 12))
    assert (a, b) == (Fraction(0), Fraction(1, 10 ** 12 - 1))


def _farey_pairs():
    # walk down the Stern-Brocot tree by random left/right choices
    @st.composite
    def build(draw):
        lo, hi = Fraction(0), Fraction(1)
        for go_left in draw(st.lists(st.booleans(), max_size=25)):
            mid = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
            if go_left:
                hi = mid
            else:
                lo = mid
        return lo, hi
    return build()


@given(_farey_pairs())
def test_mediant_adjacent_and_parents_inverse(pair):
    a, b = pair
    assert is_farey_adjacent(a, b)
    c = mediant(a, b)
    assert is_farey_adjacent(a, c) and is_farey_adjacent(c, b)
    assert set(farey_parents(c)) == {a, b}
    p, q = farey_parents(c)
    assert p.denominator <= q.denominator


def test_continued_fraction_examples():
    assert continued_fraction(Fraction(5, 3)) == [1, 1, 2]
    assert continued_fraction(Fraction(12, 7)) == [1, 1, 2, 2]
    assert continued_fraction(7) == [7]
    with pytest.raises(ValueError):
        continued_fraction(Fraction(-2))
    with pytest.raises(ValueError):
        continued_fraction(0)


@given(st.integers(1, 10 ** 9), st.integers(1, 10 ** 9))
def test_continued_fraction_roundtrip(p, q):
    x = Fraction(max(p, q), min(p, q))
    terms = continued_fraction(x)
    assert all(t > 0 for t in terms)
    assert evaluate_continued_fraction(terms) == x


big = st.fractions(max_denominator=10 ** 30)


@given(big, big)
def test_rational_exactness(a, b):
    assert (a + b) - b == a
    assert gcd(a.numerator, a.denominator) == 1 and a.denominator > 0


def test_parse_and_format():
    assert parse_rational("6/5") == Fraction(6, 5)
    assert parse_rational(" -3 ") == -3
    assert format_number(Fraction(4, 2)) == "2"
    assert format_number(Fraction(-1, 3)) == "-1/3"
    for bad in ("1.5", "1/0", "a/b", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)


class TestSurd:
    def test_sqrt_exact(self):
        assert sqrt_exact(Fraction(4, 9)) == Fraction(2, 3)
        r = sqrt_exact(Fraction(1, 10))
        assert isinstance(r, Surd) and r * r == Fraction(1, 10)
        assert str(r) == "1/10*sqrt(10)"

    def test_parse_roundtrip(self):
        x = parse_number("11/10*sqrt(5)")
        assert x * x == Fraction(121, 20)
        assert parse_number(str(x)) == x
        assert parse_number("sqrt(8)") == 2 * sqrt_exact(2)

    def test_order_against_rationals(self):
        r5 = sqrt_exact(5)
        assert Fraction(11, 5) < r5 < Fraction(9, 4)
        assert 2 - r5 < 0 < r5 - 2
        assert Fraction(5, 2) > Fraction(11, 10) * r5

    def test_division_rationalises(self):
        r5 = sqrt_exact(5)
        x = 1 / (Fraction(11, 10) * r5)
        assert x == Fraction(2, 11) * r5
        assert (1 + r5) * (1 - r5) == -4

    @given(st.fractions(min_value=-100, max_value=100, max_denominator=50),
           st.fractions(min_value=-100, max_value=100, max_denominator=50),
           st.sampled_from([2, 3, 5, 6, 7, 10]))
    def test_sign_matches_float(self, a, b, r):
        x = Surd.make(a, b, r)
        f = float(a) + float(b) * r ** 0.5
        if abs(f) > 1e-9:
            assert (x > 0) == (f > 0)
