import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import positive_rationals, rationals
from fregereals.axioms import Indeterminate
from fregereals.domains import BicimalTranslations, DyadicTranslations, RationalTranslations, StreamTranslations
from fregereals.euclid import (
    NOT_MULTIPLE,
    CFPrefix,
    Equal,
    Found,
    NotEqual,
    NotMultipleError,
    Ratio,
    RatioCase,
    continued_fraction,
    equimultiple_search,
    is_real,
    make_ratio,
    multiple_index,
    ratio_compare,
    ratio_equal,
    same_multiple,
)
from fregereals.exactnum import Ordering, rat_cmp, stream_sqrt

F = Fraction
RAT, BIC, STR = RationalTranslations(), BicimalTranslations(), StreamTranslations()
T, B = RAT.element, BIC.element


def _int_cf(a: int, b: int) -> list[int]:
    out = []
    while b:
        out.append(a // b)
        a, b = b, a % b
    return out


def test_multiple_examples():
    assert multiple_index(RAT, T(F(1, 3)), T(1)) == Found(multiple_index(RAT, T(F(1, 3)), T(1)).witness)
    assert multiple_index(RAT, T(F(1, 3)), T(1)).witness.k == 3
    assert multiple_index(RAT, T(F(1, 3)), T(F(1, 2))) is NOT_MULTIPLE
    assert multiple_index(RAT, T(F(2, 7)), T(F(2, 7))).witness.k == 1


def test_same_multiple_examples():
    assert same_multiple(RAT, T(F(1, 3)), T(1), BIC, B(F(1, 4)), B(F(3, 4))) is True
    assert same_multiple(RAT, T(F(1, 3)), T(1), RAT, T(F(1, 2)), T(1)) is False
    assert same_multiple(RAT, T(F(1, 5)), T(F(1, 5)), BIC, B(F(3)), B(F(3))) is True
    with pytest.raises(NotMultipleError):
        same_multiple(RAT, T(F(1, 3)), T(F(1, 2)), RAT, T(1), T(2))


def test_ratio_equal_examples():
    assert ratio_equal(RAT, T(F(2, 3)), T(F(1, 3)), BIC, B(F(4, 6)), B(F(2, 6))) == Equal()
    assert ratio_equal(RAT, RAT.zero, T(F(1, 2)), BIC, BIC.zero, B(F(5))) == Equal()
    res = ratio_equal(RAT, T(F(-1, 2)), T(1), RAT, T(F(1, 2)), T(1))
    assert isinstance(res, NotEqual) and "sign case" in res.witness


def test_ratio_compare_examples():
    assert ratio_compare(RAT, T(F(1, 3)), T(1), RAT, T(F(1, 2)), T(1)) is Ordering.LESS
    x = (RAT, T(F(5, 9)), T(F(2, 3)))
    assert ratio_compare(*x, *x) is Ordering.EQUAL
    assert ratio_compare(STR, STR.element(stream_sqrt(2)), STR.element(1),
                         STR, STR.element(F(3, 2)), STR.element(1), 64) is Ordering.LESS


def _oracle_equal(a, b, c, d) -> bool:
    # a:b against c:d with b, d > 0; sign cases first, then cross-multiplication
    sa, sc = (a > 0) - (a < 0), (c > 0) - (c < 0)
    return sa == sc and a * d == c * b


quads = st.tuples(rationals(50, 20), positive_rationals(50, 20), rationals(50, 20), positive_rationals(50, 20))


@given(quads)
def test_ratio_equal_matches_cross_multiplication(q):
    a, b, c, d = q
    res = ratio_equal(RAT, T(a), T(b), BIC, B(c), B(d))
    assert isinstance(res, Equal) == _oracle_equal(a, b, c, d)
    if isinstance(res, NotEqual) and res.pair:
        m, n = res.pair
        # the witness pair really separates the two sides
        assert rat_cmp(m * abs(a), n * b) is not rat_cmp(m * abs(c), n * d)


@given(st.tuples(positive_rationals(30, 30), positive_rationals(30, 30)),
       st.tuples(positive_rationals(30, 30), positive_rationals(30, 30)))
def test_stern_brocot_matches_exact(x, y):
    a, b = x
    c, d = y
    side = lambda p, q: (lambda m, n: rat_cmp(m * p, n * q))  # noqa: E731
    res = equimultiple_search(side(a, b), side(c, d), 10**4)
    assert isinstance(res, Equal) == (a * d == b * c)
    assert not isinstance(res, Indeterminate)


def test_ep_equivalence_across_domains():
    rng = random.Random(0)
    models = [RAT, BIC, DyadicTranslations()]
    values = [F(1), F(2), F(1, 2), F(3, 4), F(-1), F(0), F(3, 2)]

    def sample():
        d = rng.choice(models)
        s = F(1, 2 ** rng.randint(0, 3))
        return d, d.element(rng.choice(values) * s), d.element(s)

    def eq(x, y):
        return isinstance(ratio_equal(*x, *y), Equal)

    for _ in range(300):
        x, y, z = sample(), sample(), sample()
        assert eq(x, x)
        assert eq(x, y) == eq(y, x)
        if eq(x, y) and eq(y, z):
            assert eq(x, z)


@given(positive_rationals(1000, 1000))
def test_cross_domain_identity(q):
    p = q * 3
    ra = make_ratio(RAT, T(p), T(q))
    rb = make_ratio(BIC, B(p), B(q))
    assert (ra.case, ra.value) == (rb.case, rb.value)
    assert isinstance(ratio_equal(RAT, T(p), T(q), BIC, B(p), B(q)), Equal)


def test_cf_examples():
    assert continued_fraction(RAT, T(7), T(3)).terms == (2, 3)
    assert continued_fraction(RAT, T(2), T(1)).terms == (2,)
    root = continued_fraction(STR, STR.element(stream_sqrt(2)), STR.element(1), 8, 64)
    assert root.terms == (1, 2, 2, 2, 2, 2, 2, 2) and not root.indeterminate
    assert root.precision <= 64


@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_cf_matches_integer_euclid(a, b):
    assert list(continued_fraction(RAT, T(a), T(b), 64).terms) == _int_cf(a, b)[:64]


@given(positive_rationals(), positive_rationals())
def test_stream_cf_matches_exact_cf(p, q):
    exact = continued_fraction(RAT, T(p), T(q), 6)
    streamed = continued_fraction(STR, STR.element(p), STR.element(q), 6, 256)
    assert streamed.terms == exact.terms[: len(streamed.terms)]


def test_cf_fuel_exhaustion_flags_prefix():
    short = continued_fraction(STR, STR.element(stream_sqrt(2)), STR.element(1), 8, 4)
    assert short.indeterminate and len(short.terms) < 8


def test_is_real():
    assert is_real(make_ratio(RAT, T(F(2, 3)), T(F(1, 3))))
    assert is_real(make_ratio(RAT, RAT.zero, T(1)))
    assert is_real(make_ratio(STR, STR.element(stream_sqrt(2)), STR.element(1)))
    bad = Ratio.from_json('{"case": "Zero", "value": "1/2", "models": ["rational-translations"]}')
    assert not is_real(bad)
    assert not is_real(Ratio(RatioCase.POSITIVE, F(1, 2), ()))


def test_ratio_json_round_trip():
    x = make_ratio(STR, STR.element(stream_sqrt(3)), STR.element(1))
    assert Ratio.from_json(x.to_json()) == x
    y = make_ratio(RAT, T(F(-4, 3)), T(F(1, 3)))
    assert y.case is RatioCase.NEGATIVE and y.value == 4
    assert Ratio.from_json(y.to_json()) == y
    assert isinstance(x.value, CFPrefix)
