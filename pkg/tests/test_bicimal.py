from fractions import Fraction

import pytest
from hypothesis import given

from conftest import rationals
from fregereals.bicimal import (
    ZERO,
    BicimalPair,
    NonCanonical,
    bp_add,
    bp_cmp,
    bp_neg,
    decode,
    encode,
    translation,
)
from fregereals.exactnum import Ordering
from fregereals.relations import compose, pointwise_equal

F = Fraction


def _series_value(pair: BicimalPair, bits: int) -> Fraction:
    # independent oracle: truncated binary expansion of the fraction bits
    return sum((F(pair.bit(j), 2**j) for j in range(1, bits + 1)), F(0))


def test_decode_examples():
    assert decode(BicimalPair.from_bits(True, 0, "", "01")) == F(1, 3)
    assert decode(BicimalPair.from_bits(False, 1, "0", "1")) == F(-1, 2)
    assert decode(BicimalPair.from_bits(False, 0, "", "1")) == 0


def test_encode_examples():
    one = encode(1)
    assert (one.sign0, one.n, one.preperiod, one.period) == (True, 0, "", "1")
    half = encode(F(-1, 2))
    assert (half.sign0, half.n, half.preperiod, half.period) == (False, 1, "0", "1")
    assert encode(0) == ZERO
    assert (ZERO.sign0, ZERO.n, ZERO.period) == (False, 0, "1")


def test_addition_examples():
    assert bp_add(encode(F(1, 3)), encode(F(1, 6))) == encode(F(1, 2))
    assert bp_add(encode(F(5, 7)), ZERO) == encode(F(5, 7))
    assert bp_add(encode(F(1, 2)), encode(F(-1, 2))) == ZERO


def test_order_examples():
    assert bp_cmp(encode(F(-1, 2)), ZERO) is Ordering.LESS
    assert bp_cmp(encode(F(1, 3)), encode(F(1, 2))) is Ordering.LESS
    assert bp_cmp(encode(F(2, 3)), encode(F(2, 3))) is Ordering.EQUAL


def test_translation_example():
    assert translation(encode(F(1, 3))).fwd(encode(F(1, 6))) == encode(F(1, 2))


def test_non_canonical_rejected():
    with pytest.raises(NonCanonical):
        BicimalPair.from_bits(True, 0, "", "0")
    with pytest.raises(NonCanonical):
        BicimalPair.from_bits(True, 0, "", "11")  # period not minimal
    with pytest.raises(NonCanonical):
        BicimalPair(False, 0, F(1, 2))


@given(rationals())
def test_round_trip(q):
    p = encode(q)
    assert decode(p) == q
    assert BicimalPair.from_text(p.to_text()) == p
    assert BicimalPair.from_json(p.to_json()) == p


@given(rationals(1000, 1000))
def test_bits_follow_expansion(q):
    p = encode(q)
    n = 40
    tail = p.frac - _series_value(p, n)
    assert 0 < tail <= F(1, 2**n)  # non-terminating expansion: tail is never zero


@given(rationals(), rationals())
def test_additive_and_ordered(a, b):
    pa, pb = encode(a), encode(b)
    assert decode(bp_add(pa, pb)) == a + b
    assert decode(bp_neg(pa)) == -a
    expected = Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL
    assert bp_cmp(pa, pb) is expected


@given(rationals(1000, 1000), rationals(1000, 1000))
def test_translation_law(a, b):
    pts = [encode(F(k, 7)) for k in range(-5, 6)]
    lhs = compose(translation(encode(a)), translation(encode(b)))
    assert pointwise_equal(lhs, translation(encode(a + b)), pts)
