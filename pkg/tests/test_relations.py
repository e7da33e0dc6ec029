from fractions import Fraction

import pytest
from hypothesis import given

from conftest import rationals
from fregereals.domains import RationalTranslations
from fregereals.kasol import block_swap
from fregereals.relations import (
    NATURALS,
    RATIONALS,
    CarrierMismatch,
    Relation,
    compose,
    compose_rel,
    empty_relation,
    empty_relation_laws,
    identity,
    invert,
    invert_rel,
    is_functional,
    pointwise_equal,
    relation_from_json,
    relation_to_json,
)

F = Fraction
T = RationalTranslations().element


def test_composition_examples():
    assert compose(T(F(1, 2)), T(F(1, 3))).fwd(F(0)) == F(5, 6)
    assert invert(T(F(1, 2))).fwd(F(1, 2)) == 0
    pi = block_swap()
    assert compose(pi, pi).fwd(2) == 2


def test_compose_applies_left_first():
    double = compose(T(F(1)), T(F(0)))
    assert double.fwd(F(3)) == 4
    swap = block_swap()
    shift = compose(swap, invert(swap))
    assert all(shift.fwd(n) == n for n in range(50))


def test_carrier_mismatch():
    with pytest.raises(CarrierMismatch):
        compose(T(F(1)), block_swap())


@given(rationals(), rationals(), rationals())
def test_group_laws(a, b, c):
    pts = RATIONALS.sample(0, 10)
    r, s, t = T(a), T(b), T(c)
    assert pointwise_equal(compose(compose(r, s), t), compose(r, compose(s, t)), pts)
    assert pointwise_equal(compose(r, identity(RATIONALS)), r, pts)
    assert pointwise_equal(compose(r, invert(r)), identity(RATIONALS), pts)


def test_functionality():
    assert not is_functional(Relation(NATURALS, pairs=[(0, 1), (0, 2)]))
    assert is_functional(empty_relation(NATURALS))
    assert is_functional(T(F(3)), RATIONALS.sample(1, 20))


def test_empty_relation_coincidences():
    laws = empty_relation_laws(NATURALS, [Relation(NATURALS, pairs=[(0, 1), (2, 3)])])
    assert all(laws.values()), laws
    v = empty_relation(NATURALS)
    assert invert_rel(v) == v
    assert compose_rel(v, invert_rel(v)) == v


def test_finite_relation_algebra():
    r = Relation(NATURALS, pairs=[(0, 1), (1, 2)])
    s = Relation(NATURALS, pairs=[(1, 5), (2, 6)])
    assert compose_rel(r, s) == Relation(NATURALS, pairs=[(0, 5), (1, 6)])
    assert invert_rel(r) == Relation(NATURALS, pairs=[(1, 0), (2, 1)])


def test_json_round_trip():
    r = Relation(RATIONALS, pairs=[(F(1, 2), F(-3)), (F(0), F(7, 5))])
    assert relation_from_json(relation_to_json(r)) == r
    assert relation_to_json(r) == relation_to_json(relation_from_json(relation_to_json(r)))
