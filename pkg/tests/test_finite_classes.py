import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fregereals.axioms import FiniteClass, finite_class_check
from fregereals.formulas import evaluate_class
from fregereals.relations import NATURALS, Relation


def _random_relation(rng: random.Random, carrier: list[int]) -> frozenset:
    if rng.random() < 0.5:
        # a permutation of a random sub-carrier keeps functional cases common
        dom = [x for x in carrier if rng.random() < 0.7]
        img = dom[:]
        rng.shuffle(img)
        return frozenset(zip(dom, img))
    pairs = list(itertools.product(carrier, carrier))
    return frozenset(p for p in pairs if rng.random() < 0.25)


def random_class(seed: int) -> tuple[list[int], list[frozenset]]:
    rng = random.Random(seed)
    carrier = list(range(rng.randint(1, 4)))
    members = [_random_relation(rng, carrier) for _ in range(rng.randint(0, 3))]
    return carrier, members


def _checker(carrier, members):
    return finite_class_check(FiniteClass(tuple(carrier), tuple(Relation(NATURALS, pairs=m) for m in members)))


def test_empty_class_verdicts():
    assert _checker([0, 1], []) == {"L": True, "L*": True, "P": True, "P*": True, "M": True, "M*": True}


def test_empty_relation_class_verdicts():
    v = _checker([0, 1], [frozenset()])
    assert v["L"] is False and v["L*"] is True
    assert v["P*"] is True and v["M*"] is True and v["M"] is False


def test_oracle_on_known_classes():
    assert evaluate_class([0, 1], []) == _checker([0, 1], [])
    assert evaluate_class([0, 1], [frozenset()]) == _checker([0, 1], [frozenset()])


@pytest.mark.parametrize("seed", range(50))
def test_checker_agrees_with_quantifier_expansion(seed):
    carrier, members = random_class(seed)
    assert _checker(carrier, members) == evaluate_class(carrier, members)


pairs_on = st.integers(1, 3).flatmap(
    lambda n: st.tuples(
        st.just(list(range(n))),
        st.lists(st.frozensets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))), max_size=3),
    )
)


@settings(max_examples=60)
@given(pairs_on)
def test_checker_agrees_on_generated_classes(case):
    carrier, members = case
    assert _checker(carrier, members) == evaluate_class(carrier, members)


@given(pairs_on)
def test_starred_conditions_are_weaker(case):
    v = _checker(*case)
    assert not v["L"] or v["L*"]
    assert not v["P"] or v["L"]
    assert not v["P*"] or v["L*"]


def test_pairs_outside_carrier_rejected():
    with pytest.raises(ValueError):
        FiniteClass((0,), (Relation(NATURALS, pairs=[(0, 1)]),))
