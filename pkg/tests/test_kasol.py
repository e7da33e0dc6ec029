import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fregereals.kasol import (
    PartitionIndex,
    SupportMap,
    block_swap,
    count_c,
    embed,
    enum_c,
    rank,
    rho,
    separating_point,
    theta,
    theta_inv,
    unrank,
)
from fregereals.relations import compose, invert

F = Fraction


def _rho_oracle(n: int) -> int:
    # trial division, independent of the module's search
    if n < 2:
        return 0
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return p if m == 1 else 0
        p += 1
    return m  # n itself is prime


def _blocks(limit: int) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for n in range(limit):
        out.setdefault(_rho_oracle(n), []).append(n)
    return out


def _swap_oracle(limit: int) -> dict[int, int]:
    table = {}
    for members in _blocks(limit).values():
        for a, b in zip(members[0::2], members[1::2]):
            table[a], table[b] = b, a
    return table


def _positive_listing(height: int) -> list[Fraction]:
    out = []
    for h in range(1, height + 1):
        low = [F(a, h) for a in range(1, h) if math.gcd(a, h) == 1]
        out += low + sorted(F(h, b) for b in range(1, h + 1) if math.gcd(b, h) == 1)
    return out


def test_partition_examples():
    assert rho(0) == 0 and rho(1) == 0
    assert rho(8) == 2 and rho(7) == 7
    assert rho(12) == 0
    assert enum_c(2, 1) == 2 and enum_c(2, 2) == 4
    assert enum_c(0, 3) == 6
    assert enum_c(3, 4) == 81
    with pytest.raises(ValueError):
        PartitionIndex(4)


def test_rho_matches_trial_division():
    assert all(rho(n) == _rho_oracle(n) for n in range(3000))


def test_enum_and_count_match_blocks():
    blocks = _blocks(3000)
    for i, members in blocks.items():
        for j, n in enumerate(members[:200], start=1):
            assert enum_c(i, j) == n
            assert count_c(i, n) == j


def test_block_swap_examples():
    pi = block_swap()
    assert pi.fwd(0) == 1 and pi.fwd(1) == 0
    assert pi.fwd(2) == 4
    assert [pi.fwd(n) for n in range(20)] == [1, 0, 4, 9, 2, 25, 10, 49, 16, 3, 6, 121, 14, 169, 12, 18, 8, 289, 15, 361]


def test_block_swap_matches_pairing():
    pi = block_swap()
    table = _swap_oracle(5000)
    for n in range(2000):
        if n in table:
            assert pi.fwd(n) == table[n]
        assert pi.fwd(pi.fwd(n)) == n


def test_rank_matches_listing():
    listing = _positive_listing(40)
    assert rank(0) == 1 and unrank(1) == 0
    for k, q in enumerate(listing, start=1):
        assert rank(q) == 2 * k
        assert rank(-q) == 2 * k + 1
        assert unrank(2 * k) == q


@given(st.integers(1, 10**6))
def test_rank_bijective(r):
    assert rank(unrank(r)) == r


def test_theta_examples():
    assert theta(2, unrank(1)) == 2
    assert theta_inv(3, theta(3, F(-5, 7))) == F(-5, 7)
    with pytest.raises(ValueError):
        theta_inv(2, 9)


supports = st.dictionaries(
    st.sampled_from([2, 3, 5, 7, 11, 13]),
    st.builds(F, st.integers(-9, 9), st.integers(1, 6)),
    max_size=3,
).map(SupportMap)


@given(supports, supports, st.lists(st.integers(0, 10**5), min_size=5, max_size=20))
def test_embed_homomorphism(f, g, extra):
    pts = extra + [theta(p, F(k, 3)) for p in (2, 3, 5) for k in range(-4, 5)]
    lhs, rhs = embed(f + g), compose(embed(f), embed(g))
    assert all(lhs.fwd(n) == rhs.fwd(n) for n in pts)
    inv = invert(embed(f))
    assert all(inv.fwd(embed(f).fwd(n)) == n for n in pts)
    assert all(embed(-f).fwd(n) == inv.fwd(n) for n in pts)


@given(supports, supports)
def test_injectivity_witness(f, g):
    w = separating_point(f, g)
    if f == g:
        assert w is None
    else:
        assert embed(f).fwd(w) != embed(g).fwd(w)


def test_embed_fixes_points_outside_support():
    e = embed(SupportMap({2: 1}))
    assert all(e.fwd(n) == n for n in (0, 1, 3, 6, 9, 10, 25, 27))
    assert embed(SupportMap()).fwd(17) == 17


def test_support_map_json():
    f = SupportMap.from_json('{"2": "1/2", "3": "-1", "5": "0"}')
    assert f == {2: F(1, 2), 3: F(-1)}
    assert SupportMap.from_json(f.to_json()) == f
    with pytest.raises(ValueError):
        SupportMap.from_json('{"4": "1"}')
