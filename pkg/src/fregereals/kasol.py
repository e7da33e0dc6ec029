"""Constructive core of the Karrass-Solitar embedding into Sym(N).

N is partitioned into ``C_0`` (0, 1 and the numbers that are not positive
prime powers) and, for each prime ``p``, ``C_p = {p, p**2, ...}``.  A
finitely supported family of rationals ``{p: q_p}`` acts on ``C_p`` by
transporting the translation ``x -> q_p + x`` of Q along a fixed bijection
``theta_p: Q -> C_p``; every other point is fixed.
"""

from __future__ import annotations

import bisect
import json
import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from sympy import integer_nthroot, isprime, primepi

from .exactnum import format_rational, parse_rational
from .relations import NATURALS, Permutation, compose

__all__ = [
    "PartitionIndex", "SupportMap", "rho", "enum_c", "count_c", "rank", "unrank",
    "theta", "theta_inv", "block_swap", "embed", "separating_point",
]

_SMALL_PRIMES = [p for p in range(2, 1000) if isprime(p)]


class PartitionIndex(int):
    """0 or a prime."""

    def __new__(cls, value: int):
        value = int(value)
        if value != 0 and not isprime(value):
            raise ValueError(f"{value} is neither 0 nor a prime")
        return super().__new__(cls, value)


def _ilog(n: int, p: int) -> int | None:
    """k with p**k == n, or None."""
    k = max(1, round(n.bit_length() / math.log2(p)))
    for cand in (k - 1, k, k + 1):
        if cand >= 1 and p**cand == n:
            return cand
    return None


@lru_cache(maxsize=65536)
def _rho(n: int) -> int:
    if n < 2:
        return 0
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return p if _ilog(n, p) is not None else 0
        if p * p > n:
            return n  # no factor below sqrt(n): n is prime
    # no small factor; n = b**e with b prime, or not a prime power
    for e in range(n.bit_length() // 9 + 1, 0, -1):
        b, exact = integer_nthroot(n, e)
        if exact and b > 1:
            return b if isprime(b) else 0
    return 0


def _trusted(v: int) -> PartitionIndex:
    return int.__new__(PartitionIndex, v)


def rho(n: int) -> PartitionIndex:
    if n < 0:
        raise ValueError("rho is defined on natural numbers")
    return _trusted(_rho(n))


def _prime_power_count(x: int) -> int:
    """Number of p**k <= x with k >= 1."""
    total, k = 0, 1
    while (1 << k) <= x:
        total += int(primepi(integer_nthroot(x, k)[0]))
        k += 1
    return total


def count_c(i: int, n: int) -> int:
    """Number of elements of C_i that are <= n."""
    if n < 0:
        return 0
    if i == 0:
        return n + 1 - _prime_power_count(n)
    return _ilog_floor(n, i)


def _ilog_floor(n: int, p: int) -> int:
    if n < p:
        return 0
    k = max(0, int(n.bit_length() / math.log2(p)) - 1)
    while p ** (k + 1) <= n:
        k += 1
    while p**k > n:
        k -= 1
    return k


def enum_c(i: int, j: int) -> int:
    """The j-th element (j >= 1) of C_i in increasing order."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if not isinstance(i, PartitionIndex):
        i = PartitionIndex(i)
    if i != 0:
        return int(i) ** j
    lo, hi = j - 1, 2 * j + 16
    while count_c(0, hi) < j:
        hi *= 2
    while lo < hi:  # least n with count_c(0, n) >= j
        mid = (lo + hi) // 2
        if count_c(0, mid) >= j:
            hi = mid
        else:
            lo = mid + 1
    return lo


# -- a fixed computable bijection Q -> {1, 2, 3, ...} -------------------------
# Positive rationals are listed by height h = max(p, q), each level in
# increasing order: 1 | 1/2, 2 | 1/3, 2/3, 3/2, 3 | ...  Then 0 takes rank 1
# and the k-th positive q takes rank 2k, its negative 2k + 1.

class _Totients:
    def __init__(self):
        self._lock = threading.Lock()
        self.phi = [0, 1]
        self.level_start = [0, 1, 2]  # level_start[h] = index of first fraction of height h

    def ensure(self, h: int) -> None:
        if h < len(self.phi):
            return
        with self._lock:
            if h < len(self.phi):
                return
            size = max(h + 1, 2 * len(self.phi))
            phi = list(range(size))
            for p in range(2, size):
                if phi[p] == p:
                    for m in range(p, size, p):
                        phi[m] -= phi[m] // p
            starts = [0, 1, 2]
            for k in range(2, size):
                starts.append(starts[-1] + 2 * phi[k])
            self.phi, self.level_start = phi, starts

    def level_size(self, h: int) -> int:
        return 1 if h == 1 else 2 * self.phi[h]


_TOT = _Totients()


def _coprime_upto(p: int, h: int) -> int:
    """#{1 <= k <= p : gcd(k, h) = 1}."""
    primes, m, f = [], h, 2
    while f * f <= m:
        if m % f == 0:
            primes.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        primes.append(m)
    total = 0
    for mask in range(1 << len(primes)):
        d, bits = 1, 0
        for t, q in enumerate(primes):
            if mask >> t & 1:
                d *= q
                bits += 1
        total += (-1) ** bits * (p // d)
    return total


@lru_cache(maxsize=1 << 16)
def _pos_index(q: Fraction) -> int:
    a, b = q.numerator, q.denominator
    h = max(a, b)
    _TOT.ensure(h)
    start = _TOT.level_start[h]
    if h == 1:
        return start
    phi = _TOT.phi[h]
    if a < b:
        return start + _coprime_upto(a, h) - 1
    return start + phi + (phi - _coprime_upto(b, h))


@lru_cache(maxsize=1 << 16)
def _pos_at(k: int) -> Fraction:
    h = 1
    while True:
        _TOT.ensure(h)
        starts = _TOT.level_start
        if k < starts[-1]:
            h = bisect.bisect_right(starts, k, 1) - 1
            break
        h = 2 * len(_TOT.phi)
    off = k - _TOT.level_start[h]
    if h == 1:
        return Fraction(1)
    phi = _TOT.phi[h]
    if off < phi:
        target, seen = off + 1, 0
        for a in range(1, h):
            if math.gcd(a, h) == 1:
                seen += 1
                if seen == target:
                    return Fraction(a, h)
    target, seen = 2 * phi - off, 0
    for b in range(1, h):
        if math.gcd(b, h) == 1:
            seen += 1
            if seen == target:
                return Fraction(h, b)
    raise AssertionError("unreachable")


def rank(q: Fraction | int) -> int:
    q = Fraction(q)
    if q == 0:
        return 1
    k = _pos_index(abs(q))
    return 2 * k if q > 0 else 2 * k + 1


def unrank(r: int) -> Fraction:
    if r < 1:
        raise ValueError("ranks start at 1")
    if r == 1:
        return Fraction(0)
    q = _pos_at(r // 2)
    return q if r % 2 == 0 else -q


def theta(i: int, q: Fraction | int) -> int:
    return enum_c(i, rank(q))


def theta_inv(i: int, n: int) -> Fraction:
    if not isinstance(i, PartitionIndex):
        i = PartitionIndex(i)
    if _rho(n) != i:
        raise ValueError(f"{n} is not in C_{i}")
    return unrank(count_c(i, n))


# -- permutations on N ------------------------------------------------------

def _neighbour(i: int, n: int, step: int) -> int:
    if i != 0:
        return n * i if step > 0 else n // i
    m = n + step
    while rho(m) != 0:
        m += step
    return m


def block_swap() -> Permutation:
    """Swap the (2j-1)-th and 2j-th elements of every C_i."""

    def swap(n: int) -> int:
        i = rho(n)
        return _neighbour(i, n, 1 if count_c(i, n) % 2 else -1)

    return Permutation(NATURALS, swap, swap, "blockswap")


class SupportMap(dict):
    """Finitely supported element of the product of copies of (Q, +), keyed by prime."""

    def __init__(self, entries: Mapping[int, Fraction | int | str] = ()):
        super().__init__()
        for p, q in dict(entries).items():
            p = PartitionIndex(int(p))
            if p == 0:
                raise ValueError("index 0 is not used for support maps")
            q = parse_rational(q) if isinstance(q, str) else Fraction(q)
            if q != 0:
                self[p] = q

    def __add__(self, other: "SupportMap") -> "SupportMap":
        out = dict(self)
        for p, q in other.items():
            out[p] = out.get(p, 0) + q
        return SupportMap(out)

    def __neg__(self) -> "SupportMap":
        return SupportMap({p: -q for p, q in self.items()})

    def scaled(self, t: Fraction) -> "SupportMap":
        return SupportMap({p: t * q for p, q in self.items()})

    def to_json(self) -> str:
        return json.dumps({str(p): format_rational(q) for p, q in sorted(self.items())})

    @classmethod
    def from_json(cls, text: str) -> "SupportMap":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("support map must be a JSON object")
        return cls({int(k): parse_rational(str(v)) for k, v in data.items()})


def embed(f: SupportMap) -> Permutation:
    f = SupportMap(f)
    shifts = {int(p): q for p, q in f.items()}

    def move(n: int, sign: int) -> int:
        i = _rho(n)
        q = shifts.get(i)
        if q is None:
            return n
        p = _trusted(i)
        return enum_c(p, rank(sign * q + unrank(count_c(p, n))))

    name = "embed" + f.to_json().replace(" ", "")
    return Permutation(NATURALS, lambda n: move(n, 1), lambda n: move(n, -1), name)


def separating_point(f: SupportMap, g: SupportMap) -> int | None:
    """A point where embed(f) and embed(g) differ, constructed directly."""
    for p in sorted(set(f) | set(g)):
        if f.get(p, 0) != g.get(p, 0):
            return theta(p, 0)
    return None


def embed_sum_matches(f: SupportMap, g: SupportMap, points) -> bool:
    lhs, rhs = embed(f + g), compose(embed(f), embed(g))
    return all(lhs.fwd(n) == rhs.fwd(n) for n in points)
