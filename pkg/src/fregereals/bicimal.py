"""Bicimal pairs: a natural number plus an infinite set of fraction-bit positions.

A pair ``<n, P>`` codes ``n + sum(2**-j for j in P, j >= 1)``.  Whether ``0``
belongs to ``P`` selects the partition: pairs with ``0 in P`` are positive and
decode to ``n + frac``; the others decode to ``-(n + frac - 1)``, the pair with
``n = 0`` and every fraction bit set being the zero pair.

Only eventually periodic bit sets are represented, so every pair codes a
rational.  The bit set is held through its exact value ``frac`` in ``(0, 1]``
(the non-terminating binary expansion is a bijection onto that interval);
preperiod and period strings are derived from it on demand.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy.ntheory import n_order

from .exactnum import Ordering, format_rational, rat_cmp
from .relations import BICIMALS, Permutation

__all__ = [
    "BicimalPair", "NonCanonical", "ZERO", "decode", "encode", "bp_add", "bp_neg",
    "bp_cmp", "translation",
]


class NonCanonical(ValueError):
    pass


def _two_adic(n: int) -> int:
    return (n & -n).bit_length() - 1


@dataclass(frozen=True)
class BicimalPair:
    sign0: bool
    n: int
    frac: Fraction

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise NonCanonical("integer part must be a natural number")
        if not (0 < self.frac <= 1):
            raise NonCanonical("fraction value must lie in (0, 1]")
        if not self.sign0 and self.n == 0 and self.frac != 1:
            # these would collide with positive pairs under the decode rule
            raise NonCanonical("negative partition with n = 0 only holds the zero pair")

    # -- bit structure -------------------------------------------------
    def bit(self, j: int) -> int:
        """Fraction bit ``lambda_j`` (j >= 1) of the non-terminating expansion."""
        if j < 1:
            raise ValueError("fraction bits start at j = 1")
        a, b = self.frac.numerator, self.frac.denominator
        # N_j = ceil(2**j * a / b) - 1 and lambda_j = N_j mod 2
        r = (pow(2, j, 2 * b) * a) % (2 * b)
        floor_parity = r // b
        ceil_val_parity = (floor_parity + (1 if r % b else 0)) % 2
        return (ceil_val_parity - 1) % 2

    @property
    def preperiod_length(self) -> int:
        return _two_adic(self.frac.denominator)

    @cached_property
    def period_length(self) -> int:
        odd = self.frac.denominator >> self.preperiod_length
        return 1 if odd == 1 else int(n_order(2, odd))

    @cached_property
    def preperiod(self) -> str:
        return "".join(str(self.bit(j)) for j in range(1, self.preperiod_length + 1))

    @cached_property
    def period(self) -> str:
        start = self.preperiod_length + 1
        return "".join(str(self.bit(j)) for j in range(start, start + self.period_length))

    def bits(self, count: int) -> list[int]:
        return [self.bit(j) for j in range(1, count + 1)]

    # -- construction ------------------------------------------------------
    @classmethod
    def from_bits(cls, sign0: bool, n: int, pre: str, per: str) -> "BicimalPair":
        """Build from an explicit preperiod/period; rejects non-canonical input."""
        if not per or set(per + pre) - {"0", "1"}:
            raise NonCanonical("period must be a nonempty bit string")
        if "1" not in per:
            raise NonCanonical("period must not be all zeros")
        lp, ll = len(pre), len(per)
        pre_v = int(pre, 2) if pre else 0
        per_v = int(per, 2)
        frac = Fraction(pre_v * ((1 << ll) - 1) + per_v, (1 << lp) * ((1 << ll) - 1))
        pair = cls(sign0, n, frac)
        if pair.preperiod != pre or pair.period != per:
            raise NonCanonical(f"non-minimal representation {pre!r}({per!r})")
        return pair

    # -- text / json ---------------------------------------------------
    def to_text(self) -> str:
        return f"{'+' if self.sign0 else '-'}{self.n}.{self.preperiod}({self.period})"

    _TEXT = re.compile(r"^\s*([+-])\s*(\d+)\.([01]*)\(([01]+)\)\s*$")

    @classmethod
    def from_text(cls, text: str) -> "BicimalPair":
        m = cls._TEXT.match(text)
        if m is None:
            raise ValueError(f"not a bicimal pair: {text!r}")
        return cls.from_bits(m.group(1) == "+", int(m.group(2)), m.group(3), m.group(4))

    def to_json(self) -> str:
        return json.dumps({"sign0": self.sign0, "n": self.n, "pre": self.preperiod, "per": self.period})

    @classmethod
    def from_json(cls, text: str) -> "BicimalPair":
        d = json.loads(text)
        return cls.from_bits(bool(d["sign0"]), int(d["n"]), d["pre"], d["per"])

    def __str__(self) -> str:
        return self.to_text()


ZERO = BicimalPair(False, 0, Fraction(1))


def decode(p: BicimalPair) -> Fraction:
    if not isinstance(p, BicimalPair):
        raise NonCanonical("not a bicimal pair")
    if p.sign0:
        return p.n + p.frac
    return -(p.n + p.frac - 1)


def encode(v: Fraction | int) -> BicimalPair:
    v = Fraction(v)
    if v > 0:
        n = math.ceil(v) - 1
        return BicimalPair(True, n, v - n)
    w = 1 - v
    n = math.ceil(w) - 1
    return BicimalPair(False, n, w - n)


def bp_add(a: BicimalPair, b: BicimalPair) -> BicimalPair:
    return encode(decode(a) + decode(b))


def bp_neg(a: BicimalPair) -> BicimalPair:
    return encode(-decode(a))


def bp_cmp(a: BicimalPair, b: BicimalPair) -> Ordering:
    if a.sign0 != b.sign0:
        return Ordering.GREATER if a.sign0 else Ordering.LESS
    return rat_cmp(decode(a), decode(b))


def translation(alpha: BicimalPair) -> Permutation:
    """``x R_alpha y`` iff ``x + alpha = y`` on bicimal pairs."""
    neg = bp_neg(alpha)
    return Permutation(
        BICIMALS,
        lambda x: bp_add(x, alpha),
        lambda y: bp_add(y, neg),
        f"R[{format_rational(decode(alpha))}]",
    )
