"""Cut-relations on the rationals: ``x R y`` iff ``x < c < y`` for a cutpoint ``c``.

They satisfy the five interval conditions defining a cut, add by adding
cutpoints, and are never functional.  The cutpoint may be rational or a
stream real; comparisons against a stream cutpoint are fueled.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .exactnum import (
    Ordering,
    StreamReal,
    format_rational,
    stream_add,
    stream_cmp,
    stream_const,
    stream_neg,
)
from .relations import RATIONALS, Relation
from .report import FAIL, INDETERMINATE, PASS, CheckRecord, CheckReport, run_check

__all__ = [
    "CutRelation", "cut_holds", "check_cut_conditions", "check_relation_conditions",
    "cut_add", "cut_neg", "zero_cut", "cut_positive", "cut_less", "sum_formula_holds",
    "CONDITIONS",
]

Cutpoint = Union[Fraction, StreamReal]

CONDITIONS = (
    "1 inside order",
    "2 widening",
    "3 shrinking",
    "4 covering",
    "5 interval transitivity",
)


@dataclass(frozen=True)
class CutRelation:
    cutpoint: Cutpoint
    fuel: int = 64

    def __post_init__(self):
        if not isinstance(self.cutpoint, StreamReal):
            object.__setattr__(self, "cutpoint", Fraction(self.cutpoint))

    @property
    def exact(self) -> bool:
        return isinstance(self.cutpoint, Fraction)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CutRelation):
            return NotImplemented
        if self.exact and other.exact:
            return self.cutpoint == other.cutpoint
        raise TypeError("equality of stream cutpoints is undecidable")

    def __hash__(self) -> int:
        return hash(self.cutpoint) if self.exact else id(self)

    def label(self) -> str:
        return format_rational(self.cutpoint) if self.exact else self.cutpoint.label

    def below(self, x: Fraction) -> Optional[bool]:
        """x < cutpoint, or None when undecided within fuel."""
        if self.exact:
            return x < self.cutpoint
        o = stream_cmp(stream_const(x), self.cutpoint, self.fuel)
        return None if o is Ordering.INDETERMINATE else o is Ordering.LESS

    def above(self, y: Fraction) -> Optional[bool]:
        """cutpoint < y, or None when undecided."""
        if self.exact:
            return self.cutpoint < y
        o = stream_cmp(self.cutpoint, stream_const(y), self.fuel)
        return None if o is Ordering.INDETERMINATE else o is Ordering.LESS

    def bracket(self) -> tuple[Fraction, Fraction]:
        """Rationals lo <= c <= hi (equal for rational cutpoints)."""
        if self.exact:
            return self.cutpoint, self.cutpoint
        return self.cutpoint.refine(self.fuel)

    def as_relation(self) -> Relation:
        """Relation view: every x below the cutpoint gets two witnessed images."""
        _, hi = self.bracket()
        top = math.floor(hi) + 1

        def image(x):
            return [Fraction(top), Fraction(top + 1)] if self.below(x) else []

        return Relation(RATIONALS, image=image, holds=lambda x, y: bool(cut_holds(self, x, y)))

    def __repr__(self) -> str:
        return f"cut({self.label()})"


def cut_holds(c: CutRelation, x: Fraction, y: Fraction) -> Optional[bool]:
    """``x < c < y``; None when a stream comparison stays undecided."""
    a, b = c.below(Fraction(x)), c.above(Fraction(y))
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def zero_cut() -> CutRelation:
    return CutRelation(Fraction(0))


def cut_add(a: CutRelation, b: CutRelation) -> CutRelation:
    if a.exact and b.exact:
        return CutRelation(a.cutpoint + b.cutpoint)
    ca = a.cutpoint if not a.exact else stream_const(a.cutpoint)
    cb = b.cutpoint if not b.exact else stream_const(b.cutpoint)
    return CutRelation(stream_add(ca, cb), min(a.fuel, b.fuel))


def cut_neg(a: CutRelation) -> CutRelation:
    if a.exact:
        return CutRelation(-a.cutpoint)
    return CutRelation(stream_neg(a.cutpoint), a.fuel)


def sum_formula_holds(a: CutRelation, b: CutRelation, x: Fraction, y: Fraction, fuel: int = 64) -> bool:
    """The defining formula of the sum read existentially:

    some z R v and w S u with x < z + w and v + u < y.

    Candidates are z, v = cutpoint(a) -+ d and w, u = cutpoint(b) -+ d for
    d = 2**-j, j < fuel; each atom is evaluated through ``cut_holds``.
    A found witness decides the formula; none within fuel reports False.
    """
    alo, ahi = a.bracket()
    blo, bhi = b.bracket()
    for j in range(fuel):
        d = Fraction(1, 1 << j)
        z, v, w, u = alo - d, ahi + d, blo - d, bhi + d
        if cut_holds(a, z, v) and cut_holds(b, w, u) and x < z + w and v + u < y:
            return True
    return False


def _pow2_below(v: Fraction) -> Fraction:
    """Greatest power of two strictly below positive v."""
    k = v.numerator.bit_length() - v.denominator.bit_length()
    p = Fraction(2) ** k
    while p >= v:
        p /= 2
    while p * 2 < v:
        p *= 2
    return p


def cut_positive(c: CutRelation) -> tuple[Optional[bool], Optional[tuple[Fraction, Fraction]]]:
    """Whether some x R y has 0 < x < y, with a dyadic witness (x, y)."""
    lo, hi = c.bracket()
    if c.exact:
        if c.cutpoint <= 0:
            return False, None
        x = _pow2_below(c.cutpoint)
        y = x * 2
        while y <= c.cutpoint:
            y *= 2
        return True, (x, y)
    if lo > 0:
        x = _pow2_below(lo)
        y = x * 2
        while y <= hi:
            y *= 2
        return True, (x, y)
    if hi < 0:
        return False, None
    return None, None


def cut_less(a: CutRelation, b: CutRelation) -> Optional[bool]:
    """``a`` below ``b``: some positive cut t has a + t = b, namely t = b - a."""
    return cut_positive(cut_add(b, cut_neg(a)))[0]


# -- the five conditions ----------------------------------------------------------

def _sample_rationals(rng: random.Random, count: int, around: Fraction) -> list[Fraction]:
    out = []
    for i in range(count):
        den = rng.randint(1, 64)
        off = Fraction(rng.randint(-200, 200), den) or Fraction(1, den + 1)
        out.append(around + off if i % 2 else off)
    return out


def check_cut_conditions(c: CutRelation, seed: int = 0, n_samples: int = 1000) -> CheckReport:
    """Sample each universal condition; existential witnesses come from the cutpoint."""
    rng = random.Random(seed)
    lo, hi = c.bracket()
    mid = (lo + hi) / 2
    xs = _sample_rationals(rng, n_samples, mid)
    ys = _sample_rationals(rng, n_samples, mid)
    zs = _sample_rationals(rng, n_samples, mid)
    ws = _sample_rationals(rng, n_samples, mid)
    rep = CheckReport("cut-conditions", f"cut({c.label()})", seed, c.fuel)
    holds = lambda x, y: cut_holds(c, x, y)  # noqa: E731

    quads = list(zip(xs, ys, zs, ws))
    # make the premises bite: half the pairs straddle the cutpoint
    for i in range(0, len(quads), 2):
        x, y, z, w = quads[i]
        a, b = lo - abs(x) - Fraction(1, 7), hi + abs(y) + Fraction(1, 9)
        quads[i] = (a, b, a - abs(z) - 1, b + abs(w) + 1)

    def cond1(q):
        x, y = q[0], q[1]
        h = holds(x, y)
        return None if h is None else (not h or x < y)

    def cond2(q):
        x, y, z, w = q
        h = holds(x, y)
        if h is None:
            return None
        if not (h and z < x and y < w):
            return True
        return holds(z, w)

    def cond3(q):
        x, y = q[0], q[1]
        h = holds(x, y)
        if h is None:
            return None
        if not h:
            return True
        z, w = (x + lo) / 2, (hi + y) / 2
        return bool(holds(z, w)) and x < z and w < y

    def cond4(q):
        x, y = sorted((q[0], q[1]))
        if x == y:
            return True
        if c.below(x):
            return holds(x, Fraction(math.floor(hi) + 1))
        # x is not below the cutpoint, so y > x must lie above it
        return holds(Fraction(math.floor(lo) - 1), y)

    def cond5(q):
        x, y, z, w = q
        a, b = holds(x, y), holds(z, w)
        if a is None or b is None:
            return None
        if not (a and b):
            return True
        return holds(x, w)

    desc = lambda q: "(" + ", ".join(format_rational(v) for v in q) + ")"  # noqa: E731
    for name, fn in zip(CONDITIONS, (cond1, cond2, cond3, cond4, cond5)):
        rep.add(run_check(name, quads, fn, desc))
    return rep


def check_relation_conditions(holds: Callable[[Fraction, Fraction], bool], points: Sequence[Fraction],
                              label: str = "relation") -> CheckReport:
    """The five conditions by exhaustive search over a finite point set.

    Meant for explicit fixtures: universal quantifiers and existential
    witnesses both range over ``points``.
    """
    pts = sorted(set(Fraction(p) for p in points))
    pairs = [(x, y) for x in pts for y in pts]
    rel = [(x, y) for x, y in pairs if holds(x, y)]
    rep = CheckReport("cut-conditions", label)
    fmt = lambda *vs: "(" + ", ".join(format_rational(v) for v in vs) + ")"  # noqa: E731

    def record(name: str, bad: Optional[tuple], count: int) -> None:
        rep.add(CheckRecord(name, FAIL if bad else PASS, count, fmt(*bad) if bad else None, "exact"))

    record(CONDITIONS[0], next(((x, y) for x, y in rel if not x < y), None), len(rel))
    record(CONDITIONS[1], next(((x, y, z, w) for x, y in rel for z in pts for w in pts
                                if z < x and y < w and not holds(z, w)), None), len(rel))
    record(CONDITIONS[2], next(((x, y) for x, y in rel
                                if not any(x < z and w < y for z, w in rel)), None), len(rel))
    record(CONDITIONS[3], next(((x, y) for x, y in pairs if x < y
                                and not any(holds(x, z) for z in pts)
                                and not any(holds(w, y) for w in pts)), None), len(pairs))
    record(CONDITIONS[4], next(((x, y, z, w) for x, y in rel for z, w in rel
                                if not holds(x, w)), None), len(rel) ** 2)
    return rep
