"""Multiples, equimultiple ratio comparison, and anthyphairesis.

A ratio of magnitudes ``r : s`` (``s`` positive) is identified with every
other ratio that agrees with it on all equimultiple comparisons
``m*|r|`` versus ``n*s``.  On models with exact values this reduces to cross
multiplication.  On stream models the engine walks the Stern-Brocot tree of
candidate fractions ``n/m`` and looks for a pair on which the two ratios
disagree; that pair is the witness of inequality.  Equality of stream ratios
is never affirmed.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

from .axioms import Indeterminate, check_density, check_positival
from .domains import MagnitudeDomain, build_model, in_domain, parse_model_id, scalar_multiple
from .exactnum import (
    Ordering,
    format_rational,
    parse_rational,
    rat_cmp,
    stream_cmp,
    stream_scale,
)
from .relations import Permutation

__all__ = [
    "RatioCase", "Ratio", "CFPrefix", "MultipleWitness", "Found", "NotMultiple",
    "NotMultipleError", "SignCaseMismatch", "Equal", "NotEqual", "multiple_index",
    "same_multiple", "ratio_equal", "ratio_compare", "equimultiple_search",
    "continued_fraction", "euclid_cf", "make_ratio", "is_real", "STREAM_PRECISION_CAP",
]

# stream comparisons refine to at most this many bits, whatever the step fuel
STREAM_PRECISION_CAP = 1024


class RatioCase(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    ZERO = "Zero"


@dataclass(frozen=True)
class CFPrefix:
    terms: tuple[int, ...]
    precision: int
    indeterminate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if any(t < 1 for t in self.terms[1:]) or (self.terms and self.terms[0] < 0):
            raise ValueError("continued fraction terms after the first must be >= 1")


@dataclass(frozen=True)
class MultipleWitness:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("multiples start at 1")


@dataclass(frozen=True)
class Found:
    witness: MultipleWitness


class NotMultiple:
    def __repr__(self) -> str:
        return "NotMultiple"


NOT_MULTIPLE = NotMultiple()


class NotMultipleError(ValueError):
    pass


class SignCaseMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Equal:
    pass


@dataclass(frozen=True)
class NotEqual:
    witness: str
    pair: Optional[tuple[int, int]] = None  # (m, n): m*|r| against n*s


@dataclass(frozen=True)
class Ratio:
    case: RatioCase
    value: Union[Fraction, CFPrefix, None]
    models: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        if isinstance(self.value, Fraction):
            val = format_rational(self.value)
        elif isinstance(self.value, CFPrefix):
            val = {"cf": list(self.value.terms), "precision": self.value.precision,
                   "indeterminate": self.value.indeterminate}
        else:
            val = None
        return {"case": self.case.value, "value": val, "models": list(self.models)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Ratio":
        """Read a ratio back without validating it; see :func:`is_real`."""
        d = json.loads(text)
        v = d.get("value")
        if isinstance(v, str):
            v = parse_rational(v)
        elif isinstance(v, dict):
            v = CFPrefix(tuple(v["cf"]), int(v["precision"]), bool(v.get("indeterminate", False)))
        return cls(RatioCase(d["case"]), v, tuple(d.get("models", ())))


# -- multiples -----------------------------------------------------------------------

def _require_pos(d: MagnitudeDomain, s: Permutation, what: str = "s") -> None:
    if not d.pos(s):
        raise ValueError(f"{what} must be positive")


def multiple_index(d: MagnitudeDomain, r: Permutation, t: Permutation, fuel: int = 10**6):
    """Whether ``t`` is the k-fold iterate of positive ``r``, and which k."""
    _require_pos(d, r, "r")
    if d.analytic:
        if not in_domain(d, t) or not d.conforms(t):
            return NOT_MULTIPLE
        q = d.value(t) / d.value(r)
        if q.denominator == 1 and q >= 1:
            k = int(q)
            if not d.mag_eq(scalar_multiple(d, r, k), t):  # pragma: no cover - value homomorphism
                return NOT_MULTIPLE
            return Found(MultipleWitness(k))
        return NOT_MULTIPLE
    prec = min(fuel, STREAM_PRECISION_CAP)
    tv, rv = d.value(t), d.value(r)
    for k in range(1, fuel + 1):
        c = stream_cmp(tv, stream_scale(rv, k), prec)
        if c is Ordering.GREATER:
            continue
        if c is Ordering.LESS:
            return NOT_MULTIPLE  # strictly between (k-1)*r and k*r
        return Indeterminate(f"t is within precision of {k}*r")
    return Indeterminate("fuel exhausted")


def same_multiple(dA, rA, tA, dB, rB, tB, fuel: int = 10**6) -> Optional[bool]:
    """``tA`` is the same multiple of ``rA`` as ``tB`` of ``rB``; None if undecided."""
    a = multiple_index(dA, rA, tA, fuel)
    b = multiple_index(dB, rB, tB, fuel)
    for side, res in (("A", a), ("B", b)):
        if res is NOT_MULTIPLE:
            raise NotMultipleError(f"side {side} is not a multiple")
    if isinstance(a, Found) and isinstance(b, Found):
        return a.witness.k == b.witness.k
    return None


# -- sign case and side comparators ---------------------------------------------

def _case(d: MagnitudeDomain, r: Permutation, fuel: int) -> Optional[RatioCase]:
    if d.analytic:
        if d.pos(r):
            return RatioCase.POSITIVE
        if d.pos(d.neg(r)):
            return RatioCase.NEGATIVE
        if d.mag_eq(r, d.zero):
            return RatioCase.ZERO
        raise ValueError("r is not in the domain")
    c = d.sign(r, min(fuel, STREAM_PRECISION_CAP))
    if c is Ordering.GREATER:
        return RatioCase.POSITIVE
    if c is Ordering.LESS:
        return RatioCase.NEGATIVE
    return None


SideCmp = Callable[[int, int], Ordering]


def _side(d: MagnitudeDomain, r: Permutation, s: Permutation, case: RatioCase, fuel: int) -> SideCmp:
    """``(m, n) -> order of m*|r| against n*s``."""
    mag = d.neg(r) if case is RatioCase.NEGATIVE else r
    if d.analytic:
        a, b = d.value(mag), d.value(s)
        return lambda m, n: rat_cmp(m * a, n * b)
    av, bv = d.value(mag), d.value(s)
    prec = min(fuel, STREAM_PRECISION_CAP)
    return lambda m, n: stream_cmp(stream_scale(av, m), stream_scale(bv, n), prec)


def _exact_ratio(d: MagnitudeDomain, r: Permutation, s: Permutation, case: RatioCase) -> Fraction:
    mag = d.neg(r) if case is RatioCase.NEGATIVE else r
    return d.value(mag) / d.value(s)


def equimultiple_search(cmp_a: SideCmp, cmp_b: SideCmp, fuel: int):
    """Stern-Brocot walk for a pair (m, n) separating the two ratios.

    Returns Equal when both sides are exactly equal to some ``n/m``,
    NotEqual with the least-depth separating pair, or Indeterminate.
    """
    ln, lm, hn, hm = 0, 1, 1, 0  # lower bound n/m = 0/1, upper bound 1/0
    for _ in range(fuel):
        n, m = ln + hn, lm + hm
        a, b = cmp_a(m, n), cmp_b(m, n)
        det_a = a is not Ordering.INDETERMINATE
        det_b = b is not Ordering.INDETERMINATE
        if det_a and det_b:
            if a is not b:
                return NotEqual(f"{m}*|r| {_rel(a)} {n}*s on A but {_rel(b)} on B", (m, n))
            if a is Ordering.EQUAL:
                return Equal()
            step = a
        elif det_a and a is not Ordering.EQUAL:
            step = a
        elif det_b and b is not Ordering.EQUAL:
            step = b
        else:
            return Indeterminate(f"undecided at {n}/{m}")
        # LESS: m*|r| < n*s, so the ratio lies below n/m
        if step is Ordering.LESS:
            hn, hm = n, m
        else:
            ln, lm = n, m
    return Indeterminate("fuel exhausted")


def _rel(o: Ordering) -> str:
    return {Ordering.LESS: "<", Ordering.GREATER: ">", Ordering.EQUAL: "="}[o]


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with least denominator strictly between lo < hi (both >= 0)."""
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part fl (or hi == fl + 1)
    if lo == fl:
        # smallest 1/k above 0 that stays below hi - fl
        k = math.floor(1 / (hi - fl)) + 1
        return fl + Fraction(1, k)
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


def _witness_pair(qa: Fraction, qb: Fraction) -> tuple[int, int]:
    lo, hi = sorted((qa, qb))
    w = _simplest_between(lo, hi)
    return w.denominator, w.numerator


def _check_s(d: MagnitudeDomain, s: Permutation, fuel: int) -> None:
    if d.analytic:
        _require_pos(d, s)
    elif _case(d, s, fuel) is not RatioCase.POSITIVE:
        raise ValueError("s must be positive")


def ratio_equal(dA, rA, sA, dB, rB, sB, fuel: int = 10**6):
    """Equal / NotEqual(witness) / Indeterminate for ``rA:sA`` against ``rB:sB``."""
    _check_s(dA, sA, fuel)
    _check_s(dB, sB, fuel)
    ca, cb = _case(dA, rA, fuel), _case(dB, rB, fuel)
    if ca is None or cb is None:
        return Indeterminate("numerator sign undecided within fuel")
    if ca is not cb:
        return NotEqual(f"sign case {ca.value} vs {cb.value}")
    if ca is RatioCase.ZERO:
        return Equal()
    if dA.analytic and dB.analytic:
        qa, qb = _exact_ratio(dA, rA, sA, ca), _exact_ratio(dB, rB, sB, cb)
        if qa == qb:
            return Equal()
        m, n = _witness_pair(qa, qb)
        oa = _side(dA, rA, sA, ca, fuel)(m, n)
        ob = _side(dB, rB, sB, cb, fuel)(m, n)
        return NotEqual(f"{m}*|r| {_rel(oa)} {n}*s on A but {_rel(ob)} on B", (m, n))
    return equimultiple_search(_side(dA, rA, sA, ca, fuel), _side(dB, rB, sB, cb, fuel), fuel)


def ratio_compare(dA, rA, sA, dB, rB, sB, fuel: int = 10**6) -> Ordering:
    _check_s(dA, sA, fuel)
    _check_s(dB, sB, fuel)
    ca, cb = _case(dA, rA, fuel), _case(dB, rB, fuel)
    if ca is None or cb is None:
        return Ordering.INDETERMINATE
    if ca is not cb:
        raise SignCaseMismatch(f"cannot order a {ca.value} ratio against a {cb.value} one")
    if ca is RatioCase.ZERO:
        return Ordering.EQUAL
    flip = ca is RatioCase.NEGATIVE
    if dA.analytic and dB.analytic:
        o = rat_cmp(_exact_ratio(dA, rA, sA, ca), _exact_ratio(dB, rB, sB, cb))
        return o.flip() if flip else o
    res = equimultiple_search(_side(dA, rA, sA, ca, fuel), _side(dB, rB, sB, cb, fuel), fuel)
    if isinstance(res, Equal):
        return Ordering.EQUAL
    if isinstance(res, NotEqual):
        m, n = res.pair
        oa = _side(dA, rA, sA, ca, fuel)(m, n)
        ob = _side(dB, rB, sB, cb, fuel)(m, n)
        # the pair n/m separates them: whichever side lies below n/m is the smaller magnitude ratio
        o = Ordering.LESS if (oa is Ordering.LESS or ob is Ordering.GREATER) else Ordering.GREATER
        return o.flip() if flip else o
    return Ordering.INDETERMINATE


# -- continued fractions -------------------------------------------------------------

def euclid_cf(a: int, b: int) -> list[int]:
    """Continued fraction of a/b by the integer Euclidean algorithm."""
    if b <= 0:
        raise ValueError("b must be positive")
    terms = []
    while b:
        q, r = divmod(a, b)
        terms.append(q)
        a, b = b, r
    return terms


def _cf_interval(lo: Fraction, hi: Fraction, k_terms: int) -> tuple[list[int], bool]:
    """Terms shared by every number in [lo, hi]; second value: expansion finished."""
    terms: list[int] = []
    while len(terms) < k_terms:
        if lo == hi:
            x = lo
            while len(terms) < k_terms:
                a = math.floor(x)
                terms.append(a)
                if x == a:
                    return terms, True
                x = 1 / (x - a)
            return terms, False
        a = math.floor(lo)
        if math.floor(hi) != a or lo == a:
            return terms, False
        terms.append(a)
        lo, hi = 1 / (hi - a), 1 / (lo - a)
    return terms, False


def continued_fraction(d: MagnitudeDomain, r: Permutation, s: Permutation, k_terms: int = 8,
                       fuel: int = 64) -> CFPrefix:
    """Anthyphairesis of |r| against s, up to ``k_terms`` terms."""
    if k_terms < 1:
        raise ValueError("k_terms must be >= 1")
    _check_s(d, s, fuel)
    case = _case(d, r, fuel)
    if case is None:
        return CFPrefix((), 0, True)
    if case is RatioCase.ZERO:
        return CFPrefix((0,), 0)
    if d.analytic:
        # reciprocal subtraction on the magnitudes' exact values
        mag = d.neg(r) if case is RatioCase.NEGATIVE else r
        x, y = d.value(mag), d.value(s)
        terms = []
        while len(terms) < k_terms and y != 0:
            q = math.floor(x / y)
            terms.append(q)
            x, y = y, x - q * y
        return CFPrefix(tuple(terms), 0)
    mag = d.neg(r) if case is RatioCase.NEGATIVE else r
    xv, yv = d.value(mag), d.value(s)
    prec, best = 1, []
    limit = min(fuel, STREAM_PRECISION_CAP)
    while True:
        p = min(prec, limit)
        xl, xh = xv.refine(p)
        yl, yh = yv.refine(p)
        if yl > 0:
            terms, done = _cf_interval(xl / yh, xh / yl, k_terms)
            if len(terms) > len(best):
                best = terms
            if done or len(best) >= k_terms:
                return CFPrefix(tuple(best), p)
        if p >= limit:
            return CFPrefix(tuple(best), p, True)
        prec *= 2


# -- ratios as objects --------------------------------------------------------------

def make_ratio(d: MagnitudeDomain, r: Permutation, s: Permutation, fuel: int = 64, k_terms: int = 8) -> Ratio:
    _check_s(d, s, fuel)
    case = _case(d, r, fuel)
    if case is None:
        raise ValueError("numerator sign undecided within fuel")
    models = (str(d.model_id),)
    if case is RatioCase.ZERO:
        return Ratio(case, None, models)
    if d.analytic:
        return Ratio(case, _exact_ratio(d, r, s, case), models)
    return Ratio(case, continued_fraction(d, r, s, k_terms, fuel), models)


@lru_cache(maxsize=64)
def _model_verified(model_key: str) -> bool:
    name, _, support = model_key.partition("{")
    mid = parse_model_id(name, "{" + support if support else None)
    d = build_model(mid)
    return check_positival(d, 0, 20).ok and check_density(d, 0, 20).ok


def is_real(x: Ratio) -> bool:
    """``x`` is a well-formed ratio formed over a verified model."""
    if not isinstance(x, Ratio) or not x.models:
        return False
    if x.case is RatioCase.ZERO:
        if x.value is not None:
            return False
    elif isinstance(x.value, Fraction):
        if x.value <= 0:
            return False
    elif not isinstance(x.value, CFPrefix):
        return False
    try:
        return all(_model_verified(m) for m in x.models)
    except ValueError:
        return False
