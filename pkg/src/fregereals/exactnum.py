"""Exact rationals and interval-refined stream reals.

Rationals are plain :class:`fractions.Fraction` values, which are always
stored reduced with a positive denominator.  Stream reals are computable
reals given by a refinement procedure returning nested rational intervals.
"""

from __future__ import annotations

import enum
import functools
import math
import re
from fractions import Fraction
from typing import Callable, Union

Rational = Fraction
Interval = tuple[Fraction, Fraction]

__all__ = [
    "Rational", "Ordering", "parse_rational", "format_rational", "canonicalize",
    "rat_add", "rat_neg", "rat_cmp", "StreamReal", "stream_const", "stream_sqrt",
    "stream_add", "stream_neg", "stream_scale", "stream_scale_rat", "stream_cmp",
    "parse_real",
]


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    INDETERMINATE = "Indeterminate"

    def flip(self) -> "Ordering":
        if self is Ordering.LESS:
            return Ordering.GREATER
        if self is Ordering.GREATER:
            return Ordering.LESS
        return self

    def __str__(self) -> str:
        return self.value


_RAT_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (optional leading minus) into a Rational."""
    m = _RAT_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def canonicalize(q: Fraction | int) -> Fraction:
    return Fraction(q)


def rat_add(a: Fraction, b: Fraction) -> Fraction:
    return a + b


def rat_neg(a: Fraction) -> Fraction:
    return -a


def rat_cmp(a: Fraction, b: Fraction) -> Ordering:
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL


class StreamReal:
    """A computable real: ``refine(k)`` is a rational interval of width <= 2**-k.

    Successive intervals are nested.  Results are memoized, so a stream is
    effectively immutable once built.
    """

    __slots__ = ("_refine", "label")

    def __init__(self, refine: Callable[[int], Interval], label: str = "<stream>"):
        self._refine = functools.lru_cache(maxsize=256)(refine)
        self.label = label

    def refine(self, k: int) -> Interval:
        if k < 0:
            raise ValueError("precision index must be >= 0")
        return self._refine(k)

    def __repr__(self) -> str:
        return f"StreamReal({self.label})"


def stream_const(q: Fraction | int) -> StreamReal:
    q = Fraction(q)
    return StreamReal(lambda k: (q, q), format_rational(q))


def stream_sqrt(q: Fraction | int) -> StreamReal:
    """Square root of a non-negative rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("sqrt of a negative rational")
    a, b = q.numerator, q.denominator
    # sqrt(a/b) = sqrt(a*b)/b; the floor at scale 2**k gives nested dyadic brackets
    ab = a * b

    def refine(k: int) -> Interval:
        lo = math.isqrt(ab << (2 * k))
        den = b << k
        hi = lo if lo * lo == ab << (2 * k) else lo + 1
        return Fraction(lo, den), Fraction(hi, den)

    return StreamReal(refine, f"sqrt({format_rational(q)})")


def stream_add(a: StreamReal, b: StreamReal) -> StreamReal:
    def refine(k: int) -> Interval:
        alo, ahi = a.refine(k + 1)
        blo, bhi = b.refine(k + 1)
        return alo + blo, ahi + bhi

    return StreamReal(refine, f"({a.label}+{b.label})")


def stream_neg(a: StreamReal) -> StreamReal:
    def refine(k: int) -> Interval:
        lo, hi = a.refine(k)
        return -hi, -lo

    return StreamReal(refine, f"-{a.label}")


def stream_scale(a: StreamReal, n: int) -> StreamReal:
    """Integer multiple ``n * a``."""
    if n == 0:
        return stream_const(0)
    extra = abs(n).bit_length()

    def refine(k: int) -> Interval:
        lo, hi = a.refine(k + extra)
        lo, hi = lo * n, hi * n
        return (lo, hi) if n > 0 else (hi, lo)

    return StreamReal(refine, f"{n}*{a.label}")


def _schedule(fuel: int):
    k = 0
    while k < fuel:
        yield k
        k = 2 * k + 1
    yield fuel


def stream_cmp(a: StreamReal, b: StreamReal, fuel: int) -> Ordering:
    """Compare two stream reals; never answers EQUAL."""
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    for k in _schedule(fuel):
        alo, ahi = a.refine(k)
        blo, bhi = b.refine(k)
        if ahi < blo:
            return Ordering.LESS
        if alo > bhi:
            return Ordering.GREATER
    return Ordering.INDETERMINATE


_SQRT_RE = re.compile(r"^\s*sqrt\((.+)\)\s*$")


def parse_real(text: str) -> Union[Fraction, StreamReal]:
    """Rational text, or ``sqrt(p/q)`` for a stream square root."""
    m = _SQRT_RE.match(text)
    if m:
        return stream_sqrt(parse_rational(m.group(1)))
    return parse_rational(text)


def stream_scale_rat(a: StreamReal, q: Fraction) -> StreamReal:
    """Rational multiple ``q * a``."""
    q = Fraction(q)
    if q == 0:
        return stream_const(0)
    extra = max(0, abs(q.numerator).bit_length() - abs(q.denominator).bit_length() + 1)

    def refine(k: int) -> Interval:
        lo, hi = a.refine(k + extra)
        lo, hi = lo * q, hi * q
        return (lo, hi) if q > 0 else (hi, lo)

    return StreamReal(refine, f"{format_rational(q)}*{a.label}")
