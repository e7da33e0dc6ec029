"""Magnitude domains: a positive class of permutations together with its domain.

A domain bundles a carrier, the identity, composition, inversion and a
decidable positivity predicate.  Models whose magnitudes are translations
also expose ``value``, an exact order- and addition-homomorphism onto a set
of rationals.  ``value`` is read off the permutation's behaviour at a base
point, and ``pos`` additionally checks that the permutation really is the
model's translation by that value on a fixed probe set, so arbitrary
permutations handed in from outside are not taken on trust.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .bicimal import ZERO as BZERO
from .bicimal import decode, encode, translation
from .exactnum import (
    Ordering,
    StreamReal,
    format_rational,
    parse_rational,
    rat_cmp,
    stream_add,
    stream_cmp,
    stream_const,
    stream_neg,
    stream_scale_rat,
    stream_sqrt,
)
from .kasol import SupportMap, embed, theta, theta_inv
from .relations import (
    BICIMALS,
    NATURALS,
    RATIONALS,
    STREAMS,
    Carrier,
    CarrierMismatch,
    Permutation,
    compose,
    identity,
    invert,
)

__all__ = [
    "MagnitudeDomain", "DomainModelId", "RationalTranslations", "DyadicTranslations",
    "BicimalTranslations", "KSEmbedded", "StreamTranslations", "build_model",
    "in_domain", "less", "scalar_multiple", "parse_model_id", "MODEL_NAMES",
    "random_ks_signature",
]


def _check_carrier(d: "MagnitudeDomain", *ms: Permutation) -> None:
    for m in ms:
        if m.carrier.kind is not d.carrier.kind:
            raise CarrierMismatch(
                f"magnitude on {m.carrier.kind.value} carrier, domain is {d.carrier.kind.value}"
            )


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


class MagnitudeDomain:
    """Common interface.  Subclasses set ``carrier`` and implement ``element``.

    ``analytic`` models provide an exact rational ``value``; the stream model
    instead yields a :class:`StreamReal` and answers order questions with fuel.
    """

    model_id: "DomainModelId"
    carrier: Carrier
    analytic: bool = True

    # -- per-model hooks -------------------------------------------------
    def element(self, v) -> Permutation:
        """The model's magnitude with value ``v``."""
        raise NotImplementedError

    def value(self, m: Permutation):
        raise NotImplementedError

    def admits(self, v: Fraction) -> bool:
        """Whether ``v`` lies in the model's value range."""
        return True

    def point_eq(self, x, y) -> Optional[bool]:
        """Equality of carrier points; None when it cannot be decided."""
        return x == y

    def probe_points(self) -> list:
        raise NotImplementedError

    def sample_value(self, rng: random.Random) -> Fraction:
        num, den = rng.randint(1, 300), rng.randint(1, 300)
        return Fraction(num, den)

    def round_into(self, lo: Fraction, hi: Fraction) -> Fraction:
        """A value of the model strictly between ``lo`` and ``hi``."""
        return (lo + hi) / 2

    # -- group structure -------------------------------------------------
    @property
    def zero(self) -> Permutation:
        return identity(self.carrier)

    def add(self, a: Permutation, b: Permutation) -> Permutation:
        _check_carrier(self, a, b)
        return compose(a, b)

    def neg(self, a: Permutation) -> Permutation:
        _check_carrier(self, a)
        return invert(a)

    def conforms(self, m: Permutation) -> bool:
        """``m`` agrees with ``element(value(m))`` at every probe point."""
        v = self.value(m)
        if not self.admits(v):
            return False
        e = self.element(v)
        return all(m.fwd(x) == e.fwd(x) and m.bwd(x) == e.bwd(x) for x in self.probe_points())

    def pos(self, m: Permutation) -> bool:
        _check_carrier(self, m)
        return self.value(m) > 0 and self.conforms(m)

    def mag_eq(self, a: Permutation, b: Permutation) -> Optional[bool]:
        """Extensional equality; exact on analytic models for conforming magnitudes."""
        _check_carrier(self, a, b)
        if self.conforms(a) and self.conforms(b):
            return self.value(a) == self.value(b)
        return all(a.fwd(x) == b.fwd(x) for x in self.probe_points())

    def compare(self, k: Permutation, h: Permutation, fuel: int = 64) -> Ordering:
        """Order of ``k`` against ``h`` in the induced order."""
        d = self.add(h, self.neg(k))
        if self.pos(d):
            return Ordering.LESS
        if self.pos(self.neg(d)):
            return Ordering.GREATER
        return Ordering.EQUAL if self.mag_eq(d, self.zero) else Ordering.INDETERMINATE

    def half(self, m: Permutation) -> Optional[Permutation]:
        """A magnitude whose double is ``m`` (the density witness)."""
        return self.element(self.value(m) / 2)

    def multiple(self, m: Permutation, k: int) -> Optional[Permutation]:
        """Shortcut for the k-fold iterate; None when no shortcut applies."""
        if self.conforms(m):
            return self.element(k * self.value(m))
        return None

    # -- samplers ----------------------------------------------------------
    def mag_sampler(self, seed: int, count: int) -> list[Permutation]:
        """Deterministic sample of positive magnitudes."""
        rng = random.Random(seed)
        return [self.element(self.sample_value(rng)) for _ in range(count)]

    def domain_sampler(self, seed: int, count: int) -> list[Permutation]:
        """Sample of the domain: positives, their inverses and the identity."""
        rng = random.Random(seed)
        out = []
        for i in range(count):
            kind = rng.randrange(8)
            if kind == 0:
                out.append(self.zero)
            else:
                m = self.element(self.sample_value(rng))
                out.append(m if kind % 2 else self.neg(m))
        return out

    def point_sampler(self, seed: int, count: int) -> list:
        return self.carrier.sample(seed, count)

    def describe(self, m: Permutation) -> str:
        try:
            return format_rational(self.value(m))
        except Exception:  # pragma: no cover - diagnostic only
            return m.name

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.model_id}>"


class RationalTranslations(MagnitudeDomain):
    """Translations x -> x + q of Q."""

    carrier = RATIONALS

    def __init__(self):
        self.model_id = DomainModelId("rational-translations")

    def element(self, v) -> Permutation:
        q = Fraction(v)
        return Permutation(RATIONALS, lambda x: x + q, lambda x: x - q, f"T[{format_rational(q)}]")

    def value(self, m: Permutation) -> Fraction:
        return m.fwd(Fraction(0))

    def probe_points(self) -> list:
        return [Fraction(0), Fraction(1), Fraction(-7, 3), Fraction(1000, 7)]

    def translation(self, q) -> Permutation:
        return self.element(q)


class DyadicTranslations(RationalTranslations):
    """Translations by dyadic rationals only: dense, not complete."""

    def __init__(self):
        self.model_id = DomainModelId("dyadic-translations")

    def admits(self, v: Fraction) -> bool:
        return _is_dyadic(Fraction(v))

    def element(self, v) -> Permutation:
        q = Fraction(v)
        if not _is_dyadic(q):
            raise ValueError(f"{format_rational(q)} is not dyadic")
        return super().element(q)

    def sample_value(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(1, 300), 2 ** rng.randint(0, 8))

    def round_into(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Shortest dyadic strictly inside ``(lo, hi)``."""
        if lo >= hi:
            raise ValueError("empty interval")
        k = 0
        while True:
            scale = 1 << k
            # least multiple of 2**-k above lo
            n = (lo * scale).__floor__() + 1
            if Fraction(n, scale) < hi:
                return Fraction(n, scale)
            k += 1


class BicimalTranslations(MagnitudeDomain):
    """Translations R_alpha of bicimal pairs."""

    carrier = BICIMALS

    def __init__(self):
        self.model_id = DomainModelId("bicimal-translations")

    def element(self, v) -> Permutation:
        return translation(encode(Fraction(v)))

    def value(self, m: Permutation) -> Fraction:
        return decode(m.fwd(BZERO))

    def probe_points(self) -> list:
        return [encode(q) for q in (Fraction(0), Fraction(1), Fraction(-7, 3), Fraction(5, 6))]


class KSEmbedded(MagnitudeDomain):
    """A one-parameter subgroup of Sym(N) carved out by the embedding.

    The signature ``{p: w_p}`` sends ``t`` to ``embed({p: t * w_p})``; the
    magnitude is positive when ``t > 0``.
    """

    carrier = NATURALS

    def __init__(self, signature: SupportMap):
        signature = SupportMap(signature)
        if not signature:
            raise ValueError("support signature must be nonempty")
        self.signature = signature
        self.base_prime = min(signature)
        self.model_id = DomainModelId("ks-embedded", signature)
        self._probe = None

    def element(self, v) -> Permutation:
        return embed(self.signature.scaled(Fraction(v)))

    def value(self, m: Permutation) -> Fraction:
        p = self.base_prime
        return theta_inv(p, m.fwd(theta(p, 0))) / self.signature[p]

    def sample_value(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(1, 9), rng.randint(1, 4))

    def probe_points(self) -> list:
        if self._probe is None:
            pts = [0, 1, 6, 10]
            for p in sorted(self.signature):
                pts += [theta(p, q) for q in (0, Fraction(-1, 2))]
            outside = next(p for p in (2, 3, 5, 7, 11, 13, 17) if p not in self.signature)
            pts.append(theta(outside, 0))
            self._probe = pts
        return self._probe

    def point_sampler(self, seed: int, count: int) -> list:
        """Points of the support blocks mixed with arbitrary naturals."""
        rng = random.Random(seed)
        primes = sorted(self.signature)
        out = []
        for i in range(count):
            if i % 2:
                out.append(rng.randint(0, 10**6))
            else:
                q = Fraction(rng.randint(-12, 12), rng.randint(1, 6))
                out.append(theta(rng.choice(primes), q))
        return out


class StreamTranslations(MagnitudeDomain):
    """Translations of the stream reals by stream reals; order by fueled comparison."""

    carrier = STREAMS
    analytic = False

    def __init__(self, fuel: int = 64):
        self.fuel = fuel
        self.model_id = DomainModelId("stream-translations")

    def element(self, v) -> Permutation:
        a = v if isinstance(v, StreamReal) else stream_const(Fraction(v))
        na = stream_neg(a)
        return Permutation(STREAMS, lambda x: stream_add(x, a), lambda x: stream_add(x, na), f"T[{a.label}]")

    def value(self, m: Permutation) -> StreamReal:
        return m.fwd(stream_const(0))

    def probe_points(self) -> list:
        return [stream_const(0)]

    def point_eq(self, x, y) -> Optional[bool]:
        if x is y:
            return True
        return None if stream_cmp(x, y, self.fuel) is Ordering.INDETERMINATE else False

    def sample_value(self, rng: random.Random):
        q = Fraction(rng.randint(1, 300), rng.randint(1, 300))
        return stream_sqrt(q) if rng.randrange(2) else stream_const(q)

    def sign(self, m: Permutation, fuel: Optional[int] = None) -> Ordering:
        return stream_cmp(self.value(m), stream_const(0), fuel or self.fuel)

    def conforms(self, m: Permutation) -> bool:
        return True

    def pos(self, m: Permutation) -> bool:
        _check_carrier(self, m)
        return self.sign(m) is Ordering.GREATER

    def mag_eq(self, a: Permutation, b: Permutation) -> Optional[bool]:
        """False when the values separate within fuel, otherwise unknown (None)."""
        r = stream_cmp(self.value(a), self.value(b), self.fuel)
        return None if r is Ordering.INDETERMINATE else False

    def compare(self, k: Permutation, h: Permutation, fuel: int = 64) -> Ordering:
        return stream_cmp(self.value(k), self.value(h), fuel)

    def half(self, m: Permutation) -> Permutation:
        return self.element(stream_scale_rat(self.value(m), Fraction(1, 2)))

    def multiple(self, m: Permutation, k: int) -> Optional[Permutation]:
        return None

    def describe(self, m: Permutation) -> str:
        return self.value(m).label


# -- model ids -----------------------------------------------------------

MODEL_NAMES = (
    "rational-translations", "dyadic-translations", "bicimal-translations",
    "ks-embedded", "stream-translations",
)


@dataclass(frozen=True)
class DomainModelId:
    name: str
    support: Optional[SupportMap] = field(default=None, compare=False)

    def __post_init__(self):
        if self.name not in MODEL_NAMES:
            raise ValueError(f"unknown model {self.name!r}")
        if self.name == "ks-embedded" and not self.support:
            raise ValueError("ks-embedded needs a support signature")

    def key(self) -> str:
        if self.support is not None:
            return f"{self.name}{self.support.to_json().replace(' ', '')}"
        return self.name

    def __eq__(self, other) -> bool:
        return isinstance(other, DomainModelId) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return self.key()


def parse_model_id(name: str, support: Optional[str] = None) -> DomainModelId:
    """CLI model string plus optional JSON support signature."""
    if name == "ks-embedded":
        if support is None:
            raise ValueError("ks-embedded requires a support signature")
        try:
            sig = SupportMap.from_json(support)
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            raise ValueError(f"malformed support signature: {exc}") from None
        return DomainModelId(name, sig)
    return DomainModelId(name)


def build_model(mid: DomainModelId | str) -> MagnitudeDomain:
    if isinstance(mid, str):
        mid = DomainModelId(mid)
    if mid.name == "rational-translations":
        return RationalTranslations()
    if mid.name == "dyadic-translations":
        return DyadicTranslations()
    if mid.name == "bicimal-translations":
        return BicimalTranslations()
    if mid.name == "ks-embedded":
        return KSEmbedded(mid.support)
    return StreamTranslations()


def random_ks_signature(seed: int, primes: int = 3) -> SupportMap:
    """Signature on ``primes`` distinct small primes with small nonzero weights."""
    rng = random.Random(seed)
    chosen = rng.sample([2, 3, 5, 7, 11, 13], primes)
    weights = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1), Fraction(3, 2)]
    return SupportMap({p: rng.choice(weights) for p in chosen})


# -- domain-level operations ------------------------------------------------

def in_domain(d: MagnitudeDomain, m: Permutation) -> bool:
    _check_carrier(d, m)
    return d.pos(m) or d.pos(d.neg(m)) or bool(d.mag_eq(m, d.zero))


def less(d: MagnitudeDomain, k: Permutation, h: Permutation) -> bool:
    """``k`` is smaller than ``h``: ``h ; k^-`` is positive."""
    _check_carrier(d, k, h)
    return d.pos(d.add(h, d.neg(k)))


def scalar_multiple(d: MagnitudeDomain, m: Permutation, k: int) -> Permutation:
    """k-fold composition of ``m`` with itself (k >= 1), by repeated doubling."""
    if not isinstance(k, int) or k < 1:
        raise ValueError("multiples start at k = 1")
    _check_carrier(d, m)
    fast = d.multiple(m, k)
    if fast is not None:
        return fast
    result, power = None, m
    while k:
        if k & 1:
            result = power if result is None else compose(result, power)
        k >>= 1
        if k:
            power = compose(power, power)
    return result
