"""First-level binary relations and permutations on a carrier.

A :class:`Relation` is either an explicit finite pair set (exact equality,
exhaustive checks) or a computable multi-map.  A :class:`Permutation` is a
total bijection given by a forward and a backward procedure.  Composition
follows the relational reading: ``x (R . S) y`` iff ``x R z`` and ``z S y``
for some ``z``, so the result applies ``R`` first.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Optional

from .exactnum import format_rational, parse_rational, stream_const, stream_sqrt

__all__ = [
    "CarrierKind", "Carrier", "CarrierMismatch", "Relation", "Permutation",
    "RATIONALS", "NATURALS", "BICIMALS", "STREAMS", "compose", "invert",
    "identity", "is_functional", "compose_rel", "invert_rel", "empty_relation",
    "empty_relation_laws", "pointwise_equal", "relation_to_json",
    "relation_from_json",
]


class CarrierMismatch(ValueError):
    pass


class CarrierKind(enum.Enum):
    RATIONAL = "rational"
    NATURAL = "natural"
    BICIMAL = "bicimal"
    STREAM = "stream"


@dataclass(frozen=True)
class Carrier:
    kind: CarrierKind
    contains: Callable[[Any], bool] = field(compare=False)
    _sampler: Callable[[random.Random, int], list] = field(compare=False, repr=False)

    def sample(self, seed: int, count: int) -> list:
        """Deterministic sample of ``count`` carrier elements."""
        return self._sampler(random.Random(seed), count)


def _sample_rationals(rng: random.Random, count: int) -> list:
    out = []
    for _ in range(count):
        den = rng.randint(1, 1000)
        out.append(Fraction(rng.randint(-5000, 5000), den))
    return out


def _sample_naturals(rng: random.Random, count: int) -> list:
    out = []
    for i in range(count):
        if i % 2:
            out.append(rng.randint(0, 200))
        else:
            out.append(rng.randint(0, 10**9))
    return out


def _sample_bicimals(rng: random.Random, count: int) -> list:
    from .bicimal import encode

    return [encode(q) for q in _sample_rationals(rng, count)]


def _sample_streams(rng: random.Random, count: int) -> list:
    out = []
    for i, q in enumerate(_sample_rationals(rng, count)):
        out.append(stream_sqrt(abs(q)) if i % 2 else stream_const(q))
    return out


def _is_bicimal(x) -> bool:
    from .bicimal import BicimalPair

    return isinstance(x, BicimalPair)


def _is_stream(x) -> bool:
    from .exactnum import StreamReal

    return isinstance(x, StreamReal)


RATIONALS = Carrier(CarrierKind.RATIONAL, lambda x: isinstance(x, Fraction), _sample_rationals)
NATURALS = Carrier(
    CarrierKind.NATURAL,
    lambda x: isinstance(x, int) and not isinstance(x, bool) and x >= 0,
    _sample_naturals,
)
BICIMALS = Carrier(CarrierKind.BICIMAL, _is_bicimal, _sample_bicimals)
STREAMS = Carrier(CarrierKind.STREAM, _is_stream, _sample_streams)

_CARRIERS = {c.kind.value: c for c in (RATIONALS, NATURALS, BICIMALS, STREAMS)}


def _check_same(a: Carrier, b: Carrier) -> None:
    if a.kind is not b.kind:
        raise CarrierMismatch(f"carrier mismatch: {a.kind.value} vs {b.kind.value}")


class Relation:
    """A binary relation on one carrier.

    ``pairs`` is set for explicit finite relations.  Otherwise ``image`` maps
    an element to a finite iterable of (witnessed) images and ``holds``, when
    given, decides ``x R y`` directly.
    """

    __slots__ = ("carrier", "pairs", "_image", "_holds")

    def __init__(
        self,
        carrier: Carrier,
        pairs: Optional[Iterable[tuple[Hashable, Hashable]]] = None,
        image: Optional[Callable[[Any], Iterable]] = None,
        holds: Optional[Callable[[Any, Any], bool]] = None,
    ):
        if (pairs is None) == (image is None):
            raise ValueError("give exactly one of pairs or image")
        self.carrier = carrier
        self.pairs = frozenset(pairs) if pairs is not None else None
        if self.pairs is not None:
            for x, y in self.pairs:
                if not (carrier.contains(x) and carrier.contains(y)):
                    raise ValueError(f"pair ({x!r}, {y!r}) outside carrier")
        self._image = image
        self._holds = holds

    @property
    def is_finite(self) -> bool:
        return self.pairs is not None

    def image(self, x) -> list:
        if self.pairs is not None:
            return [y for (a, y) in self.pairs if a == x]
        return list(self._image(x))

    def holds(self, x, y) -> bool:
        if self.pairs is not None:
            return (x, y) in self.pairs
        if self._holds is not None:
            return self._holds(x, y)
        return y in self.image(x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        if self.pairs is None or other.pairs is None:
            raise TypeError("equality is only decidable for finite pair relations")
        return self.carrier.kind is other.carrier.kind and self.pairs == other.pairs

    def __hash__(self) -> int:
        if self.pairs is None:
            return id(self)
        return hash((self.carrier.kind, self.pairs))

    def __repr__(self) -> str:
        if self.pairs is not None:
            return f"Relation({self.carrier.kind.value}, {sorted(self.pairs, key=repr)})"
        return f"Relation({self.carrier.kind.value}, <computable>)"


@dataclass(frozen=True, eq=False)
class Permutation:
    carrier: Carrier
    fwd: Callable[[Any], Any]
    bwd: Callable[[Any], Any]
    name: str = "perm"

    def __call__(self, x):
        return self.fwd(x)

    def as_relation(self) -> Relation:
        return Relation(self.carrier, image=lambda x: (self.fwd(x),), holds=lambda x, y: self.fwd(x) == y)

    def __repr__(self) -> str:
        return f"Permutation({self.name})"


def identity(carrier: Carrier) -> Permutation:
    return Permutation(carrier, lambda x: x, lambda x: x, "id")


def compose(r: Permutation, s: Permutation) -> Permutation:
    """``r`` then ``s``."""
    _check_same(r.carrier, s.carrier)
    rf, rb, sf, sb = r.fwd, r.bwd, s.fwd, s.bwd
    return Permutation(r.carrier, lambda x: sf(rf(x)), lambda y: rb(sb(y)), f"({r.name};{s.name})")


def invert(r: Permutation) -> Permutation:
    return Permutation(r.carrier, r.bwd, r.fwd, f"{r.name}^-")


def pointwise_equal(p: Permutation, q: Permutation, points: Iterable) -> bool:
    """Sampled extensional equality (both directions)."""
    _check_same(p.carrier, q.carrier)
    return all(p.fwd(x) == q.fwd(x) and p.bwd(x) == q.bwd(x) for x in points)


def _as_relation(r) -> Relation:
    return r.as_relation() if isinstance(r, Permutation) else r


def is_functional(r, probe: Optional[Iterable] = None) -> bool:
    """No element has two distinct images.

    Exhaustive for finite pair relations; over ``probe`` otherwise.
    """
    rel = _as_relation(r)
    if rel.pairs is not None:
        seen: dict = {}
        for x, y in rel.pairs:
            if x in seen and seen[x] != y:
                return False
            seen[x] = y
        return True
    if probe is None:
        raise ValueError("a probe set is required for computable relations")
    for x in probe:
        imgs = rel.image(x)
        if any(y != imgs[0] for y in imgs[1:]):
            return False
    return True


def invert_rel(r) -> Relation:
    rel = _as_relation(r)
    if rel.pairs is not None:
        return Relation(rel.carrier, pairs=((y, x) for x, y in rel.pairs))
    if isinstance(r, Permutation):
        return invert(r).as_relation()
    raise TypeError("inverse of a computable multi-map needs a finite pair relation")


def compose_rel(r, s) -> Relation:
    """Relational composition; finite pair relations compose exactly."""
    a, b = _as_relation(r), _as_relation(s)
    _check_same(a.carrier, b.carrier)
    if a.pairs is not None and b.pairs is not None:
        by_src: dict = {}
        for z, y in b.pairs:
            by_src.setdefault(z, []).append(y)
        return Relation(a.carrier, pairs=((x, y) for x, z in a.pairs for y in by_src.get(z, ())))
    if a.pairs is not None and not a.pairs:
        return empty_relation(a.carrier)

    def image(x):
        out = []
        for z in a.image(x):
            for y in b.image(z):
                if y not in out:
                    out.append(y)
        return out

    return Relation(a.carrier, image=image)


def empty_relation(carrier: Carrier) -> Relation:
    return Relation(carrier, pairs=())


def empty_relation_laws(carrier: Carrier = RATIONALS, others: Iterable[Relation] = ()) -> dict[str, bool]:
    """Extensional identities of the empty relation V."""
    v = empty_relation(carrier)
    laws = {
        "V^- = V": invert_rel(v) == v,
        "V;V^- = V": compose_rel(v, invert_rel(v)) == v,
        "V^-;V = V": compose_rel(invert_rel(v), v) == v,
        "functional(V)": is_functional(v),
    }
    for i, r in enumerate(others):
        laws[f"V;r{i} = V"] = compose_rel(v, r) == v
        laws[f"r{i};V = V"] = compose_rel(r, v) == v
    return laws


def _encode_elem(kind: CarrierKind, x) -> Any:
    if kind is CarrierKind.RATIONAL:
        return format_rational(x)
    if kind is CarrierKind.NATURAL:
        return x
    if kind is CarrierKind.BICIMAL:
        return x.to_text()
    raise TypeError(f"{kind.value} elements have no finite serialization")


def _decode_elem(kind: CarrierKind, x) -> Any:
    if kind is CarrierKind.RATIONAL:
        return parse_rational(str(x))
    if kind is CarrierKind.NATURAL:
        return int(x)
    if kind is CarrierKind.BICIMAL:
        from .bicimal import BicimalPair

        return BicimalPair.from_text(x)
    raise TypeError(f"{kind.value} elements have no finite serialization")


def relation_to_json(r: Relation) -> str:
    if r.pairs is None:
        raise TypeError("only finite pair relations serialize")
    kind = r.carrier.kind
    pairs = sorted(
        ([_encode_elem(kind, x), _encode_elem(kind, y)] for x, y in r.pairs), key=json.dumps
    )
    return json.dumps({"carrier": kind.value, "pairs": pairs})


def relation_from_json(text: str) -> Relation:
    data = json.loads(text)
    carrier = _CARRIERS[data["carrier"]]
    kind = carrier.kind
    return Relation(carrier, pairs=((_decode_elem(kind, x), _decode_elem(kind, y)) for x, y in data["pairs"]))
