"""Hereditarily finite extensions: the empty extension, singletons, and the
successor chain ``0, {0}, {{0}}, ...`` with Peano-style checks on its prefixes.

Sets are hash-consed: building a set with the same elements twice returns the
same object, so extensional equality is identity.
"""

from __future__ import annotations

import json
import random
import threading
import weakref
from typing import Callable, Iterable, Optional, Sequence

from .report import FAIL, PASS, CheckRecord, CheckReport

__all__ = [
    "HFSet", "empty_ext", "succ", "e_sequence", "depth", "is_chain_element",
    "check_peano_structure", "check_peano_prefix", "random_bit_properties",
]


class HFSet:
    __slots__ = ("elements", "_hash", "_depth", "__weakref__")

    _table: "weakref.WeakValueDictionary[frozenset, HFSet]" = weakref.WeakValueDictionary()
    _lock = threading.Lock()

    def __new__(cls, elements: Iterable["HFSet"] = ()):
        elems = frozenset(elements)
        for e in elems:
            if not isinstance(e, HFSet):
                raise TypeError("elements of an HFSet must be HFSets")
        with cls._lock:
            found = cls._table.get(elems)
            if found is not None:
                return found
            obj = super().__new__(cls)
            obj.elements = elems
            obj._hash = hash(elems)
            obj._depth = 1 + max((e._depth for e in elems), default=-1)
            cls._table[elems] = obj
            return obj

    def __eq__(self, other) -> bool:
        return self is other

    def __hash__(self) -> int:
        return self._hash

    def __contains__(self, x: "HFSet") -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def to_text(self) -> str:
        inner = sorted(e.to_text() for e in self.elements)
        return "{" + ", ".join(inner) + "}"

    def to_json_obj(self) -> list:
        return sorted((e.to_json_obj() for e in self.elements), key=json.dumps)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "HFSet":
        def build(obj) -> HFSet:
            if not isinstance(obj, list):
                raise ValueError("HFSet JSON is nested arrays")
            return cls(build(o) for o in obj)

        return build(json.loads(text))

    @classmethod
    def from_text(cls, text: str) -> "HFSet":
        pos = 0

        def parse() -> HFSet:
            nonlocal pos
            if text[pos] != "{":
                raise ValueError(f"expected '{{' at {pos}")
            pos += 1
            elems = []
            while True:
                while text[pos] in " ,":
                    pos += 1
                if text[pos] == "}":
                    pos += 1
                    return cls(elems)
                elems.append(parse())

        text = text.strip()
        result = parse()
        if text[pos:].strip():
            raise ValueError("trailing text")
        return result

    def __repr__(self) -> str:
        return self.to_text()


def empty_ext() -> HFSet:
    return HFSet()


def succ(x: HFSet) -> HFSet:
    """The singleton ``{x}``."""
    return HFSet((x,))


def depth(x: HFSet) -> int:
    return x._depth


def e_sequence(k: int) -> list[HFSet]:
    if k < 1:
        raise ValueError("k must be >= 1")
    out = [empty_ext()]
    while len(out) < k:
        out.append(succ(out[-1]))
    return out


def is_chain_element(x: HFSet) -> bool:
    """Structural recursion: x is empty, or a singleton of a chain element."""
    while len(x):
        if len(x) != 1:
            return False
        (x,) = x.elements
    return True


# -- Peano-style checks ------------------------------------------------------------

Property = Callable[[int, object], bool]  # (position in prefix, element) -> bool


def check_peano_structure(
    elements: Sequence,
    zero,
    rel: Callable[[object, object], bool],
    properties: Sequence[Callable[[object], bool]] = (),
    suite: str = "peano",
) -> CheckReport:
    """Peano conditions for a successor relation ``rel`` on a finite prefix.

    The prefix is a list of elements starting with ``zero``; ``rel(x, y)``
    reads "y succeeds x".  Induction is checked for each property: if it holds
    at zero and is hereditary along ``rel`` within the prefix, it holds at
    every element of the prefix.
    """
    rep = CheckReport(suite, "finite prefix")
    pairs = [(x, y) for x in elements for y in elements if rel(x, y)]
    n = len(elements)

    def first(name: str, bad: Optional[str], count: int) -> None:
        rep.add(CheckRecord(name, FAIL if bad else PASS, count, bad, "exact"))

    # functional: x S y and x S z imply y = z
    bad = next((f"{x!r} -> {y!r}, {z!r}" for x, y in pairs for x2, z in pairs if x is x2 and y != z), None)
    first("successor functional", bad, len(pairs))
    bad = next((f"{x!r}, {z!r} -> {y!r}" for x, y in pairs for z, y2 in pairs if y == y2 and x != z), None)
    first("successor injective", bad, len(pairs))
    bad = next((f"{x!r} -> {zero!r}" for x, y in pairs if y == zero), None)
    first("zero not a successor", bad, len(pairs))

    # acyclic: no element reaches itself along one or more steps
    succs: dict = {}
    for x, y in pairs:
        succs.setdefault(x, []).append(y)
    bad = None
    for start in elements:
        seen, frontier = set(), list(succs.get(start, ()))
        while frontier and bad is None:
            y = frontier.pop()
            if y == start:
                bad = f"cycle through {start!r}"
            elif y not in seen:
                seen.add(y)
                frontier.extend(succs.get(y, ()))
        if bad:
            break
    first("acyclic", bad, n)

    bad = None
    for i, prop in enumerate(properties):
        base = prop(zero)
        hereditary = all(prop(y) for x, y in pairs if prop(x))
        if base and hereditary:
            miss = next((x for x in elements if not prop(x)), None)
            if miss is not None:
                bad = f"property {i} fails at {miss!r}"
                break
    first("induction schema", bad, len(properties))
    return rep


def random_bit_properties(seed: int, count: int, k: int) -> list[Callable[[HFSet], bool]]:
    """Decidable properties of chain elements given by random bit tables over depth.

    Half of them are built to be hereditary from a random start so the
    induction conclusion is actually exercised.
    """
    rng = random.Random(seed)
    props = []
    for i in range(count):
        if i % 2:
            bits = [rng.randrange(2) for _ in range(k)]
        else:
            bits = [1] * k  # hereditary from the base
            if rng.randrange(2):
                cut = rng.randrange(1, k)
                bits = [1] * cut + [0] * (k - cut)  # holds at base, heredity broken at cut
        props.append(lambda x, bits=bits: bool(bits[depth(x)]) if depth(x) < len(bits) else False)
    return props


def check_peano_prefix(k: int, properties: Sequence[Callable[[HFSet], bool]] | None = None, seed: int = 0,
                       n_properties: int = 100) -> CheckReport:
    if k < 2:
        raise ValueError("k must be >= 2")
    seq = e_sequence(k)
    if properties is None:
        properties = random_bit_properties(seed, n_properties, k)
    rep = check_peano_structure(seq, seq[0], lambda x, y: y == succ(x), properties, "peano-prefix")
    distinct = len(set(seq)) == len(seq)
    rep.add(CheckRecord("pairwise distinct", PASS if distinct else FAIL, k,
                        None if distinct else "repeated element", "exact"))
    rep.seed = seed
    return rep
