"""Checking the positival / positive-class conditions on magnitude domains.

Infinite classes are checked on deterministic samples, each instance decided
exactly by the model.  Finite classes (``FiniteClass``) are evaluated
exhaustively.  Subclasses in the completeness conditions are value cuts
``{S : value(S) < bound}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .domains import MagnitudeDomain, in_domain, less, scalar_multiple
from .exactnum import Ordering, format_rational
from .relations import Permutation, Relation, compose_rel, invert_rel, is_functional
from .report import FAIL, INDETERMINATE, PASS, CheckRecord, CheckReport, run_check

__all__ = [
    "check_positival", "check_order", "check_density", "check_archimedean",
    "CutSubclass", "upper_rim", "upper_rim_sampled", "upper_limit_search", "Found",
    "Refuted", "Indeterminate", "RimStep", "FiniteClass", "finite_class_check",
    "check_domain",
]


def _points(d: MagnitudeDomain, seed: int, count: int) -> list:
    return d.point_sampler(seed, max(count, 1))


def _pair_desc(d: MagnitudeDomain):
    return lambda rs: "(" + ", ".join(d.describe(m) for m in rs[:-1]) + ")"


# -- positival conditions ------------------------------------------------------

def check_positival(d: MagnitudeDomain, seed: int = 0, n_samples: int = 1000, points_per: int = 3) -> CheckReport:
    """Functionality, identity exclusion, range condition, closure and domain membership."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rs = d.mag_sampler(seed, n_samples)
    ss = d.mag_sampler(seed + 1, n_samples)
    pts = _points(d, seed + 2, n_samples * points_per)
    items = [
        (r, s, pts[i * points_per:(i + 1) * points_per]) for i, (r, s) in enumerate(zip(rs, ss))
    ]
    desc = _pair_desc(d)
    rep = CheckReport("positival", str(d.model_id), seed)

    def functional(it):
        r, _, xs = it
        return is_functional(r, xs) and is_functional(d.neg(r), xs)

    def round_trip(it):
        r, _, xs = it
        verdicts = [d.point_eq(r.bwd(r.fwd(x)), x) for x in xs] + [d.point_eq(r.fwd(r.bwd(x)), x) for x in xs]
        if False in verdicts:
            return False
        return None if None in verdicts else True

    def identity_excluded(it):
        r, _, _ = it
        return not d.pos(d.add(r, d.neg(r)))

    def range_condition(it):
        # every point has an R-image and an S-preimage, both inside the carrier
        r, s, xs = it
        return all(d.carrier.contains(r.fwd(x)) and d.carrier.contains(s.bwd(x)) for x in xs)

    def closure(it):
        r, s, _ = it
        return d.pos(d.add(r, s))

    def dom_r_sinv(it):
        r, s, _ = it
        return in_domain(d, d.add(r, d.neg(s)))

    def dom_rinv_s(it):
        r, s, _ = it
        return in_domain(d, d.add(d.neg(r), s))

    rep.add(run_check("functional R and R^-", items, functional, desc))
    rep.add(run_check("permutation round trip", items, round_trip, desc))
    rep.add(run_check("identity excluded", items, identity_excluded, desc))
    rep.add(CheckRecord("identity not positive", FAIL if d.pos(d.zero) else PASS, 1,
                        "identity" if d.pos(d.zero) else None, "exact"))
    rep.add(run_check("range condition", items, range_condition, desc))
    rep.add(run_check("closure R;S", items, closure, desc))
    rep.add(run_check("domain R;S^-", items, dom_r_sinv, desc))
    rep.add(run_check("domain R^-;S", items, dom_rinv_s, desc))
    return rep


def check_order(d: MagnitudeDomain, seed: int = 0, n_samples: int = 1000) -> CheckReport:
    """Irreflexivity, asymmetry, transitivity, right-invariance, inverse trichotomy."""
    ks = d.domain_sampler(seed, n_samples)
    hs = d.domain_sampler(seed + 1, n_samples)
    js = d.domain_sampler(seed + 2, n_samples)
    triples = [(k, h, j, None) for k, h, j in zip(ks, hs, js)]
    desc = _pair_desc(d)
    rep = CheckReport("order", str(d.model_id), seed)

    def irreflexive(t):
        return not less(d, t[0], t[0])

    def asymmetric(t):
        k, h = t[0], t[1]
        return not (less(d, k, h) and less(d, h, k))

    def transitive(t):
        k, h, j, _ = t
        # order the triple so that the premise is exercised
        a, b, c = _sorted3(d, k, h, j)
        if less(d, a, b) and less(d, b, c):
            return less(d, a, c)
        return True

    def right_invariant(t):
        k, h, j, _ = t
        if less(d, k, h):
            return less(d, d.add(k, j), d.add(h, j))
        if less(d, h, k):
            return less(d, d.add(h, j), d.add(k, j))
        return True

    def trichotomy(t):
        k, h = d.neg(t[0]), d.neg(t[1])
        if less(d, h, k) or less(d, k, h):
            return True
        return d.mag_eq(h, k)  # None: equality undecided within fuel

    rep.add(run_check("irreflexivity", triples, irreflexive, desc))
    rep.add(run_check("asymmetry", triples, asymmetric, desc))
    rep.add(run_check("transitivity", triples, transitive, desc))
    rep.add(run_check("right invariance", triples, right_invariant, desc))
    rep.add(run_check("inverse trichotomy", triples, trichotomy, desc))
    return rep


def _sorted3(d: MagnitudeDomain, *ms):
    out = list(ms)
    for i in range(3):
        for j in range(2 - i):
            if less(d, out[j + 1], out[j]):
                out[j], out[j + 1] = out[j + 1], out[j]
    return out


def check_density(d: MagnitudeDomain, seed: int = 0, n_samples: int = 1000) -> CheckReport:
    """Each sampled positive R has a positive S with R;S^- positive (the halving witness)."""
    rep = CheckReport("density", str(d.model_id), seed)
    rs = d.mag_sampler(seed, n_samples)
    if not hasattr(d, "half"):
        rep.add(CheckRecord("density witness", INDETERMINATE, 0, "no witness strategy"))
        return rep

    witnesses: list = []

    def dense(r):
        s = d.half(r)
        if s is None:
            return None
        ok = d.pos(s) and d.pos(d.add(r, d.neg(s)))
        if ok:
            witnesses.append(s)
        return ok

    rep.add(run_check("density witness", rs, dense, d.describe))
    return rep


def density_witness(d: MagnitudeDomain, r: Permutation) -> Optional[Permutation]:
    s = d.half(r)
    if s is not None and d.pos(s) and d.pos(d.add(r, d.neg(s))):
        return s
    return None


def archimedean_index(d: MagnitudeDomain, r: Permutation, s: Permutation, fuel: int) -> Optional[int]:
    """Least n <= fuel with s below n*r, or None past fuel."""
    if fuel < 1:
        raise ValueError("fuel must be >= 1")

    def above(n: int) -> bool:
        return less(d, s, scalar_multiple(d, r, n))

    lo, hi = 0, 1  # invariant: not above(lo) (vacuous for 0), above(hi) once found
    while not above(hi):
        lo = hi
        if hi >= fuel:
            return None
        hi = min(2 * hi, fuel)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if above(mid):
            hi = mid
        else:
            lo = mid
    return hi


def check_archimedean(d: MagnitudeDomain, seed: int = 0, n_samples: int = 1000, fuel: int = 10**6) -> CheckReport:
    rep = CheckReport("archimedean", str(d.model_id), seed, fuel)
    pairs = [(r, s, None) for r, s in zip(d.mag_sampler(seed, n_samples), d.mag_sampler(seed + 1, n_samples))]

    def arch(p):
        n = archimedean_index(d, p[0], p[1], fuel)
        return None if n is None else True

    rep.add(run_check("archimedean witness", pairs, arch, _pair_desc(d)))
    return rep


# -- rims and limits ------------------------------------------------------------

@dataclass(frozen=True)
class CutSubclass:
    """The subclass ``{S : value(S) < bound}``."""

    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))

    def contains(self, d: MagnitudeDomain, s: Permutation) -> bool:
        return d.value(s) < self.bound


def _require_analytic(d: MagnitudeDomain) -> None:
    if not d.analytic:
        raise ValueError("cut subclasses need a model with exact values")


def upper_rim(d: MagnitudeDomain, y: CutSubclass, r: Permutation) -> bool:
    """Every positive S below ``r`` lies in ``y``; exactly, value(r) <= bound."""
    _require_analytic(d)
    if not d.pos(r):
        raise ValueError("r is not in the positive class")
    return d.value(r) <= y.bound


def upper_rim_sampled(d: MagnitudeDomain, y: CutSubclass, r: Permutation, seed: int = 0, n: int = 200) -> bool:
    """The rim condition evaluated literally over sampled positives.

    Besides random positives the sample includes magnitudes just below
    ``r`` and just below / above the bound, where a violation would sit.
    """
    _require_analytic(d)
    if not d.pos(r):
        raise ValueError("r is not in the positive class")
    v = d.value(r)
    cands = d.mag_sampler(seed, n)
    for lo, hi in ((0, v), (y.bound, v), (v / 2, v)):
        if 0 <= lo < hi:
            cands.append(d.element(d.round_into(lo, hi)))
    for s in cands:
        if d.pos(s) and d.pos(d.add(r, d.neg(s))) and not y.contains(d, s):
            return False
    return True


@dataclass(frozen=True)
class Found:
    magnitude: Permutation
    value: Fraction


@dataclass(frozen=True)
class RimStep:
    candidate: Fraction
    greater: Fraction
    verified: bool


@dataclass(frozen=True)
class Refuted:
    trace: tuple[RimStep, ...]

    @property
    def rounds(self) -> int:
        return len(self.trace)

    @property
    def verified(self) -> bool:
        return all(step.verified for step in self.trace)


@dataclass(frozen=True)
class Indeterminate:
    reason: str


def upper_limit_search(
    d: MagnitudeDomain, y: CutSubclass, fuel: int = 50, rounds: int = 20
) -> Union[Found, Refuted, Indeterminate]:
    """Look for the greatest upper rim of ``y``.

    When the bound is a value of the model its magnitude is the limit.
    Otherwise every rim has value below the bound, and the refuter exhibits,
    round after round, a strictly greater rim strictly inside
    ``(value(u), bound)``, rounded into the model's value set.
    """
    _require_analytic(d)
    b = y.bound
    if b <= 0:
        raise ValueError("a cut at a non-positive bound has no upper rim among positives")
    if d.admits(b):
        t = d.element(b)
        # t is a rim, and any magnitude above it is not (it has t's successor-range below it)
        above = d.element(d.round_into(b, b + 1))
        if upper_rim(d, y, t) and not upper_rim(d, y, above):
            return Found(t, b)
        return Indeterminate("bound admitted but limit check failed")  # pragma: no cover
    if fuel < rounds:
        return Indeterminate(f"fuel {fuel} below the {rounds} demonstration rounds")
    trace = []
    u = d.element(d.round_into(0, b))
    for _ in range(rounds):
        w = d.element(d.round_into(d.value(u), b))
        ok = upper_rim(d, y, u) and upper_rim(d, y, w) and less(d, u, w)
        trace.append(RimStep(d.value(u), d.value(w), ok))
        u = w
    return Refuted(tuple(trace))


def check_completeness(d: MagnitudeDomain, bound: Fraction, fuel: int = 50) -> CheckRecord:
    res = upper_limit_search(d, CutSubclass(bound), fuel)
    name = f"upper limit at {format_rational(Fraction(bound))}"
    if isinstance(res, Found):
        return CheckRecord(name, PASS, 1, f"limit {format_rational(res.value)}", "exact")
    if isinstance(res, Refuted):
        last = res.trace[-1]
        return CheckRecord(name, FAIL, res.rounds,
                           f"no greatest rim; {res.rounds} rounds, last {format_rational(last.candidate)}"
                           f" < {format_rational(last.greater)}", "exact")
    return CheckRecord(name, INDETERMINATE, 0, res.reason, "exact")


def check_domain(d: MagnitudeDomain, seed: int = 0, n_samples: int = 1000, fuel: int = 10**6,
                 completeness_bound: Optional[Fraction] = None) -> CheckReport:
    """All sampled suites for one model, merged into one report."""
    rep = CheckReport("check-domain", str(d.model_id), seed, fuel)
    for sub in (
        check_positival(d, seed, n_samples),
        check_order(d, seed, n_samples),
        check_density(d, seed, n_samples),
        check_archimedean(d, seed, n_samples, fuel),
    ):
        for r in sub.records:
            rep.add(CheckRecord(f"{sub.suite}: {r.name}", r.status, r.samples, r.witness, r.mode))
    if completeness_bound is not None and d.analytic:
        r = check_completeness(d, completeness_bound, min(fuel, 10**3))
        rep.add(CheckRecord(f"completeness: {r.name}", r.status, r.samples, r.witness, r.mode))
    return rep


# -- finite classes ----------------------------------------------------------------

@dataclass(frozen=True)
class FiniteClass:
    """A class listed exhaustively: finite relations over a finite carrier."""

    carrier: tuple
    relations: tuple

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        rels = []
        for r in self.relations:
            if not r.is_finite:
                raise ValueError("finite classes hold finite pair relations")
            for x, y in r.pairs:
                if x not in self.carrier or y not in self.carrier:
                    raise ValueError(f"pair ({x!r}, {y!r}) outside the finite carrier")
            if r not in rels:
                rels.append(r)
        object.__setattr__(self, "relations", tuple(rels))


class _Finite:
    """Exact evaluation of the class conditions over one finite class."""

    def __init__(self, c: FiniteClass):
        self.c = c
        self.members = frozenset(r.pairs for r in c.relations)
        self.carrier = c.carrier

    @staticmethod
    def inv(r: frozenset) -> frozenset:
        return frozenset((y, x) for x, y in r)

    @staticmethod
    def comp(r: frozenset, s: frozenset) -> frozenset:
        return frozenset((x, y) for x, z in r for z2, y in s if z == z2)

    @staticmethod
    def functional(r: frozenset) -> bool:
        seen: dict = {}
        for x, y in r:
            if seen.setdefault(x, y) != y:
                return False
        return True

    def dom_of(self, ys: frozenset) -> frozenset:
        """Members of ``ys``, their inverses and each S;S^-."""
        return frozenset(ys) | {self.inv(s) for s in ys} | {self.comp(s, self.inv(s)) for s in ys}

    def positival(self, xs: frozenset, starred: bool) -> bool:
        dom = self.dom_of(xs)
        for r in xs:
            if not (self.functional(r) and self.functional(self.inv(r))):
                return False
            if not starred and self.comp(r, self.inv(r)) in xs:
                return False
            left = {x for x, _ in r}
            for s in xs:
                if left != {y for _, y in s}:
                    return False
                if self.comp(r, s) not in xs:
                    return False
                if self.comp(r, self.inv(s)) not in dom or self.comp(self.inv(r), s) not in dom:
                    return False
        return True

    def rim(self, xs: frozenset, ys: frozenset, r: frozenset) -> bool:
        return all(s in ys for s in xs if self.comp(r, self.inv(s)) in xs)

    def limit_exists(self, xs: frozenset, ys: frozenset, lx: bool) -> bool:
        if not lx:
            return False
        for t in xs:
            if not self.rim(xs, ys, t):
                continue
            if not any(self.comp(s, self.inv(t)) in xs and self.rim(xs, ys, s) for s in xs):
                return True
        return False

    def positive(self, xs: frozenset, starred: bool) -> bool:
        lx = self.positival(xs, starred)
        if not lx:
            return False
        for r in xs:
            if not any(self.comp(r, self.inv(s)) in xs for s in xs):
                return False
        members = sorted(xs, key=sorted_key)
        for k in range(len(members) + 1):
            for sub in itertools.combinations(members, k):
                ys = frozenset(sub)
                has_rim = any(self.rim(xs, ys, r) for r in xs)
                proper = any(s not in ys for s in xs)
                if has_rim and proper and not self.limit_exists(xs, ys, lx):
                    return False
        return True

    def magnitudes(self, xs: frozenset, starred: bool) -> bool:
        members = sorted(xs, key=sorted_key)
        for k in range(len(members) + 1):
            for sub in itertools.combinations(members, k):
                ys = frozenset(sub)
                if self.dom_of(ys) == xs and self.positive(ys, starred):
                    return True
        return False


def sorted_key(r: frozenset):
    return sorted(map(repr, r))


def finite_class_check(c: FiniteClass) -> dict[str, bool]:
    """Exact L, P, M and their starred variants for a finite class."""
    f = _Finite(c)
    xs = f.members
    return {
        "L": f.positival(xs, False),
        "L*": f.positival(xs, True),
        "P": f.positive(xs, False),
        "P*": f.positive(xs, True),
        "M": f.magnitudes(xs, False),
        "M*": f.magnitudes(xs, True),
    }


VERDICT_ORDER = ("L", "L*", "P", "P*", "M", "M*")
