"""A small formula evaluator used as an independent oracle for finite classes.

Formulas are trees over relation terms (variables, inverse, composition),
point quantifiers over the finite carrier, relation quantifiers over a given
universe of relations, and class quantifiers over subsets of the listed
class.  Nothing is simplified: every atom ``x t y`` is expanded into
quantifiers over carrier points, and class membership is extensional
coincidence with some listed member.

The class conditions are written out as formulas by :func:`positival`,
:func:`positive` and :func:`magnitudes`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable

# -- terms -----------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Inv:
    t: Any


@dataclass(frozen=True)
class Comp:
    left: Any
    right: Any


# -- formulas -------------------------------------------------------------------


@dataclass(frozen=True)
class Holds:  # x t y
    t: Any
    x: str
    y: str


@dataclass(frozen=True)
class Eq:  # point equality
    x: str
    y: str


@dataclass(frozen=True)
class Not:
    f: Any


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Implies:
    a: Any
    b: Any


@dataclass(frozen=True)
class Iff:
    a: Any
    b: Any


@dataclass(frozen=True)
class AllPt:
    v: str
    body: Any


@dataclass(frozen=True)
class SomePt:
    v: str
    body: Any


@dataclass(frozen=True)
class AllRel:
    v: str
    body: Any


@dataclass(frozen=True)
class SomeRel:
    v: str
    body: Any


@dataclass(frozen=True)
class AllSub:  # class variable ranging over subsets of the listed class
    v: str
    body: Any


@dataclass(frozen=True)
class SomeSub:
    v: str
    body: Any


@dataclass(frozen=True)
class In:  # C(t): t coincides extensionally with a member of class C
    c: str
    t: Any


def conj(*fs) -> And:
    return And(tuple(fs))


def disj(*fs) -> Or:
    return Or(tuple(fs))


_fresh = itertools.count()


def _v(prefix: str) -> str:
    return f"{prefix}{next(_fresh)}"


def coincide(t, u) -> Any:
    x, y = _v("x"), _v("y")
    return AllPt(x, AllPt(y, Iff(Holds(t, x, y), Holds(u, x, y))))


def functional(t) -> Any:
    x, y, z = _v("x"), _v("y"), _v("z")
    return AllPt(x, AllPt(y, Implies(Holds(t, x, y), AllPt(z, Implies(Holds(t, x, z), Eq(y, z))))))


def dom(c: str, t) -> Any:
    """t belongs to the domain of class c: a member, a member's inverse, or S;S^-."""
    s = _v("S")
    return disj(
        In(c, t),
        SomeRel(s, conj(In(c, Var(s)), disj(coincide(t, Inv(Var(s))), coincide(t, Comp(Var(s), Inv(Var(s))))))),
    )


def positival(c: str, starred: bool = False) -> Any:
    r, s = _v("R"), _v("S")
    R, S = Var(r), Var(s)
    x, y, z = _v("x"), _v("y"), _v("z")
    inner = conj(
        AllPt(x, Iff(SomePt(y, Holds(R, x, y)), SomePt(z, Holds(S, z, x)))),
        In(c, Comp(R, S)),
        dom(c, Comp(R, Inv(S))),
        dom(c, Comp(Inv(R), S)),
    )
    own = [AllRel(s, Implies(In(c, S), inner)), functional(R), functional(Inv(R))]
    if not starred:
        own.append(Not(In(c, Comp(R, Inv(R)))))
    return AllRel(r, Implies(In(c, R), conj(*own)))


def rim(c: str, y: str, t) -> Any:
    s = _v("S")
    S = Var(s)
    return AllRel(s, Implies(conj(In(c, S), In(c, Comp(t, Inv(S)))), In(y, S)))


def limit(c: str, y: str, t, starred: bool = False) -> Any:
    s = _v("S")
    S = Var(s)
    return conj(
        positival(c, starred),
        In(c, t),
        rim(c, y, t),
        Not(SomeRel(s, conj(In(c, S), In(c, Comp(S, Inv(t))), rim(c, y, S)))),
    )


def positive(c: str, starred: bool = False) -> Any:
    r, s, t, y = _v("R"), _v("S"), _v("T"), _v("Y")
    R, S, T = Var(r), Var(s), Var(t)
    r2, s2 = _v("R"), _v("S")
    density = AllRel(r, Implies(In(c, R), SomeRel(s, conj(In(c, S), In(c, Comp(R, Inv(S)))))))
    completeness = AllSub(
        y,
        Implies(
            conj(
                SomeRel(r2, conj(rim(c, y, Var(r2)), In(c, Var(r2)))),
                SomeRel(s2, conj(In(c, Var(s2)), Not(In(y, Var(s2))))),
            ),
            SomeRel(t, limit(c, y, T, starred)),
        ),
    )
    return conj(positival(c, starred), density, completeness)


def magnitudes(c: str, starred: bool = False) -> Any:
    y, r = _v("Y"), _v("R")
    R = Var(r)
    # the class variable Y is re-bound as the class under test of `positive`
    return SomeSub(y, conj(_rebind(positive("__C", starred), "__C", y), AllRel(r, Iff(In(c, R), dom(y, R)))))


def _rebind(f, old: str, new: str):
    """Rename free class variable ``old`` to ``new``."""
    if isinstance(f, In):
        return In(new if f.c == old else f.c, f.t)
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_rebind(p, old, new) for p in f.parts))
    if isinstance(f, Not):
        return Not(_rebind(f.f, old, new))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_rebind(f.a, old, new), _rebind(f.b, old, new))
    if isinstance(f, (AllPt, SomePt, AllRel, SomeRel, AllSub, SomeSub)):
        return type(f)(f.v, _rebind(f.body, old, new))
    return f


# -- evaluation -------------------------------------------------------------------


class Model:
    """A finite carrier, a universe of relations, and named classes."""

    def __init__(self, carrier: Iterable, universe: Iterable[frozenset], classes: dict[str, list[frozenset]]):
        self.carrier = list(carrier)
        self.universe = list(dict.fromkeys(universe))
        self.classes = classes
        self.sub_range = {name: members for name, members in classes.items()}

    def holds(self, t, x, y, env) -> bool:
        if isinstance(t, Var):
            return (x, y) in env[t.name]
        if isinstance(t, Inv):
            return self.holds(t.t, y, x, env)
        if isinstance(t, Comp):
            return any(self.holds(t.left, x, z, env) and self.holds(t.right, z, y, env) for z in self.carrier)
        raise TypeError(t)

    def member(self, c: str, t, env) -> bool:
        cls = env[c]
        return any(
            all(self.holds(t, x, y, env) == ((x, y) in s) for x in self.carrier for y in self.carrier)
            for s in cls
        )

    def ev(self, f, env: dict) -> bool:
        if isinstance(f, Holds):
            return self.holds(f.t, env[f.x], env[f.y], env)
        if isinstance(f, Eq):
            return env[f.x] == env[f.y]
        if isinstance(f, Not):
            return not self.ev(f.f, env)
        if isinstance(f, And):
            return all(self.ev(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(self.ev(p, env) for p in f.parts)
        if isinstance(f, Implies):
            return (not self.ev(f.a, env)) or self.ev(f.b, env)
        if isinstance(f, Iff):
            return self.ev(f.a, env) == self.ev(f.b, env)
        if isinstance(f, (AllPt, SomePt)):
            q = all if isinstance(f, AllPt) else any
            return q(self.ev(f.body, {**env, f.v: p}) for p in self.carrier)
        if isinstance(f, (AllRel, SomeRel)):
            q = all if isinstance(f, AllRel) else any
            return q(self.ev(f.body, {**env, f.v: r}) for r in self.universe)
        if isinstance(f, (AllSub, SomeSub)):
            q = all if isinstance(f, AllSub) else any
            return q(self.ev(f.body, {**env, f.v: sub}) for sub in self._subsets(env))
        if isinstance(f, In):
            return self.member(f.c, f.t, env)
        raise TypeError(f)

    def _subsets(self, env) -> list[list[frozenset]]:
        base = env["X"]
        return [list(c) for k in range(len(base) + 1) for c in itertools.combinations(base, k)]


def term_universe(carrier, members: list[frozenset]) -> list[frozenset]:
    """Members, the empty relation, the identity, and every one-step term over members.

    Each relation quantifier in the class conditions is either guarded by
    membership or only needs these terms, so quantifying over them decides
    the conditions exactly.
    """
    pts = list(carrier)

    def ext(f: Callable[[Any, Any], bool]) -> frozenset:
        return frozenset((x, y) for x in pts for y in pts if f(x, y))

    out = list(members) + [frozenset(), ext(lambda x, y: x == y)]
    for r in members:
        out.append(ext(lambda x, y, r=r: (y, x) in r))
        for s in members:
            out.append(ext(lambda x, y, r=r, s=s: any((x, z) in r and (z, y) in s for z in pts)))
            out.append(ext(lambda x, y, r=r, s=s: any((x, z) in r and (y, z) in s for z in pts)))
            out.append(ext(lambda x, y, r=r, s=s: any((z, x) in r and (z, y) in s for z in pts)))
    return out


def evaluate_class(carrier, members: list[frozenset]) -> dict[str, bool]:
    """L, P, M and starred variants by plain quantifier expansion."""
    members = list(dict.fromkeys(members))
    model = Model(carrier, term_universe(carrier, members), {"X": members})
    env = {"X": members}
    return {
        "L": model.ev(positival("X"), env),
        "L*": model.ev(positival("X", True), env),
        "P": model.ev(positive("X"), env),
        "P*": model.ev(positive("X", True), env),
        "M": model.ev(magnitudes("X"), env),
        "M*": model.ev(magnitudes("X", True), env),
    }
