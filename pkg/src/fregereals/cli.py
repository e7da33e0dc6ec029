"""Command-line front end.

Every subcommand builds a :class:`CheckReport`; the text form lists checks by
name and the ``--json`` form mirrors it.  Exit status is 0 when no check
failed (indeterminate checks only add a warning on stderr), 1 when a check
failed, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import random
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .axioms import FiniteClass, VERDICT_ORDER, check_domain, finite_class_check
from .cuts import (
    CutRelation,
    check_cut_conditions,
    cut_add,
    cut_neg,
    cut_positive,
    sum_formula_holds,
    zero_cut,
)
from .domains import build_model, parse_model_id
from .euclid import Equal, NotEqual, continued_fraction, make_ratio, ratio_compare, ratio_equal
from .exactnum import StreamReal, format_rational, parse_real
from .extensions import check_peano_prefix, e_sequence
from .kasol import SupportMap, embed, rho, separating_point, theta
from .relations import NATURALS, Relation, compose, invert, is_functional
from .report import FAIL, INDETERMINATE, PASS, CheckRecord, CheckReport

DEFAULTS = {"seed": 0, "samples": 1000, "fuel": 10**6}

# verdicts for the empty class and the class holding only the empty relation
EXPECTED = {
    "E0": {"L": True, "L*": True, "P": True, "P*": True, "M": True, "M*": True},
    "E1": {"L": False, "L*": True, "P": False, "P*": True, "M": False, "M*": True},
}

MODEL_TOKENS = {
    "rat": "rational-translations",
    "dyad": "dyadic-translations",
    "bic": "bicimal-translations",
    "ks": "ks-embedded",
    "str": "stream-translations",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    model: Optional[str]
    seed: int
    samples: int
    fuel: int
    output: str
    config_path: Optional[str] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("config_path")
        return d


def _read_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[run]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    return dict(parser["run"])


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _int64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not -(2**63) <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 2 through UsageError
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model id (check-domain)")
    common.add_argument("--support", help='JSON support signature, e.g. {"2": "1", "3": "1/2"}')
    common.add_argument("--seed", type=_int64)
    common.add_argument("--samples", type=_positive_int)
    common.add_argument("--fuel", type=_positive_int)
    common.add_argument("--json", action="store_true", help="JSON report on stdout")
    common.add_argument("--config", help="key=value config file")

    p = _Parser(prog="fregereals", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fregereals {__version__}")
    sub = p.add_subparsers(dest="subcommand", parser_class=_Parser)

    c = sub.add_parser("check-domain", parents=[common], help="positival, order, density, Archimedean suites")
    c.add_argument("--bound", help="also search an upper limit of the cut at this rational")

    f = sub.add_parser("finite-check", parents=[common], help="exact class conditions on a finite class")
    f.add_argument("--class", dest="cls", default="E0", help="E0, E1, or a JSON class description")
    f.add_argument("--no-expect", action="store_true", help="report verdicts without comparing to E0/E1")

    r = sub.add_parser("ratio", parents=[common], help="form and compare ratios num:den@model")
    r.add_argument("--a", required=True)
    r.add_argument("--b")

    cf = sub.add_parser("cf", parents=[common], help="continued fraction of a ratio")
    cf.add_argument("--a", required=True)
    cf.add_argument("--terms", type=_positive_int, default=8)

    e = sub.add_parser("embed", parents=[common], help="embedding of a support map into Sym(N)")
    e.add_argument("--with", dest="other", help="second support map for the homomorphism check")

    x = sub.add_parser("extensions", parents=[common], help="successor chain and Peano checks")
    x.add_argument("--k", type=_positive_int, default=64)

    k = sub.add_parser("cuts", parents=[common], help="cut-relation conditions and arithmetic")
    k.add_argument("--cut", default="1/3", help="rational p/q or sqrt(p/q)")
    k.add_argument("--cuts", type=_positive_int, default=1, help="number of random extra cutpoints")
    return p


def resolve_config(args: argparse.Namespace, env: Optional[dict] = None) -> RunConfig:
    env = os.environ if env is None else env
    cfg = _read_config(args.config) if args.config else {}
    values = dict(DEFAULTS)
    if "FREGE_FUEL" in env:
        try:
            values["fuel"] = _positive_int(env["FREGE_FUEL"])
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"FREGE_FUEL: {exc}") from None
    model = cfg.get("model")
    output = "json" if cfg.get("output", "text") == "json" else "text"
    for key in ("seed", "samples", "fuel"):
        if key in cfg:
            try:
                values[key] = _int64(cfg[key]) if key == "seed" else _positive_int(cfg[key])
            except argparse.ArgumentTypeError as exc:
                raise UsageError(f"config {key}: {exc}") from None
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    if args.model:
        model = args.model
    if args.json:
        output = "json"
    if args.support is None and "support" in cfg:
        args.support = cfg["support"]
    return RunConfig(args.subcommand, model, values["seed"], values["samples"], values["fuel"], output, args.config)


# -- subcommands --------------------------------------------------------------

def _model(name: str, support: Optional[str]):
    try:
        return build_model(parse_model_id(name, support))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_check_domain(cfg: RunConfig, args) -> tuple[CheckReport, list[str]]:
    if not cfg.model:
        raise UsageError("check-domain needs --model")
    d = _model(cfg.model, args.support)
    bound = None
    if args.bound is not None:
        bound = _rational(args.bound)
    rep = check_domain(d, cfg.seed, cfg.samples, cfg.fuel, bound)
    return rep, []


def _rational(text: str) -> Fraction:
    v = _real(text)
    if isinstance(v, StreamReal):
        raise UsageError(f"expected a rational, got {text!r}")
    return v


def _real(text: str):
    try:
        return parse_real(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_class(text: str) -> tuple[str, FiniteClass]:
    if text in ("E0", "E1"):
        rels = () if text == "E0" else (Relation(NATURALS, pairs=()),)
        return text, FiniteClass((0, 1), rels)
    try:
        data = json.loads(text)
        carrier = tuple(int(x) for x in data["carrier"])
        rels = tuple(Relation(NATURALS, pairs=((int(a), int(b)) for a, b in r)) for r in data["relations"])
        return "custom", FiniteClass(carrier, rels)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad class description: {exc}") from None


def cmd_finite_check(cfg: RunConfig, args) -> tuple[CheckReport, list[str]]:
    name, fc = _parse_class(args.cls)
    verdicts = finite_class_check(fc)
    line = " ".join(f"{k}:{str(verdicts[k]).lower()}" for k in VERDICT_ORDER)
    rep = CheckReport("finite-check", name, cfg.seed, cfg.fuel)
    expected = EXPECTED.get(name) if not args.no_expect else None
    for k in VERDICT_ORDER:
        if expected is None:
            rep.add(CheckRecord(f"verdict {k}", PASS, 1, str(verdicts[k]).lower(), "exact"))
        else:
            ok = verdicts[k] == expected[k]
            rep.add(CheckRecord(f"verdict {k}", PASS if ok else FAIL, 1,
                                f"got {str(verdicts[k]).lower()}, expected {str(expected[k]).lower()}", "exact"))
    return rep, [line]


def _parse_ratio_arg(text: str, support: Optional[str]):
    try:
        body, token = text.rsplit("@", 1)
        num, den = body.split(":")
    except ValueError:
        raise UsageError(f"ratio must look like num:den@model, got {text!r}") from None
    if token not in MODEL_TOKENS:
        raise UsageError(f"unknown model token {token!r}; use one of {', '.join(MODEL_TOKENS)}")
    name = MODEL_TOKENS[token]
    d = _model(name, support if support is not None else ('{"2": "1"}' if token == "ks" else None))
    nv, dv = _real(num.strip()), _real(den.strip())
    if not d.analytic:
        return d, d.element(nv), d.element(dv)
    if isinstance(nv, StreamReal) or isinstance(dv, StreamReal):
        raise UsageError(f"model {token!r} only takes rationals; use @str for square roots")
    try:
        return d, d.element(nv), d.element(dv)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fmt_ratio(x) -> str:
    if x.value is None:
        return f"{x.case.value}"
    if isinstance(x.value, Fraction):
        return f"{x.case.value} {format_rational(x.value)}"
    flag = " (indeterminate)" if x.value.indeterminate else ""
    return f"{x.case.value} cf{list(x.value.terms)}{flag}"


def cmd_ratio(cfg: RunConfig, args) -> tuple[CheckReport, list[str]]:
    rep = CheckReport("ratio", "", cfg.seed, cfg.fuel)
    fuel = min(cfg.fuel, 10**4)
    lines = []
    dA, rA, sA = _parse_ratio_arg(args.a, args.support)
    try:
        xa = make_ratio(dA, rA, sA, fuel)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfa = continued_fraction(dA, rA, sA, 8, fuel)
    lines.append(f"A: {_fmt_ratio(xa)}  cf={list(cfa.terms)}")
    rep.model = str(dA.model_id)
    if args.b:
        dB, rB, sB = _parse_ratio_arg(args.b, args.support)
        xb = make_ratio(dB, rB, sB, fuel)
        cfb = continued_fraction(dB, rB, sB, 8, fuel)
        lines.append(f"B: {_fmt_ratio(xb)}  cf={list(cfb.terms)}")
        rep.model = f"{dA.model_id} vs {dB.model_id}"
        eq = ratio_equal(dA, rA, sA, dB, rB, sB, fuel)
        if isinstance(eq, Equal):
            verdict, status, witness = "Equal", PASS, None
        elif isinstance(eq, NotEqual):
            verdict, status, witness = "NotEqual", PASS, eq.witness
        else:
            verdict, status, witness = "Indeterminate", INDETERMINATE, eq.reason
        lines.append(verdict)
        rep.add(CheckRecord("ratio_equal", status, 1, witness or verdict, "exact" if dA.analytic and dB.analytic else "sampled"))
        if xa.case is xb.case:
            order = ratio_compare(dA, rA, sA, dB, rB, sB, fuel)
            lines.append(f"order: {order.value}")
            rep.add(CheckRecord("ratio_compare", INDETERMINATE if order.value == "Indeterminate" else PASS,
                                1, order.value))
    rep.add(CheckRecord("ratio formed", PASS, 1, lines[0][3:]))
    return rep, lines


def cmd_cf(cfg: RunConfig, args) -> tuple[CheckReport, list[str]]:
    d, r, s = _parse_ratio_arg(args.a, args.support)
    fuel = cfg.fuel  # stream precision is capped inside the engine
    pre = continued_fraction(d, r, s, args.terms, fuel)
    status = INDETERMINATE if pre.indeterminate else PASS
    rep = CheckReport("cf", str(d.model_id), cfg.seed, fuel)
    rep.add(CheckRecord("continued fraction", status, len(pre.terms), str(list(pre.terms))))
    return rep, [f"cf: {list(pre.terms)} precision={pre.precision}" + (" (indeterminate)" if pre.indeterminate else "")]


def _support(text: Optional[str], default: str) -> SupportMap:
    try:
        return SupportMap.from_json(text if text is not None else default)
    except ValueError as exc:
        raise UsageError(f"malformed support map: {exc}") from None


def _random_support(rng: random.Random) -> SupportMap:
    primes = rng.sample([2, 3, 5, 7, 11], rng.randint(1, 3))
    return SupportMap({p: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for p in primes})


def cmd_embed(cfg: RunConfig, args) -> tuple[CheckReport, list[str]]:
    f = _support(args.support, '{"2": "1"}')
    rng = random.Random(cfg.seed)
    g = _support(args.other, "{}") if args.other else _random_support(rng)
    pf, pg, pfg = embed(f), embed(g), embed(f + g)
    both = compose(pf, pg)
    primes = sorted(set(f) | set(g)) or [2]
    pts = []
    for i in range(min(cfg.samples, 2000)):
        if i % 2:
            pts.append(rng.randint(0, 10**6))
        else:
            pts.append(theta(rng.choice(primes), Fraction(rng.randint(-9, 9), rng.randint(1, 4))))
    rep = CheckReport("embed", f"f={f.to_json()} g={g.to_json()}", cfg.seed, cfg.fuel)

    def first_bad(pred) -> Optional[int]:
        return next((n for n in pts if not pred(n)), None)

    def rec(name: str, bad) -> None:
        rep.add(CheckRecord(name, FAIL if bad is not None else PASS, len(pts),
                            None if bad is None else f"n={bad}"))

    rec("homomorphism f+g", first_bad(lambda n: pfg.fwd(n) == both.fwd(n) and pfg.bwd(n) == both.bwd(n)))
    rec("inverse round trip", first_bad(lambda n: pf.bwd(pf.fwd(n)) == n))
    rec("support locality", first_bad(lambda n: rho(n) in f or pf.fwd(n) == n))
    rep.add(CheckRecord("functional", PASS if is_functional(pf, pts) and is_functional(invert(pf), pts) else FAIL,
                        len(pts), None if is_functional(pf, pts) else "two images"))
    w = separating_point(f, g)
    if f == g:
        rep.add(CheckRecord("injectivity witness", PASS, 1, "f = g"))
    else:
        ok = w is not None and pf.fwd(w) != pg.fwd(w)
        rep.add(CheckRecord("injectivity witness", PASS if ok else FAIL, 1, f"n={w}"))
    graph = []
    for p in sorted(f)[:3]:
        for q in (0, 1, -1):
            n = theta(p, q)
            graph.append(f"{n}->{pf.fwd(n)}")
    return rep, ["graph: " + " ".join(graph)]


def cmd_extensions(cfg: RunConfig, args) -> tuple[CheckReport, list[str]]:
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    rep = check_peano_prefix(args.k, seed=cfg.seed, n_properties=min(cfg.samples, 1000))
    rep.fuel = cfg.fuel
    seq = e_sequence(min(args.k, 4))
    return rep, ["prefix: " + ", ".join(x.to_text() for x in seq) + ", ..."]


def cmd_cuts(cfg: RunConfig, args) -> tuple[CheckReport, list[str]]:
    fuel = min(cfg.fuel, 1024)
    point = _real(args.cut)
    c = CutRelation(point, fuel)
    rep = check_cut_conditions(c, cfg.seed, cfg.samples)
    rep.fuel = cfg.fuel
    lines = []
    rng = random.Random(cfg.seed)
    if c.exact:
        z = cut_add(c, zero_cut())
        rep.add(CheckRecord("zero neutral", PASS if z == c else FAIL, 1, None if z == c else repr(z)))
        inv = cut_add(c, cut_neg(c))
        rep.add(CheckRecord("inverse", PASS if inv == zero_cut() else FAIL, 1, None if inv == zero_cut() else repr(inv)))
        other = CutRelation(Fraction(rng.randint(-50, 50), rng.randint(1, 20)))
        total = cut_add(c, other)
        agree = all(
            sum_formula_holds(c, other, x, y) == (x < total.cutpoint < y)
            for x, y in ((Fraction(rng.randint(-400, 400), 8), Fraction(rng.randint(-400, 400), 8))
                         for _ in range(min(cfg.samples, 200)))
        )
        rep.add(CheckRecord("sum formula", PASS if agree else FAIL, min(cfg.samples, 200), None if agree else "mismatch"))
        lines.append(f"{c!r} + {other!r} = {total!r}")
    pos, wit = cut_positive(c)
    lines.append(f"positive: {pos}" + (f" witness ({format_rational(wit[0])}, {format_rational(wit[1])})" if wit else ""))
    probe = [Fraction(-10**6), Fraction(-10**6 - 1)]
    functional = is_functional(c.as_relation(), probe)
    rep.add(CheckRecord("not functional", FAIL if functional else PASS, 2, "functional on probe" if functional else None))
    return rep, lines


COMMANDS = {
    "check-domain": cmd_check_domain,
    "finite-check": cmd_finite_check,
    "ratio": cmd_ratio,
    "cf": cmd_cf,
    "embed": cmd_embed,
    "extensions": cmd_extensions,
    "cuts": cmd_cuts,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None, env: Optional[dict] = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.subcommand:
            raise UsageError("a subcommand is required: " + " | ".join(COMMANDS))
        cfg = resolve_config(args, env)
        rep, lines = COMMANDS[cfg.subcommand](cfg, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    counts = rep.counts()
    if cfg.output == "json":
        doc = {
            "tool_version": __version__,
            "config": cfg.to_dict(),
            "suite": rep.suite,
            "model": rep.model,
            "lines": lines,
            "checks": [r.to_dict() for r in rep.ordered()],
            "summary": counts,
        }
        print(json.dumps(doc, sort_keys=True, indent=2), file=out)
    else:
        for line in lines:
            print(line, file=out)
        print(rep.render(), file=out)
        print(f"summary: {counts[PASS]} pass, {counts[FAIL]} fail, {counts[INDETERMINATE]} indeterminate", file=out)
    if counts[INDETERMINATE]:
        print(f"warning: {counts[INDETERMINATE]} indeterminate check(s)", file=err)
    return 1 if counts[FAIL] else 0


def main() -> None:
    sys.exit(run())
