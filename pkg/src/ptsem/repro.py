"""Bundled regression fixtures and the runner behind ``ptsem repro``.

A fixture is a JSON object::

    {"name": ..., "kind": "golden" | "derived", "anchor": ..., "check": ...,
     "input": {...}, "expect": ...}

``golden`` fixtures encode published worked examples; ``derived`` ones
record values established with this package.  When ``expect`` is an
object, only the keys it lists are compared.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .arguments import check_nd, loads, named_justification, reduce_step, substitute
from .arguments.validity import ValidityChecker
from .derive import Deriver, check_derivation
from .ipc import countermodel_il, prove_extended, prove_il
from .props import (
    check_compact_export,
    check_gdp,
    check_harrop,
    check_separation,
    probe_export_fresh_atom,
)
from .rules import Base, Universe, load_universe, make_base
from .semantics import EvalContext
from .syntax import Atom, parse_formula, parse_rule, parse_sequent, print_formula
from .translate import circ, sharp, star

FIXTURE_DIR = Path(__file__).with_name("fixtures")


class FixtureError(Exception):
    """A fixture file is missing, unreadable or malformed."""


@dataclass
class Outcome:
    name: str
    kind: str
    anchor: str
    passed: bool
    actual: object
    expect: object


def _rules(texts) -> List:
    return [parse_rule(t) for t in texts]


def _base_in(u: Universe, spec) -> int:
    if spec is None:
        return 0
    if "scheme" in spec:
        return u.mask_of(u.scheme_instances()[spec["scheme"]])
    return u.mask_of(_rules(spec.get("rules", [])))


def _plain_base(texts) -> Base:
    rules = _rules(texts)
    alpha = set()
    for r in rules:
        alpha |= r.atoms()
    return make_base(rules, alpha)


def _pool(texts):
    return [parse_sequent(t) for t in texts]


def _derive(i):
    b = _plain_base(i["base"])
    assumed = _rules(i.get("assumed", []))
    w = Deriver().witness(b, assumed, Atom(i["goal"]))
    if w is None:
        return False
    check_derivation(b, w, assumed)
    return True


def _prove(i):
    return prove_il(*parse_sequent(i["sequent"]))


def _prove_extended(i):
    gamma, goal = parse_sequent(i["sequent"])
    return prove_extended(gamma, _rules(i.get("assumed", [])), _plain_base(i["base"]), goal)


def _countermodel(i):
    m = countermodel_il(*parse_sequent(i["sequent"]), max_points=i.get("max_points", 6))
    return None if m is None else m.size


def _consequence(i):
    u = load_universe(i["universe"])
    ctx = EvalContext(u)
    gamma, goal = parse_sequent(i["sequent"])
    return ctx.consequence(i["semantics"], _base_in(u, i.get("base")), gamma, goal)


def _property(i):
    u = load_universe(i["universe"])
    ctx = EvalContext(u)
    probe = i["probe"]
    sel = i.get("semantics", "standard")
    m = _base_in(u, i.get("base"))
    pool = _pool(i.get("pool", []))
    if probe == "gdp":
        rep = check_gdp(ctx, sel, m, pool)
    elif probe == "harrop":
        inst = [tuple(parse_formula(x) for x in t) for t in i["instances"]]
        rep = check_harrop(ctx, sel, inst)
    elif probe == "export":
        rep = check_compact_export(ctx, sel, m, pool)
    elif probe == "export-fresh":
        rep = probe_export_fresh_atom(u, sel, m, pool, i.get("fresh", "e"))
    elif probe == "separation":
        rep = check_separation(ctx, pool, i.get("masks"))
        found = {e["kind"]: e["witness"] for e in rep.entries}
        return {"verdict": rep.verdict, **{k: v is not None for k, v in found.items()}}
    else:
        raise FixtureError(f"unknown probe {probe!r}")
    return {"verdict": rep.verdict, "counterexample": rep.counterexample}


def _star(i):
    return print_formula(star(parse_rule(i["rule"])))


def _circ(i):
    return sorted(r.text() for r in circ(parse_formula(i["formula"])))


def _sharp(i):
    return print_formula(sharp(parse_formula(i["formula"])))


def _reduce(i):
    d = loads(i["structure"])
    return sorted(r.key() for r in reduce_step(d, named_justification(i["justification"])))


def _substitute(i):
    d = loads(i["structure"])
    sigma = {parse_formula(k): loads(v) for k, v in i["sigma"].items()}
    return substitute(d, sigma).key()


def _ndcheck(i):
    rep = check_nd(loads(i["structure"]), _plain_base(i.get("base", [])), allow_custom=i.get("custom", False))
    return {
        "assumptions": sorted(print_formula(f) for f in rep.assumptions),
        "open_rules": sorted(r.text() for r in rep.open_rules),
        "conclusion": print_formula(rep.conclusion),
    }


def _argcheck(i):
    u = load_universe(i["universe"])
    vc = ValidityChecker(EvalContext(u))
    v = vc.check(loads(i["structure"]), named_justification(i.get("justification", "")), _base_in(u, i.get("base")))
    return v.status


CHECKS: Dict[str, Callable[[dict], object]] = {
    "derive": _derive,
    "prove": _prove,
    "prove_extended": _prove_extended,
    "countermodel": _countermodel,
    "consequence": _consequence,
    "property": _property,
    "star": _star,
    "circ": _circ,
    "sharp": _sharp,
    "reduce": _reduce,
    "substitute": _substitute,
    "ndcheck": _ndcheck,
    "argcheck": _argcheck,
}


def _normalize_expect(check: str, expect):
    # structures are compared up to relabelling
    if check == "reduce":
        return sorted(loads(t).key() for t in expect)
    if check == "substitute":
        return loads(expect).key()
    if check == "ndcheck":
        out = dict(expect)
        if "assumptions" in out:
            out["assumptions"] = sorted(print_formula(parse_formula(t)) for t in out["assumptions"])
        if "open_rules" in out:
            out["open_rules"] = sorted(parse_rule(t).text() for t in out["open_rules"])
        if "conclusion" in out:
            out["conclusion"] = print_formula(parse_formula(out["conclusion"]))
        return out
    return expect


def _matches(actual, expect) -> bool:
    if isinstance(expect, dict) and isinstance(actual, dict):
        return all(k in actual and _matches(actual[k], v) for k, v in expect.items())
    return actual == expect


def run_fixture(fx: dict) -> Outcome:
    try:
        fn = CHECKS[fx["check"]]
        actual = fn(fx["input"])
        expect = _normalize_expect(fx["check"], fx["expect"])
    except KeyError as exc:
        raise FixtureError(f"fixture {fx.get('name', '?')}: missing field {exc}") from None
    return Outcome(fx["name"], fx.get("kind", "derived"), fx.get("anchor", ""), _matches(actual, expect), actual, fx["expect"])


def load_suite(path: Optional[Path] = None) -> List[dict]:
    path = Path(path) if path is not None else FIXTURE_DIR
    if not path.exists():
        raise FixtureError(f"fixture path {path} does not exist")
    files = [path] if path.is_file() else sorted(path.glob("*.json"))
    if not files:
        raise FixtureError(f"no fixtures under {path}")
    out = []
    for f in files:
        try:
            data = json.loads(f.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FixtureError(f"cannot read {f}: {exc}") from None
        out.extend(data if isinstance(data, list) else [data])
    return out


def repro_all(path: Optional[Path] = None) -> List[Outcome]:
    return [run_fixture(fx) for fx in load_suite(path)]
