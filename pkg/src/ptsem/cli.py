"""Command-line front end.

Exit codes: 0 affirmative or holds, 1 negative or fails, 2 unknown because a
bound was hit, 3 usage, parse or input error.  With ``--json`` every command
prints one JSON report carrying the query, the verdict, the certificate or
counterexample, the resource bounds and statistics.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from . import __version__
from .arguments import (
    Bounds,
    ValidityChecker,
    check_nd,
    first_reduct,
    loads,
    named_justification,
)
from .arguments import dumps as dump_structure
from .derive import Deriver, check_derivation
from .errors import PTSError
from .ipc import countermodel_il, extended_context, prove_extended, prove_il_proof
from .props import (
    SCHEMA,
    FAILS,
    check_base_completeness,
    check_base_soundness,
    check_compact_export,
    check_gdp,
    check_harrop,
    check_separation,
    exhaustive_disjunction_pool,
    probe_export_fresh_atom,
)
from .repro import FixtureError, repro_all
from .rules import Base, Universe, load_base, load_rules, load_universe, make_base
from .semantics import EvalContext, restrict_level, selector
from .syntax import Atom, format_sequent, parse_formula, parse_pool, parse_rule, parse_rules_file, parse_sequent, print_formula
from .translate import circ, sharp, star

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3
UNIVERSE_DIR_ENV = "PTSEM_UNIVERSE_DIR"
DEFAULT_SWEEP_CAP = 1 << 20


class UsageError(Exception):
    """Bad flags or inputs; maps to exit code 3."""


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every subcommand; echoed into JSON reports."""

    subcommand: str
    inputs: Tuple[str, ...] = ()
    semantics: Optional[str] = None
    level: Optional[int] = None
    max_steps: int = 10_000
    max_size: int = 1_000
    max_states: int = 2_000
    sweep_cap: int = DEFAULT_SWEEP_CAP
    output: str = "text"

    def __post_init__(self):
        if min(self.max_steps, self.max_size, self.max_states, self.sweep_cap) <= 0:
            raise UsageError("resource bounds must be positive")
        if self.level is not None and self.level < 0:
            raise UsageError("--level must be a natural number")

    @property
    def bounds(self) -> Bounds:
        return Bounds(self.max_steps, self.max_states, self.max_size)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Result:
    code: int
    report: dict
    text: List[str] = field(default_factory=list)


# -- input loading -------------------------------------------------------------


def resolve(path: str) -> Path:
    """A path as given, or relative to ``$PTSEM_UNIVERSE_DIR`` when it is not found."""
    p = Path(path)
    if p.exists():
        return p
    root = os.environ.get(UNIVERSE_DIR_ENV)
    if root and not p.is_absolute() and (Path(root) / p).exists():
        return Path(root) / p
    raise UsageError(f"no such file: {path}")


def _read(path: str) -> str:
    return resolve(path).read_text(encoding="utf-8")


def _universe(cfg: RunConfig, path: str) -> Universe:
    u = load_universe(_read(path))
    if cfg.level is not None:
        if cfg.level < u.level_bound:
            u = restrict_level(u, cfg.level)
    if 1 << u.k > cfg.sweep_cap:
        raise _Unknown(f"universe has 2^{u.k} bases, above the sweep cap {cfg.sweep_cap}")
    return u


def _base_in(cfg: RunConfig, u: Universe, path: Optional[str]) -> Base:
    if path is None:
        return u.empty_base
    b = load_base(_read(path), u)
    if cfg.level is not None and b.level > cfg.level:
        raise UsageError(f"base has level {b.level} above --level {cfg.level}")
    return b


def _plain_base(path: Optional[str]) -> Base:
    if path is None:
        return make_base(())
    return load_base(_read(path))


def _pool(path: Optional[str], default):
    return default() if path is None else parse_pool(_read(path))


class _Unknown(Exception):
    """A resource bound stopped the computation; maps to exit code 2."""


def _report(cfg: RunConfig, query: dict, verdict, **extra) -> dict:
    out = {"schema": SCHEMA, "command": cfg.subcommand, "config": cfg.to_dict(), "query": query, "verdict": verdict}
    out.update(extra)
    return out


# -- subcommands -----------------------------------------------------------------


def cmd_parse(cfg: RunConfig, a) -> Result:
    kind, text = a.kind, a.text
    if kind == "file":
        spec = parse_rules_file(_read(text))
        lines = [f"@level {spec.level}"] if spec.level is not None else []
        if spec.alphabet:
            lines.append("@alphabet " + " ".join(x.name for x in spec.alphabet))
        lines += [f"@scheme {s.name} {' '.join(p.name for p in s.placeholders)} : {s.template.text()}" for s in spec.schemes]
        lines += [r.text() for r in spec.rules]
        return Result(EXIT_YES, _report(cfg, {"kind": kind, "input": text}, "ok", parsed=lines), lines)
    if kind == "formula":
        out = print_formula(parse_formula(text))
    elif kind == "rule":
        out = parse_rule(text).text()
    else:
        out = format_sequent(*parse_sequent(text))
    return Result(EXIT_YES, _report(cfg, {"kind": kind, "input": text}, "ok", parsed=out), [out])


def cmd_derive(cfg: RunConfig, a) -> Result:
    b = _plain_base(a.base)
    assumed = load_rules(_read(a.assume)) if a.assume else frozenset()
    goal = parse_formula(a.goal)
    if not isinstance(goal, Atom):
        raise UsageError("--goal must be an atom")
    w = Deriver().witness(b, assumed, goal)
    query = {"base": sorted(r.text() for r in b.rules), "assumed": sorted(r.text() for r in assumed), "goal": goal.name}
    if w is None:
        return Result(EXIT_NO, _report(cfg, query, False), ["not derivable"])
    used, concl = check_derivation(b, w, assumed)
    cert = {"witness": w.to_dict(), "assumed_rules_used": sorted(r.text() for r in used)} if a.witness else None
    text = ["derivable"]
    if a.witness:
        text.append(w.render())
    return Result(EXIT_YES, _report(cfg, query, True, certificate=cert), text)


def _prove(cfg: RunConfig, a, context, goal, query) -> Result:
    proof = prove_il_proof(context, goal)
    if proof is not None:
        return Result(EXIT_YES, _report(cfg, query, True, certificate={"proof_size": proof.size()}), ["provable"])
    m = countermodel_il(context, goal, max_points=a.max_points)
    cex = m.to_dict() if m is not None else None
    text = ["not provable"]
    if m is not None:
        text.append(m.render())
    return Result(EXIT_NO, _report(cfg, query, False, counterexample=cex), text)


def cmd_prove(cfg: RunConfig, a) -> Result:
    gamma, goal = parse_sequent(a.sequent)
    return _prove(cfg, a, gamma, goal, {"sequent": format_sequent(gamma, goal)})


def cmd_prove_ext(cfg: RunConfig, a) -> Result:
    gamma, goal = parse_sequent(a.sequent)
    b = _plain_base(a.base)
    assumed = load_rules(_read(a.assume)) if a.assume else frozenset()
    query = {
        "sequent": format_sequent(gamma, goal),
        "base": sorted(r.text() for r in b.rules),
        "assumed": sorted(r.text() for r in assumed),
    }
    ok = prove_extended(gamma, assumed, b, goal)
    context = extended_context(gamma, assumed, b)
    query["translated"] = format_sequent(context, goal)
    if ok:
        return Result(EXIT_YES, _report(cfg, query, True), ["provable"])
    return _prove(cfg, a, context, goal, query)


def cmd_eval(cfg: RunConfig, a) -> Result:
    sel = selector(a.semantics)
    u = _universe(cfg, a.universe)
    b = _base_in(cfg, u, a.base)
    gamma, goal = parse_sequent(a.query)
    ctx = EvalContext(u)
    table = ctx.consequence_table(sel, gamma, goal)
    m = u.mask_of(b)
    ok = bool(table[m])
    query = {"sequent": format_sequent(gamma, goal, "|="), "semantics": sel, "base": sorted(r.text() for r in b.rules), "universe": u.describe()}
    extra = {}
    text = ["holds" if ok else "fails"]
    if a.sweep:
        front = [sorted(r.text() for r in u.rules_of(x)) for x in ctx.frontier(table)]
        extra["frontier"] = front
        extra["validating_bases"] = int(table.sum())
        text.append(f"validating bases: {int(table.sum())} of {ctx.n_bases}")
        text += ["minimal: {" + ", ".join(f) + "}" for f in front] or ["minimal: none"]
    stats = dict(sorted(ctx.stats.items()))
    if a.stats:
        text += [f"{k}: {v}" for k, v in stats.items()]
    return Result(EXIT_YES if ok else EXIT_NO, _report(cfg, query, ok, statistics=stats, **extra), text)


def cmd_translate(cfg: RunConfig, a) -> Result:
    if a.star:
        out = [print_formula(star(parse_rule(a.input)))]
    elif a.circ:
        out = sorted(r.text() for r in circ(parse_formula(a.input)))
    else:
        out = [print_formula(sharp(parse_formula(a.input)))]
    mode = "star" if a.star else "circ" if a.circ else "sharp"
    return Result(EXIT_YES, _report(cfg, {"mode": mode, "input": a.input}, "ok", result=out), out)


def cmd_reduce(cfg: RunConfig, a) -> Result:
    d = loads(_read(a.file))
    j = named_justification(a.just)
    seq = [d]
    while len(seq) <= cfg.max_steps:
        nxt = first_reduct(seq[-1], j)
        if nxt is None:
            break
        if nxt.size() > cfg.max_size:
            raise _Unknown(f"reduct of size {nxt.size()} exceeds --max-size {cfg.max_size}")
        seq.append(nxt)
    normal = first_reduct(seq[-1], j) is None
    texts = [dump_structure(x) for x in seq]
    lines = []
    for i, t in enumerate(texts):
        lines.append(f"-- step {i}")
        lines.append(t)
    if not normal:
        lines.append(f"-- stopped after {cfg.max_steps} steps")
    report = _report(cfg, {"structure": texts[0], "justification": list(j.names)}, "normal" if normal else "unknown", sequence=texts, steps=len(seq) - 1)
    return Result(EXIT_YES if normal else EXIT_UNKNOWN, report, lines)


def cmd_argcheck(cfg: RunConfig, a) -> Result:
    u = _universe(cfg, a.universe)
    b = _base_in(cfg, u, a.base)
    d = loads(_read(a.file))
    j = named_justification(a.just)
    shape = check_nd(d, allow_custom=True)
    vc = ValidityChecker(EvalContext(u), cfg.bounds)
    v = vc.check(d, j, b)
    cert = {
        "assumptions": sorted(print_formula(f) for f in shape.assumptions),
        "conclusion": print_formula(shape.conclusion),
        "justification": list(j.names),
        "standard_reductions_added": True,
        **v.to_dict(),
    }
    code = {"valid": EXIT_YES, "invalid": EXIT_NO}.get(v.status, EXIT_UNKNOWN)
    query = {"structure": dump_structure(d), "base": sorted(r.text() for r in b.rules), "universe": u.describe()}
    text = [v.status]
    if v.reason:
        text.append(v.reason)
    text.append(f"reduction steps: {v.steps}, extensions checked: {v.extensions}")
    if not v.constructive:
        text.append("justification includes a non-constructive reduction")
    return Result(code, _report(cfg, query, v.status, certificate=cert), text)


def _instances(u: Universe, given: Sequence[str]):
    if given:
        out = []
        for g in given:
            parts = [p.strip() for p in g.split(",")]
            if len(parts) != 3:
                raise UsageError("--instance takes three comma-separated formulas")
            out.append(tuple(parse_formula(p) for p in parts))
        return out
    letters = sorted(u.alphabet, key=lambda x: x.name)
    if len(letters) < 3:
        raise UsageError("Harrop check needs three atoms or explicit --instance")
    return [tuple(letters[:3])]


def cmd_check(cfg: RunConfig, a) -> Result:
    u = _universe(cfg, a.universe)
    ctx = EvalContext(u)
    sel = selector(a.semantics)
    b = _base_in(cfg, u, a.base)
    m = u.mask_of(b)
    letters = sorted(u.alphabet, key=lambda x: x.name)

    def pool():
        return _pool(a.pool, lambda: exhaustive_disjunction_pool(letters))

    prop = a.property
    if prop == "gdp":
        rep = check_gdp(ctx, sel, m, pool())
    elif prop == "harrop":
        rep = check_harrop(ctx, sel, _instances(u, a.instance))
    elif prop == "export":
        if a.fresh:
            rep = probe_export_fresh_atom(u, sel, m, pool(), a.fresh)
        else:
            rep = check_compact_export(ctx, sel, m, pool())
    elif prop == "basecomp":
        rep = check_base_completeness(ctx, sel, pool(), [m] if a.base else None)
    elif prop == "basesound":
        rep = check_base_soundness(ctx, sel, a.count, a.seed)
    else:
        rep = check_separation(ctx, pool(), [m] if a.base else None)
    body = rep.to_dict()
    body["config"] = cfg.to_dict()
    body["command"] = cfg.subcommand
    if a.report:
        Path(a.report).write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    text = [f"{rep.name}: {rep.verdict}"]
    if rep.counterexample:
        text.append("counterexample: " + json.dumps(rep.counterexample, sort_keys=True))
    for e in rep.entries:
        if "kind" in e:
            text.append(f"{e['kind']}: " + (json.dumps(e["witness"], sort_keys=True) if e["witness"] else "none found"))
    text += [f"note: {n}" for n in rep.notes]
    return Result(EXIT_NO if rep.verdict == FAILS else EXIT_YES, body, text)


def cmd_repro(cfg: RunConfig, a) -> Result:
    try:
        outcomes = repro_all(resolve(a.suite) if a.suite else None)
    except FixtureError as exc:
        raise UsageError(str(exc)) from None
    rows = []
    text = []
    width = max(len(o.name) for o in outcomes)
    for o in outcomes:
        status = "PASS" if o.passed else "FAIL"
        rows.append({"name": o.name, "kind": o.kind, "anchor": o.anchor, "passed": o.passed, "actual": o.actual if not o.passed else None})
        text.append(f"{status}  {o.kind:<7}  {o.name:<{width}}  {o.anchor}")
    failed = [o.name for o in outcomes if not o.passed]
    text.append(f"{len(outcomes) - len(failed)}/{len(outcomes)} fixtures pass")
    if failed:
        text.append("failed: " + ", ".join(failed))
    report = _report(cfg, {"suite": a.suite or "bundled"}, not failed, fixtures=rows)
    return Result(EXIT_NO if failed else EXIT_YES, report, text)


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--max-steps", type=int, default=10_000, help="reduction step bound")
    common.add_argument("--max-size", type=int, default=1_000, help="structure size bound")
    common.add_argument("--max-states", type=int, default=2_000, help="reduction search state bound")
    common.add_argument("--sweep-cap", type=int, default=DEFAULT_SWEEP_CAP, help="largest number of bases a universe may have")
    common.add_argument("--level", type=int, help="level bound for universes and bases")

    p = argparse.ArgumentParser(prog="ptsem", description="Base-extension semantics over finite universes of atomic rules.")
    p.add_argument("--version", action="version", version=f"ptsem {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn: Callable, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", cmd_parse, "parse and print in canonical form")
    sp.add_argument("kind", choices=["formula", "rule", "sequent", "file"])
    sp.add_argument("text")

    sp = add("derive", cmd_derive, "atomic derivability in a base")
    sp.add_argument("--base", help="base file")
    sp.add_argument("--assume", help="file of assumed rules")
    sp.add_argument("--goal", required=True)
    sp.add_argument("--witness", action="store_true", help="print the derivation")

    sp = add("prove", cmd_prove, "intuitionistic provability of 'G |- A'")
    sp.add_argument("sequent")
    sp.add_argument("--max-points", type=int, default=6, help="countermodel size bound")

    sp = add("prove-ext", cmd_prove_ext, "provability with base and assumed rules")
    sp.add_argument("sequent")
    sp.add_argument("--base")
    sp.add_argument("--assume")
    sp.add_argument("--max-points", type=int, default=6)

    sp = add("eval", cmd_eval, "semantic consequence 'G |= A' at a base")
    sp.add_argument("query")
    sp.add_argument("--universe", required=True)
    sp.add_argument("--base")
    sp.add_argument("--semantics", default="std", help="std or sand")
    sp.add_argument("--stats", action="store_true")
    sp.add_argument("--sweep", action="store_true", help="evaluate at every base and print the minimal ones")

    sp = add("translate", cmd_translate, "formula and rule translations")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--sharp", action="store_true")
    g.add_argument("--circ", action="store_true")
    g.add_argument("--star", action="store_true")
    sp.add_argument("input")

    sp = add("reduce", cmd_reduce, "print the leftmost-outermost reduction sequence")
    sp.add_argument("--just", default="standard", help="comma-separated reduction sets")
    sp.add_argument("file")

    sp = add("argcheck", cmd_argcheck, "validity of an argument structure")
    sp.add_argument("--universe", required=True)
    sp.add_argument("--base")
    sp.add_argument("--just", default="standard")
    sp.add_argument("file")

    sp = add("check", cmd_check, "property probes")
    sp.add_argument("property", choices=["gdp", "harrop", "export", "basecomp", "basesound", "separation"])
    sp.add_argument("--universe", required=True)
    sp.add_argument("--base")
    sp.add_argument("--semantics", default="std")
    sp.add_argument("--pool", help="file with one sequent per line")
    sp.add_argument("--instance", action="append", default=[], help="Harrop instance 'A,B,C'")
    sp.add_argument("--fresh", help="export: widen the universe with this fresh atom")
    sp.add_argument("--count", type=int, default=300, help="basesound sample size")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--report", help="write the JSON report here")

    sp = add("repro", cmd_repro, "run the bundled regression fixtures")
    sp.add_argument("--suite", help="fixture file or directory")
    return p


def run(argv: Optional[Sequence[str]] = None) -> Result:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return Result(EXIT_YES if code == 0 else EXIT_USAGE, {})
    try:
        cfg = RunConfig(
            subcommand=a.command,
            inputs=tuple(str(x) for x in (getattr(a, k, None) for k in ("universe", "base", "assume", "file")) if x),
            semantics=selector(a.semantics) if getattr(a, "semantics", None) else None,
            level=a.level,
            max_steps=a.max_steps,
            max_size=a.max_size,
            max_states=a.max_states,
            sweep_cap=a.sweep_cap,
            output="json" if a.json else "text",
        )
        return a.fn(cfg, a)
    except _Unknown as exc:
        return Result(EXIT_UNKNOWN, {"schema": SCHEMA, "command": a.command, "verdict": "unknown", "reason": str(exc)}, [f"unknown: {exc}"])
    except (UsageError, PTSError, SyntaxError, ValueError, OSError) as exc:
        return Result(EXIT_USAGE, {"schema": SCHEMA, "command": a.command, "error": str(exc)}, [f"error: {exc}"])


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    res = run(argv)
    if not res.report and not res.text:
        return res.code
    if "--json" in argv:
        print(json.dumps(res.report, indent=2, sort_keys=True))
    else:
        stream = sys.stderr if res.code == EXIT_USAGE else sys.stdout
        for line in res.text:
            print(line, file=stream)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
