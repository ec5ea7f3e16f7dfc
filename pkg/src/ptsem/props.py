"""Probes for metatheoretic properties over a finite universe.

Every probe sweeps an explicit pool and returns a ``PropertyReport``.  A
``fails`` verdict carries a counterexample that ``replay`` re-evaluates; a
``holds-on-sweep`` verdict is only a statement about the swept pool.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .ipc import Prover, extended_context, prove_extended
from .rules import Universe, make_universe
from .semantics import SANDQVIST, STANDARD, EvalContext, selector
from .syntax import BOT, Atom, AtomicRule, Disj, Formula, Imp, Premise, format_sequent, has_disjunction, neg, print_formula
from .translate import star

SCHEMA = "ptsem.report/1"
HOLDS, FAILS, HOLDS_ON_SWEEP = "holds", "fails", "holds-on-sweep"

FINITE_CARRIER_NOTE = (
    "Delta ranges over subsets of the finitely many instantiated translations of the base; "
    "a schematic base has infinitely many instances outside any finite universe"
)

Pool = List[Tuple[frozenset, Formula]]


@dataclass
class PropertyReport:
    name: str
    universe: dict
    swept: dict
    verdict: str
    counterexample: Optional[dict] = None
    entries: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict != FAILS

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "property": self.name,
            "universe": self.universe,
            "swept": self.swept,
            "verdict": self.verdict,
            "counterexample": self.counterexample,
            "entries": self.entries,
            "notes": self.notes,
        }


def _seq(gamma, goal) -> str:
    return format_sequent(gamma, goal, "|=")


def _base_text(u: Universe, m: int) -> List[str]:
    return sorted(r.text() for r in u.rules_of(m))


def _pool_dict(pool) -> List[str]:
    return [_seq(g, a) for g, a in pool]


def harrop_formula(a: Formula, b: Formula, c: Formula) -> Formula:
    na = neg(a)
    return Imp(Imp(na, Disj(b, c)), Disj(Imp(na, b), Imp(na, c)))


# -- disjunction property ----------------------------------------------------


def check_gdp(ctx: EvalContext, sel: str, b, pool: Pool) -> PropertyReport:
    """From a disjunction-free context, consequence of ``A or B`` should give a disjunct."""
    sel = selector(sel)
    u = ctx.universe
    m = ctx.mask(b)
    entries = []
    cex = None
    for gamma, goal in pool:
        if not isinstance(goal, Disj):
            raise ValueError(f"GDP pool entries need a disjunctive goal: {print_formula(goal)}")
        if any(has_disjunction(g) for g in gamma):
            raise ValueError("GDP pool contexts must be disjunction-free")
        whole = ctx.consequence(sel, m, gamma, goal)
        left = ctx.consequence(sel, m, gamma, goal.left)
        right = ctx.consequence(sel, m, gamma, goal.right)
        entries.append({"sequent": _seq(gamma, goal), "disjunction": whole, "left": left, "right": right})
        if whole and not (left or right) and cex is None:
            cex = {"base": _base_text(u, m), "gamma": sorted(map(print_formula, gamma)), "goal": print_formula(goal)}
    return PropertyReport(
        "gdp",
        u.describe(),
        {"semantics": sel, "base": _base_text(u, m), "pool": _pool_dict(pool)},
        FAILS if cex else HOLDS_ON_SWEEP,
        cex,
        entries,
    )


# -- Harrop's rule --------------------------------------------------------------


def check_harrop(ctx: EvalContext, sel: str, instances: Iterable[Tuple[Formula, Formula, Formula]]) -> PropertyReport:
    sel = selector(sel)
    entries = []
    cex = None
    instances = list(instances)
    for a, b, c in instances:
        h = harrop_formula(a, b, c)
        ok = ctx.logical_consequence(sel, [], h)
        entries.append({"formula": print_formula(h), "valid": ok})
        if not ok and cex is None:
            cex = {"base": [], "gamma": [], "goal": print_formula(h)}
    return PropertyReport(
        "harrop",
        ctx.universe.describe(),
        {"semantics": sel, "instances": [[print_formula(x) for x in t] for t in instances]},
        FAILS if cex else HOLDS_ON_SWEEP,
        cex,
        entries,
    )


# -- compact export -----------------------------------------------------------------


def _export_search(ctx, sel, gamma, goal, deltas: Sequence[Formula], max_subsets: int):
    """Smallest subset of ``deltas`` that, added to ``gamma``, yields logical consequence."""
    tried = 0
    for size in range(len(deltas) + 1):
        for sub in itertools.combinations(deltas, size):
            tried += 1
            if tried > max_subsets:
                return None, tried, True
            if ctx.logical_consequence(sel, list(gamma) + list(sub), goal):
                return sub, tried, False
    return None, tried, False


def check_compact_export(
    ctx: EvalContext, sel: str, b, pool: Pool, max_subsets: int = 1 << 14
) -> PropertyReport:
    """Compare consequence at the base with logical consequence from the context plus some translated rules."""
    sel = selector(sel)
    u = ctx.universe
    m = ctx.mask(b)
    deltas = sorted({star(r) for r in u.rules_of(m)}, key=print_formula)
    entries = []
    cex = None
    truncated = False
    for gamma, goal in pool:
        at_base = ctx.consequence(sel, m, gamma, goal)
        found, tried, cut = _export_search(ctx, sel, gamma, goal, deltas, max_subsets)
        truncated |= cut
        exported = found is not None
        entry = {
            "sequent": _seq(gamma, goal),
            "at_base": at_base,
            "exported": exported,
            "delta": None if found is None else [print_formula(f) for f in found],
            "subsets_tried": tried,
        }
        entries.append(entry)
        if cex is None and at_base and not exported and not cut:
            cex = {"base": _base_text(u, m), "gamma": sorted(map(print_formula, gamma)),
                   "goal": print_formula(goal), "direction": "export"}
        if cex is None and exported and not at_base:
            cex = {"base": _base_text(u, m), "gamma": sorted(map(print_formula, gamma)),
                   "goal": print_formula(goal), "direction": "import", "delta": entry["delta"]}
    notes = [FINITE_CARRIER_NOTE]
    if truncated:
        notes.append(f"subset search stopped after {max_subsets} subsets for some entries")
    return PropertyReport(
        "compact-export",
        u.describe(),
        {"semantics": sel, "base": _base_text(u, m), "pool": _pool_dict(pool), "delta_pool": [print_formula(f) for f in deltas]},
        FAILS if cex else HOLDS_ON_SWEEP,
        cex,
        entries,
        notes,
    )


def fresh_atom_universe(u: Universe, b, fresh: str = "e") -> Tuple[Universe, int]:
    """Widen ``u`` by an unused atom.

    The new atom gets every scheme instance mentioning it and one rule
    ``x => fresh`` per old atom.  The returned mask is ``b`` plus the new
    instances of every scheme that already had an instance in ``b``.
    """
    e = Atom(fresh)
    if e in u.alphabet or e == BOT:
        raise ValueError(f"atom {fresh} is already in the universe")
    old = u.rules_of(b if isinstance(b, int) else u.mask_of(b))
    alpha = set(u.alphabet) | {e}
    links = [AtomicRule((Premise(frozenset(), x),), e) for x in sorted(u.alphabet, key=lambda a: a.name)]
    wide = make_universe(alpha, list(u.candidates) + links, u.level_bound, u.scheme_defs)
    rules = set(old)
    for s in u.scheme_defs:
        if set(s.instantiate(u.alphabet)) & old:
            rules |= set(s.instantiate(alpha))
    return wide, wide.mask_of(rules)


def probe_export_fresh_atom(u: Universe, sel: str, b, pool: Pool, fresh: str = "e") -> PropertyReport:
    """Export with Delta drawn from the base's translations over the old alphabet, judged after widening.

    This is the finite shadow of the infinite case: any finite Delta misses
    the instances at some atom, and the probe supplies one such atom.
    """
    sel = selector(sel)
    m = b if isinstance(b, int) else u.mask_of(b)
    wide, wm = fresh_atom_universe(u, m, fresh)
    wctx = EvalContext(wide)
    deltas = sorted({star(r) for r in u.rules_of(m)}, key=print_formula)
    entries = []
    cex = None
    for gamma, goal in pool:
        at_base = wctx.consequence(sel, wm, gamma, goal)
        found, tried, _ = _export_search(wctx, sel, gamma, goal, deltas, 1 << 20)
        entries.append({
            "sequent": _seq(gamma, goal),
            "at_base": at_base,
            "exported": found is not None,
            "delta": None if found is None else [print_formula(f) for f in found],
            "subsets_tried": tried,
        })
        if cex is None and at_base and found is None:
            cex = {"base": _base_text(wide, wm), "gamma": sorted(map(print_formula, gamma)),
                   "goal": print_formula(goal), "direction": "export", "fresh_atom": fresh}
    return PropertyReport(
        "compact-export-fresh-atom",
        wide.describe(),
        {"semantics": sel, "base": _base_text(wide, wm), "pool": _pool_dict(pool),
         "delta_pool": [print_formula(f) for f in deltas]},
        FAILS if cex else HOLDS_ON_SWEEP,
        cex,
        entries,
        [FINITE_CARRIER_NOTE, f"Delta is restricted to translations over the alphabet without {fresh}"],
    )


# -- base soundness and completeness ------------------------------------------------


def check_base_completeness(ctx: EvalContext, sel: str, pool: Pool, masks: Optional[Iterable[int]] = None) -> PropertyReport:
    """Look for a base where a pool sequent is a semantic consequence but not derivable with the base's rules."""
    sel = selector(sel)
    u = ctx.universe
    masks = list(range(1 << u.k)) if masks is None else list(masks)
    prover = Prover()
    cex = None
    checked = 0
    for m in masks:
        b = u.base_of(m)
        for gamma, goal in pool:
            checked += 1
            if ctx.consequence(sel, m, gamma, goal) and prover.prove(extended_context(gamma, (), b), goal) is None:
                cex = {"base": _base_text(u, m), "gamma": sorted(map(print_formula, gamma)), "goal": print_formula(goal)}
                break
        if cex:
            break
    return PropertyReport(
        "base-completeness",
        u.describe(),
        {"semantics": sel, "bases": len(masks), "pool": _pool_dict(pool), "queries": checked},
        FAILS if cex else HOLDS_ON_SWEEP,
        cex,
    )


def derivable_sample(u: Universe, count: int, rng: random.Random, max_depth: int = 3, max_tries: int = 200_000) -> List[Tuple[int, frozenset, Formula]]:
    """Random (base, context, goal) triples derivable with the base's rules."""
    from .gen import random_formula

    letters = list(u.atoms)
    prover = Prover()
    out = []
    tries = 0
    while len(out) < count and tries < max_tries:
        tries += 1
        m = rng.randrange(1 << u.k)
        gamma = frozenset(random_formula(rng, letters, max_depth) for _ in range(rng.randint(0, 2)))
        goal = random_formula(rng, letters, max_depth)
        if prover.prove(extended_context(gamma, (), u.base_of(m)), goal) is not None:
            out.append((m, gamma, goal))
    return out


def check_base_soundness(ctx: EvalContext, sel: str, count: int, seed: int = 0) -> PropertyReport:
    """Sampled derivable sequents must be semantic consequences at their base."""
    sel = selector(sel)
    u = ctx.universe
    sample = derivable_sample(u, count, random.Random(seed))
    cex = None
    for m, gamma, goal in sample:
        if not ctx.consequence(sel, m, gamma, goal):
            cex = {"base": _base_text(u, m), "gamma": sorted(map(print_formula, gamma)), "goal": print_formula(goal)}
            break
    return PropertyReport(
        "base-soundness",
        u.describe(),
        {"semantics": sel, "samples": len(sample), "seed": seed},
        FAILS if cex else HOLDS_ON_SWEEP if sample else HOLDS,
        cex,
    )


# -- separation of the two disjunction readings ------------------------------------------


def check_separation(ctx: EvalContext, pool: Pool, masks: Optional[Iterable[int]] = None) -> PropertyReport:
    """Search for sequents on which the two selectors disagree, in each direction."""
    u = ctx.universe
    masks = list(range(1 << u.k)) if masks is None else list(masks)
    found = {"standard-only": None, "sandqvist-only": None}
    for m in masks:
        for gamma, goal in pool:
            std = ctx.consequence(STANDARD, m, gamma, goal)
            snd = ctx.consequence(SANDQVIST, m, gamma, goal)
            if std == snd:
                continue
            key = "standard-only" if std else "sandqvist-only"
            if found[key] is None:
                found[key] = {"base": _base_text(u, m), "gamma": sorted(map(print_formula, gamma)), "goal": print_formula(goal)}
        if all(found.values()):
            break
    gaps = [k for k, v in found.items() if v is None]
    notes = [f"no {k} witness in the swept pool" for k in gaps]
    return PropertyReport(
        "separation",
        u.describe(),
        {"bases": len(masks), "pool": _pool_dict(pool)},
        HOLDS if not gaps else HOLDS_ON_SWEEP,
        None,
        [{"kind": k, "witness": v} for k, v in found.items()],
        notes,
    )


# -- replay ---------------------------------------------------------------------------


def replay(report: PropertyReport, ctx: EvalContext) -> bool:
    """Re-evaluate a failing report's counterexample; true when the failure reproduces."""
    from .syntax import parse_formula, parse_rule

    cex = report.counterexample
    if cex is None:
        return False
    sel = report.swept.get("semantics", STANDARD)
    u = ctx.universe
    m = u.mask_of([parse_rule(t) for t in cex["base"]])
    gamma = [parse_formula(t) for t in cex["gamma"]]
    goal = parse_formula(cex["goal"])
    if report.name == "gdp":
        return (
            ctx.consequence(sel, m, gamma, goal)
            and not ctx.consequence(sel, m, gamma, goal.left)
            and not ctx.consequence(sel, m, gamma, goal.right)
        )
    if report.name == "harrop":
        return not ctx.logical_consequence(sel, gamma, goal)
    if report.name in ("compact-export", "compact-export-fresh-atom"):
        deltas = [parse_formula(t) for t in report.swept["delta_pool"]]
        found, _, _ = _export_search(ctx, sel, gamma, goal, deltas, 1 << 20)
        if cex["direction"] == "export":
            return ctx.consequence(sel, m, gamma, goal) and found is None
        return found is not None and not ctx.consequence(sel, m, gamma, goal)
    if report.name == "base-completeness":
        return ctx.consequence(sel, m, gamma, goal) and not prove_extended(gamma, (), u.base_of(m), goal)
    if report.name == "base-soundness":
        return not ctx.consequence(sel, m, gamma, goal)
    raise ValueError(f"no replay for {report.name}")


def exhaustive_disjunction_pool(letters: Sequence[Atom]) -> Pool:
    """Every single-atom context with a disjunction of two distinct atoms as goal."""
    out = []
    for g in letters:
        for x, y in itertools.combinations(letters, 2):
            out.append((frozenset([g]), Disj(x, y)))
    return out
