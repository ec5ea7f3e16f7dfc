"""The two readings of disjunction come apart on a base with an elimination-style rule."""

from pathlib import Path

from ptsem.props import check_compact_export, check_gdp, probe_export_fresh_atom
from ptsem.rules import load_base, load_universe
from ptsem.semantics import SANDQVIST, STANDARD, EvalContext
from ptsem.syntax import parse_sequent

DATA = Path(__file__).with_name("data")

u = load_universe(DATA / "R.univ")
ctx = EvalContext(u)
m = ctx.mask(load_base(DATA / "R.base", u))
print(f"universe: {u.k} candidate rules, {ctx.n_bases} bases")
print("base:", ", ".join(r.text() for r in u.rules_of(m)))
gamma, goal = parse_sequent("a |= b \\/ c")
for sel in (STANDARD, SANDQVIST):
    whole = ctx.consequence(sel, m, gamma, goal)
    parts = [ctx.consequence(sel, m, gamma, x) for x in (goal.left, goal.right)]
    print(f"{sel:10} a |= b \\/ c: {whole}; a |= b: {parts[0]}; a |= c: {parts[1]}")

rep = check_gdp(ctx, SANDQVIST, m, [(gamma, goal)])
print("disjunction property under the elimination reading:", rep.verdict, rep.counterexample)

literal = check_compact_export(ctx, SANDQVIST, m, [(gamma, goal)])
entry = literal.entries[0]
print(f"export on this universe: {literal.verdict}, exported with {entry['delta']}")
fresh = probe_export_fresh_atom(u, SANDQVIST, m, [(gamma, goal)])
print(f"export after adding atom e: {fresh.verdict}")
for note in fresh.notes:
    print("  note:", note)
