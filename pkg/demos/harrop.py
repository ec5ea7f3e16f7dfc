"""Harrop's rule: semantically valid at the empty base, yet not provable intuitionistically."""

from pathlib import Path

from ptsem.gen import atoms
from ptsem.ipc import countermodel_il, prove_il
from ptsem.props import check_base_completeness, check_harrop, harrop_formula
from ptsem.rules import load_universe
from ptsem.semantics import SANDQVIST, STANDARD, EvalContext
from ptsem.syntax import print_formula

DATA = Path(__file__).with_name("data")

a, b, c = atoms("a", "b", "c")
h = harrop_formula(a, b, c)
print("formula:", print_formula(h))
print("IL-provable:", prove_il([], h))
model = countermodel_il([], h)
print(f"Kripke countermodel with {model.size} worlds")

u = load_universe(DATA / "harrop.univ")
ctx = EvalContext(u)
print(f"standard reading over {u.k} candidates: logical consequence {ctx.logical_consequence(STANDARD, [], h)}")
rep = check_base_completeness(ctx, STANDARD, [(frozenset(), h)])
print("base completeness:", rep.verdict, rep.counterexample)

wide = EvalContext(load_universe(DATA / "harrop-sand.univ"))
for sel in (STANDARD, SANDQVIST):
    print(f"{sel:10} on the universe with a disjunction-elimination rule:", check_harrop(wide, sel, [(a, b, c)]).verdict)
