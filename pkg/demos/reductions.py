"""Argument structures: detour reductions and bounded validity checks."""

from pathlib import Path

from ptsem.arguments import STANDARD, ValidityChecker, dumps, loads, named_justification, normalize, reduce_step
from ptsem.rules import load_base, load_universe
from ptsem.semantics import EvalContext

DATA = Path(__file__).with_name("data")


def show(title, d):
    print(f"-- {title}")
    print(dumps(d.canonical()))


detour = loads((DATA / "or-detour.arg").read_text())
show("a disjunction detour", detour)
(reduct,) = reduce_step(detour, STANDARD)
show("its reduct, with the left subproof copied into both uses", reduct)

weak = loads((DATA / "weakening.arg").read_text())
(reduct,) = reduce_step(weak, named_justification("wk"))
show("weakening an implication, reduced", reduct)

nf, steps, done = normalize(detour, STANDARD)
print(f"normal form after {steps} step(s), finished: {done}")

u = load_universe(DATA / "two.univ")
checker = ValidityChecker(EvalContext(u))
or_left = loads((DATA / "or-left.arg").read_text())
for name in ("not-b.base", "b.base"):
    v = checker.check(or_left, named_justification("orl"), load_base(DATA / name, u))
    print(f"left projection of a \\/ b at {name}: {v.status} {v.reason}".rstrip())
v = checker.check(loads((DATA / "wk-valid.arg").read_text()), named_justification("wk"), 0)
print(f"weakening argument at the empty base: {v.status}, {v.extensions} extension checks")
