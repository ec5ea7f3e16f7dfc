"""Atomic derivations with assumed rules, and the same reasoning inside intuitionistic logic."""

from pathlib import Path

from ptsem.derive import derive_witness
from ptsem.ipc import extended_context, prove_extended, prove_il
from ptsem.rules import load_base, load_rules
from ptsem.syntax import Atom, format_sequent, parse_rule, parse_sequent

DATA = Path(__file__).with_name("data")

base = load_base(DATA / "worked.base")
assumed = load_rules(DATA / "worked.assume")
print("base rules:   ", ", ".join(sorted(r.text() for r in base.rules)))
print("assumed rules:", ", ".join(sorted(r.text() for r in assumed)))
w = derive_witness(base, assumed, Atom("y"))
print("a derivation of y:")
print(w.render(1))
for dropped in sorted(assumed):
    rest = assumed - {dropped}
    print(f"without {dropped.text():14} y derivable: {derive_witness(base, rest, Atom('y')) is not None}")

print()
gamma, goal = parse_sequent("w -> bot |- ((q \\/ (t -> u)) -> z) /\\ (w -> bot)")
ext = load_base(DATA / "ext.base")
extra = [parse_rule("(s => t)"), parse_rule("r")]
print("extended sequent provable:", prove_extended(gamma, extra, ext, goal))
ctx = extended_context(gamma, extra, ext)
print("translated sequent:", format_sequent(ctx, goal, "|-"))
print("translated sequent provable:", prove_il(ctx, goal))
print("dropping r, provable:", prove_extended(gamma, extra[:1], ext, goal))
