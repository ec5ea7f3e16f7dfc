"""Intuitionistic propositional provability and finite Kripke countermodels.

The prover is Dyckhoff's contraction-free calculus: invertible rules are
applied eagerly, and only right disjunction and the nested-implication left
rule branch.  Every premise is smaller in the calculus' multiset ordering,
so search terminates and a plain memo table is sound.  Proofs are returned
as trees so that callers can read off natural-deduction witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .errors import OverlapError
from .rules import Base
from .syntax import BOT, Atom, Conj, Disj, Formula, Imp, atoms_of, print_formula
from .translate import star_base, star_set


@dataclass(frozen=True)
class SeqProof:
    """A node of a sequent proof.  ``principal`` is the formula the rule acts on."""

    rule: str
    context: FrozenSet[Formula]
    goal: Formula
    principal: Optional[Formula] = None
    premises: Tuple["SeqProof", ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


class Prover:
    """Memoized proof search; one instance may serve many queries."""

    def __init__(self):
        self._memo: Dict[Tuple[FrozenSet[Formula], Formula], Optional[SeqProof]] = {}

    def prove(self, context: Iterable[Formula], goal: Formula) -> Optional[SeqProof]:
        return self._search(frozenset(context), goal)

    def _search(self, ctx: FrozenSet[Formula], goal: Formula) -> Optional[SeqProof]:
        key = (ctx, goal)
        if key in self._memo:
            return self._memo[key]
        self._memo[key] = None
        out = self._attempt(ctx, goal)
        self._memo[key] = out
        return out

    def _attempt(self, ctx, goal) -> Optional[SeqProof]:
        if goal in ctx:
            return SeqProof("ax", ctx, goal, goal)
        if BOT in ctx:
            return SeqProof("botL", ctx, goal, BOT)

        for f in ctx:
            rest = ctx - {f}
            if isinstance(f, Conj):
                p = self._search(rest | {f.left, f.right}, goal)
                return p and SeqProof("andL", ctx, goal, f, (p,))
            if isinstance(f, Disj):
                p1 = self._search(rest | {f.left}, goal)
                if p1 is None:
                    return None
                p2 = self._search(rest | {f.right}, goal)
                return p2 and SeqProof("orL", ctx, goal, f, (p1, p2))
            if isinstance(f, Imp):
                a = f.left
                if isinstance(a, Atom):
                    if a == BOT:
                        p = self._search(rest, goal)
                        return p and SeqProof("drop", ctx, goal, f, (p,))
                    if a in ctx:
                        p = self._search(rest | {f.right}, goal)
                        return p and SeqProof("impL_atom", ctx, goal, f, (p,))
                elif isinstance(a, Conj):
                    p = self._search(rest | {Imp(a.left, Imp(a.right, f.right))}, goal)
                    return p and SeqProof("impL_and", ctx, goal, f, (p,))
                elif isinstance(a, Disj):
                    p = self._search(rest | {Imp(a.left, f.right), Imp(a.right, f.right)}, goal)
                    return p and SeqProof("impL_or", ctx, goal, f, (p,))

        if isinstance(goal, Conj):
            p1 = self._search(ctx, goal.left)
            if p1 is None:
                return None
            p2 = self._search(ctx, goal.right)
            return p2 and SeqProof("andR", ctx, goal, goal, (p1, p2))
        if isinstance(goal, Imp):
            p = self._search(ctx | {goal.left}, goal.right)
            return p and SeqProof("impR", ctx, goal, goal, (p,))

        if isinstance(goal, Disj):
            for side, rule in ((goal.left, "orR1"), (goal.right, "orR2")):
                p = self._search(ctx, side)
                if p is not None:
                    return SeqProof(rule, ctx, goal, goal, (p,))
        for f in ctx:
            if isinstance(f, Imp) and isinstance(f.left, Imp):
                c, d, b = f.left.left, f.left.right, f.right
                rest = ctx - {f}
                p1 = self._search(rest | {Imp(d, b)}, Imp(c, d))
                if p1 is None:
                    continue
                p2 = self._search(rest | {b}, goal)
                if p2 is not None:
                    return SeqProof("impL_imp", ctx, goal, f, (p1, p2))
        return None


def prove_il(context: Iterable[Formula], goal: Formula) -> bool:
    return Prover().prove(context, goal) is not None


def prove_il_proof(context: Iterable[Formula], goal: Formula) -> Optional[SeqProof]:
    return Prover().prove(context, goal)


def extended_context(context, assumed, b: Base) -> FrozenSet[Formula]:
    assumed = frozenset(assumed)
    overlap = assumed & b.rules
    if overlap:
        names = ", ".join(sorted(r.text() for r in overlap))
        raise OverlapError(f"assumed rules already in the base: {names}")
    return frozenset(context) | star_set(assumed) | star_base(b)


def prove_extended(context: Iterable[Formula], assumed, b: Base, goal: Formula) -> bool:
    """Derivability in intuitionistic logic extended by the base's rules and ``assumed``."""
    return prove_il(extended_context(context, assumed, b), goal)


# ---------------------------------------------------------------------------
# Kripke models


@dataclass(frozen=True)
class KripkeModel:
    """A finite rooted model; world 0 is the root.

    ``above[w]`` is the set of worlds ``>= w`` as a bit mask and
    ``valuation[w]`` the atoms true at ``w``.
    """

    above: Tuple[int, ...]
    valuation: Tuple[FrozenSet[str], ...]

    @property
    def size(self) -> int:
        return len(self.above)

    def truth_set(self, f: Formula) -> int:
        n = self.size
        if isinstance(f, Atom):
            if f == BOT:
                return 0
            return sum(1 << w for w in range(n) if f.name in self.valuation[w])
        a, b = self.truth_set(f.left), self.truth_set(f.right)
        if isinstance(f, Conj):
            return a & b
        if isinstance(f, Disj):
            return a | b
        return sum(1 << w for w in range(n) if not (self.above[w] & a & ~b))

    def forces(self, world: int, f: Formula) -> bool:
        return bool(self.truth_set(f) >> world & 1)

    def refutes(self, context: Iterable[Formula], goal: Formula) -> bool:
        return all(self.forces(0, g) for g in context) and not self.forces(0, goal)

    def is_well_formed(self) -> bool:
        n = self.size
        for w in range(n):
            if not self.above[w] >> w & 1:
                return False
            for v in range(n):
                if self.above[w] >> v & 1 and not self.valuation[w] <= self.valuation[v]:
                    return False
                if self.above[w] >> v & 1 and self.above[v] & ~self.above[w]:
                    return False
        return self.above[0] == (1 << n) - 1

    def to_dict(self) -> dict:
        return {
            "worlds": self.size,
            "above": [[v for v in range(self.size) if m >> v & 1] for m in self.above],
            "valuation": [sorted(v) for v in self.valuation],
        }

    def render(self) -> str:
        lines = []
        for w in range(self.size):
            ups = [v for v in range(self.size) if self.above[w] >> v & 1 and v != w]
            atoms = ", ".join(sorted(self.valuation[w])) or "-"
            lines.append(f"w{w}: {{{atoms}}}  below {ups}")
        return "\n".join(lines)


@lru_cache(maxsize=None)
def _tree_shapes(n: int) -> Tuple[Tuple[int, ...], ...]:
    """Rooted unordered trees with ``n`` nodes, one parent array (preorder) per shape."""

    def canon(parents, node):
        kids = [canon(parents, c) for c in range(len(parents)) if parents[c] == node]
        return tuple(sorted(kids, reverse=True))

    seen = {}
    for tail in itertools.product(*[range(i) for i in range(1, n)]):
        parents = (-1,) + tail
        seen.setdefault(canon(parents, 0), None)

    def emit(shape, parent, out):
        for sub in shape:
            me = len(out)
            out.append(parent)
            emit(sub, me, out)

    shapes = []
    for shape in sorted(seen, key=lambda s: (_height(s), s)):
        out = [-1]
        emit(shape, 0, out)
        shapes.append(tuple(out))
    return tuple(shapes)


def _height(shape) -> int:
    return 1 + max((_height(s) for s in shape), default=0)


@lru_cache(maxsize=None)
def _shape_data(parents: Tuple[int, ...]):
    n = len(parents)
    above = [1 << w for w in range(n)]
    for w in range(n - 1, 0, -1):
        above[parents[w]] |= above[w]
    ups = [m for m in range(1 << n) if all(not (m >> w & 1) or (above[w] & ~m) == 0 for w in range(n))]
    return tuple(above), tuple(ups)


def countermodel_il(context: Iterable[Formula], goal: Formula, max_points: int = 6) -> Optional[KripkeModel]:
    """Smallest tree model refuting the sequent, or ``None`` when none has ``max_points`` worlds or fewer."""
    context = list(context)
    letters = sorted({a.name for f in context + [goal] for a in atoms_of(f)} - {BOT.name})
    for n in range(1, max_points + 1):
        for parents in _tree_shapes(n):
            above, ups = _shape_data(parents)
            found = _search_valuations(context, goal, letters, above, ups)
            if found is not None:
                return found
    return None


def _search_valuations(context, goal, letters, above, ups) -> Optional[KripkeModel]:
    n = len(above)

    def ev(f, val):
        if isinstance(f, Atom):
            return 0 if f == BOT else val[f.name]
        a, b = ev(f.left, val), ev(f.right, val)
        if isinstance(f, Conj):
            return a & b
        if isinstance(f, Disj):
            return a | b
        bad = a & ~b
        out = 0
        for w in range(n):
            if not (above[w] & bad):
                out |= 1 << w
        return out

    for combo in itertools.product(ups, repeat=len(letters)):
        val = dict(zip(letters, combo))
        if ev(goal, val) & 1:
            continue
        if all(ev(g, val) & 1 for g in context):
            valuation = tuple(frozenset(l for l in letters if val[l] >> w & 1) for w in range(n))
            return KripkeModel(above, valuation)
    return None


def classical_countermodel(context: Iterable[Formula], goal: Formula) -> Optional[Dict[str, bool]]:
    m = countermodel_il(context, goal, max_points=1)
    if m is None:
        return None
    letters = sorted({a.name for f in list(context) + [goal] for a in atoms_of(f)} - {BOT.name})
    return {l: l in m.valuation[0] for l in letters}


def describe_sequent(context: Iterable[Formula], goal: Formula) -> str:
    left = ", ".join(sorted(print_formula(g) for g in context))
    return f"{left} |- {print_formula(goal)}".strip()
