"""Derivability of atoms from assumed atomic rules in a base.

For a fixed set ``S`` of available rules the derivable atoms form a least
fixpoint: an atom is derivable when some rule in ``S`` concludes it and each
premise ``[D] a`` holds, where ``a`` is looked up in the closure of ``S | D``.
When ``D`` adds nothing new the lookup stays inside the current fixpoint;
otherwise it recurses into a strictly larger rule set, so recursion is
well-founded and needs no cycle bookkeeping.  Closures are computed in
synchronous rounds, which makes the extracted witnesses shallowest-first and
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .errors import DischargeScopeError, IllFormedDerivation
from .rules import Base, atexp_rule, is_atexp
from .syntax import BOT, Atom, AtomicRule

ORIGINS = ("base", "assumed", "discharged")


@dataclass(frozen=True)
class AtomicDerivation:
    """A derivation tree; ``origin`` says where the applied rule comes from."""

    conclusion: Atom
    rule: AtomicRule
    children: Tuple["AtomicDerivation", ...] = ()
    origin: str = "base"

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def render(self, indent: int = 0) -> str:
        tag = "" if self.origin == "base" else f" [{self.origin}]"
        lines = [f"{'  ' * indent}{self.conclusion.name}  by {self.rule.text()}{tag}"]
        for c in self.children:
            lines.append(c.render(indent + 1))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "conclusion": self.conclusion.name,
            "rule": self.rule.text(),
            "origin": self.origin,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass
class _Closure:
    derived: Dict[Atom, Tuple[AtomicRule, int]]

    def has(self, a: Atom) -> bool:
        return a in self.derived or BOT in self.derived

    def atoms(self) -> FrozenSet[Atom]:
        return frozenset(self.derived)


class Deriver:
    """Closure cache keyed by the available rule set; reusable across queries."""

    def __init__(self):
        self._memo: Dict[FrozenSet[AtomicRule], _Closure] = {}
        self.closures_built = 0

    def closure(self, available: FrozenSet[AtomicRule]) -> _Closure:
        hit = self._memo.get(available)
        if hit is not None:
            return hit
        self.closures_built += 1
        derived: Dict[Atom, Tuple[AtomicRule, int]] = {}
        compound = []
        for r in sorted(available):
            if r.is_axiom:
                derived.setdefault(r.conclusion, (r, 0))
            elif not is_atexp(r):
                compound.append(r)
        rnd = 0
        while True:
            rnd += 1
            known = dict(derived)
            bot = BOT in known
            fresh = {}
            for r in compound:
                if r.conclusion in known or r.conclusion in fresh:
                    continue
                ok = True
                for p in r.premises:
                    if p.discharged <= available:
                        if not (bot or p.atom in known):
                            ok = False
                            break
                    elif not self.closure(available | p.discharged).has(p.atom):
                        ok = False
                        break
                if ok:
                    fresh[r.conclusion] = (r, rnd)
            if not fresh:
                break
            derived.update(fresh)
        out = _Closure(derived)
        self._memo[available] = out
        return out

    def derivable_atoms(self, available: FrozenSet[AtomicRule]) -> FrozenSet[Atom]:
        return self.closure(frozenset(available)).atoms()

    def derives(self, b: Base, assumed: Iterable[AtomicRule], goal: Atom) -> bool:
        return self.closure(b.rules | frozenset(assumed)).has(goal)

    def witness(self, b: Base, assumed: Iterable[AtomicRule], goal: Atom) -> Optional[AtomicDerivation]:
        assumed = frozenset(assumed)
        available = b.rules | assumed
        if not self.closure(available).has(goal):
            return None
        return self._build(b, assumed, available, frozenset(), goal)

    def _build(self, b, assumed, available, scope, goal) -> AtomicDerivation:
        cl = self.closure(available)
        if goal not in cl.derived:
            r = atexp_rule(goal)
            child = self._build(b, assumed, available, scope, BOT)
            return AtomicDerivation(goal, r, (child,), "base")
        r, _ = cl.derived[goal]
        kids = []
        for p in r.premises:
            inner = scope | p.discharged
            kids.append(self._build(b, assumed, available | p.discharged, inner, p.atom))
        return AtomicDerivation(goal, r, tuple(kids), _origin(b, assumed, scope, r))


def _origin(b: Base, assumed, scope, r: AtomicRule) -> str:
    if r in b:
        return "base"
    if r in scope:
        return "discharged"
    return "assumed"


def derives(b: Base, assumed: Iterable[AtomicRule], goal: Atom) -> bool:
    return Deriver().derives(b, assumed, goal)


def derive_witness(b: Base, assumed: Iterable[AtomicRule], goal: Atom) -> Optional[AtomicDerivation]:
    return Deriver().witness(b, assumed, goal)


def check_derivation(
    b: Base, d: AtomicDerivation, assumed: Optional[Iterable[AtomicRule]] = None
) -> Tuple[FrozenSet[AtomicRule], Atom]:
    """Return the open assumed rules and the conclusion of ``d``.

    When ``assumed`` is given, nodes marked ``assumed`` must use one of
    those rules.
    """
    allowed = None if assumed is None else frozenset(assumed)
    used = set()

    def walk(node: AtomicDerivation, scope: FrozenSet[AtomicRule]):
        r = node.rule
        if node.origin not in ORIGINS:
            raise IllFormedDerivation(f"unknown origin {node.origin!r}", node)
        if r.conclusion != node.conclusion:
            raise IllFormedDerivation(
                f"node concludes {node.conclusion.name} but applies {r.text()}", node
            )
        if len(node.children) != len(r.premises):
            raise IllFormedDerivation(f"{r.text()} needs {len(r.premises)} premises", node)
        for child, p in zip(node.children, r.premises):
            if child.conclusion != p.atom:
                raise IllFormedDerivation(
                    f"premise of {r.text()} should be {p.atom.name}, got {child.conclusion.name}", child
                )
        if node.origin == "base":
            if r not in b:
                raise IllFormedDerivation(f"{r.text()} is not a rule of the base", node)
        elif node.origin == "discharged":
            if r not in scope:
                raise DischargeScopeError(f"{r.text()} is used outside the scope discharging it", node)
        else:
            if allowed is not None and r not in allowed:
                raise DischargeScopeError(
                    f"{r.text()} is neither a base rule, an assumption, nor discharged", node
                )
            used.add(r)
        for child, p in zip(node.children, r.premises):
            walk(child, scope | p.discharged)

    walk(d, frozenset())
    return frozenset(used), d.conclusion
