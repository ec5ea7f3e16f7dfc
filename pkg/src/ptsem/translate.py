"""Translations between disjunction-free formulas and atomic rules.

``sharp`` pushes implications inward until every implication has an atomic
consequent.  ``circ`` reads such a formula as a set of rules, and ``star``
reads a rule back as a formula.  A premise slot ``[D] a`` and the rule
``D => a`` are two views of the same object; ``premise_of`` and ``rule_of``
convert between them.
"""

from __future__ import annotations

from typing import FrozenSet, Iterable, List

from .rules import Base
from .syntax import (
    Atom,
    AtomicRule,
    Conj,
    Formula,
    Imp,
    Premise,
    conj_all,
    conjuncts,
    has_disjunction,
)


def require_disjunction_free(f: Formula) -> Formula:
    if has_disjunction(f):
        raise ValueError(f"formula contains a disjunction: {f}")
    return f


def _push(ant: Formula, cons: Formula) -> Formula:
    # both arguments already normal
    if isinstance(cons, Conj):
        return Conj(_push(ant, cons.left), _push(ant, cons.right))
    if isinstance(cons, Imp):
        return _push(Conj(ant, cons.left), cons.right)
    return Imp(ant, cons)


def sharp(f: Formula) -> Formula:
    """Normal form under the two rewrites, innermost subterms first."""
    require_disjunction_free(f)
    if isinstance(f, Atom):
        return f
    if isinstance(f, Conj):
        return Conj(sharp(f.left), sharp(f.right))
    return _push(sharp(f.left), sharp(f.right))


def _rewrite_outermost(f: Formula):
    if isinstance(f, Imp):
        b, c = f.left, f.right
        if isinstance(c, Conj):
            return Conj(Imp(b, c.left), Imp(b, c.right))
        if isinstance(c, Imp):
            return Imp(Conj(b, c.left), c.right)
    if isinstance(f, Atom):
        return None
    left = _rewrite_outermost(f.left)
    if left is not None:
        return type(f)(left, f.right)
    right = _rewrite_outermost(f.right)
    if right is not None:
        return type(f)(f.left, right)
    return None


def sharp_outermost(f: Formula) -> Formula:
    """Same rewrites, always firing the leftmost-outermost redex."""
    require_disjunction_free(f)
    while True:
        g = _rewrite_outermost(f)
        if g is None:
            return f
        f = g


def is_sharp_normal(f: Formula) -> bool:
    if isinstance(f, Atom):
        return True
    if isinstance(f, Imp) and not isinstance(f.right, Atom):
        return False
    return is_sharp_normal(f.left) and is_sharp_normal(f.right)


def flatten_antecedents(f: Formula) -> Formula:
    """Re-associate every conjunction left-nested; used to compare rewrite orders."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Conj):
        return conj_all(flatten_antecedents(c) for c in conjuncts(f))
    return type(f)(flatten_antecedents(f.left), flatten_antecedents(f.right))


def premise_of(r: AtomicRule) -> Premise:
    return Premise(frozenset(rule_of(p) for p in r.premises), r.conclusion)


def rule_of(p: Premise) -> AtomicRule:
    return AtomicRule(tuple(premise_of(d) for d in sorted(p.discharged)), p.atom)


def _circ_normal(f: Formula) -> List[AtomicRule]:
    out: List[AtomicRule] = []
    for part in conjuncts(f):
        if isinstance(part, Atom):
            r = AtomicRule((), part)
        else:
            slots = []
            for b in conjuncts(part.left):
                slots.extend(premise_of(x) for x in _circ_normal(b))
            r = AtomicRule(tuple(slots), part.right)
        if r not in out:
            out.append(r)
    return out


def circ_rules(f: Formula) -> List[AtomicRule]:
    """``circ`` as an ordered, duplicate-free list."""
    return _circ_normal(sharp(f))


def circ(f: Formula) -> FrozenSet[AtomicRule]:
    return frozenset(circ_rules(f))


def circ_set(gamma: Iterable[Formula]) -> FrozenSet[AtomicRule]:
    out = set()
    for g in gamma:
        out |= circ(g)
    return frozenset(out)


def ordered_premises(r: AtomicRule) -> List[Premise]:
    """Premise slots in canonical order; premise order is not part of a rule's identity."""
    return sorted(r.premises, key=lambda p: p.key)


def premise_rules(r: AtomicRule) -> List[AtomicRule]:
    """The premise slots of ``r`` viewed as rules, in canonical slot order."""
    return [rule_of(p) for p in ordered_premises(r)]


def star(r: AtomicRule) -> Formula:
    if not r.premises:
        return r.conclusion
    return Imp(conj_all(star(x) for x in premise_rules(r)), r.conclusion)


def star_set(rules: Iterable[AtomicRule]) -> FrozenSet[Formula]:
    return frozenset(star(r) for r in rules)


def star_base(b: Base) -> FrozenSet[Formula]:
    return star_set(b.rules)


def star_conjunction(rules: Iterable[AtomicRule]) -> Formula:
    """Conjunction of the translations, in canonical rule order."""
    return conj_all(star(r) for r in sorted(rules))


__all__ = [
    "sharp",
    "sharp_outermost",
    "is_sharp_normal",
    "flatten_antecedents",
    "circ",
    "circ_rules",
    "circ_set",
    "star",
    "star_set",
    "star_base",
    "star_conjunction",
    "premise_of",
    "rule_of",
    "premise_rules",
    "ordered_premises",
    "require_disjunction_free",
]
